"""
u3cubature - fully symmetric cubature rules for the unit sphere in three dimensions.

This package searches for rule structures, assembles and solves the nonlinear
moment equations, builds product rules, and verifies, stores and applies the
resulting rules.
"""

__version__ = "1.0.0"
__author__ = "u3cubature Team"

from .core.config import SolveConfig, SearchConfig, VerifyConfig
from .core.errors import CubatureError
from .core.search import RuleStructure, enumerate_structures, lp_lower_bound
from .core.star import assemble
from .core.solver import MomentSolver
from .core.rules import CubatureRule, PointRule, expand, integrate, verify, classify
from .core.bundled import builtin_rules

__all__ = [
    "SolveConfig",
    "SearchConfig",
    "VerifyConfig",
    "CubatureError",
    "RuleStructure",
    "enumerate_structures",
    "lp_lower_bound",
    "assemble",
    "MomentSolver",
    "CubatureRule",
    "PointRule",
    "expand",
    "integrate",
    "verify",
    "classify",
    "builtin_rules",
]
