"""Core cubature functionality."""

from .config import SolveConfig, SearchConfig, VerifyConfig
from .search import RuleStructure, enumerate_structures, first_minima, lp_lower_bound
from .star import StarSystem, assemble, render_star
from .solver import MomentSolver, solve
from .product import u3_product_rule, efficiency_table
from .rules import CubatureRule, PointRule, expand, integrate, verify, classify
from .bundled import builtin_rules, get_rule

__all__ = [
    "SolveConfig",
    "SearchConfig",
    "VerifyConfig",
    "RuleStructure",
    "enumerate_structures",
    "first_minima",
    "lp_lower_bound",
    "StarSystem",
    "assemble",
    "render_star",
    "MomentSolver",
    "solve",
    "u3_product_rule",
    "efficiency_table",
    "CubatureRule",
    "PointRule",
    "expand",
    "integrate",
    "verify",
    "classify",
    "builtin_rules",
    "get_rule",
]
