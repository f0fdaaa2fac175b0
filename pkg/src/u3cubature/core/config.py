"""
Configuration management for the cubature toolkit.
Contains the settings used by the solver, the structure search and verification.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError
from ..utils.helpers import default_workers


@dataclass
class SolveConfig:
    """Settings for the multi-start Levenberg-Marquardt solver."""

    # Restart control
    seed: int = 1
    restarts: int = 100
    batch_size: int = 8  # restarts per batch; early stop is checked between batches
    stop_on_convergence: bool = True

    # Per-restart iteration limits
    max_iterations: int = 10000  # function evaluations per restart
    residual_tol: float = 1e-12  # converged iff max |residual| <= residual_tol
    step_tol: float = 1e-14

    # Multiple solutions
    collect: int = 1  # keep up to this many distinct converged solutions
    distinct_tol: float = 1e-6

    # Performance settings
    workers: int = field(default_factory=default_workers)

    def validate(self) -> None:
        """Raise ConfigError when a value is out of range."""
        for name in ("restarts", "batch_size", "max_iterations", "collect", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}")
        for name in ("residual_tol", "step_tol", "distinct_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")


@dataclass
class SearchConfig:
    """Settings for the integer structure search."""

    k_bound: int = 20  # upper bound on K3, K5, K6 (and every count in general 3D mode)
    n_max: Optional[int] = None  # None means ceil(n_max_factor * N_lb)
    n_max_factor: float = 1.5
    minima: int = 5  # distinct N values reported when n_max is not given
    general3d: bool = False

    def validate(self) -> None:
        """Raise ConfigError when a value is out of range."""
        if self.k_bound < 1:
            raise ConfigError(f"k_bound must be at least 1, got {self.k_bound}")
        if self.minima < 1:
            raise ConfigError(f"minima must be at least 1, got {self.minima}")
        if self.n_max_factor < 1.0:
            raise ConfigError(f"n_max_factor must be at least 1, got {self.n_max_factor}")
        if self.n_max is not None and self.n_max < 0:
            raise ConfigError(f"n_max must be nonnegative, got {self.n_max}")


@dataclass
class VerifyConfig:
    """Settings for exactness verification and goodness checks."""

    tol: Optional[float] = None  # None means 1e-10 * 4*pi
    sphere_tol: float = 1e-12

    @property
    def effective_tol(self) -> float:
        return 1e-10 * 4.0 * math.pi if self.tol is None else self.tol

    def validate(self) -> None:
        """Raise ConfigError when a value is out of range."""
        if not self.effective_tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.sphere_tol < 0:
            raise ConfigError(f"sphere_tol must be nonnegative, got {self.sphere_tol}")
