"""
Multi-start damped least squares for the moment system.

Each restart draws a random start, pins the fixed parameters to their exact
values and runs MINPACK Levenberg-Marquardt with the analytic Jacobian.
"""

import contextlib
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
import scipy
from scipy.optimize import least_squares

from .config import SolveConfig
from .star import PINNED, StarSystem

_EPS = float(np.finfo(float).eps)

# MINPACK wrappers before SciPy 1.15 keep the Python callback in module globals
_SCIPY_VERSION = tuple(int(part) for part in scipy.__version__.split(".")[:2])
_LM_GUARD = threading.Lock() if _SCIPY_VERSION < (1, 15) else contextlib.nullcontext()


@dataclass
class RestartResult:
    """Outcome of a single restart."""

    index: int
    x: np.ndarray
    residual_norm: float
    nfev: int
    message: str = ""
    admissible: bool = True

    def converged(self, residual_tol: float) -> bool:
        """Small residual at an admissible point."""
        return self.admissible and self.residual_norm <= residual_tol

    def rank(self, residual_tol: float) -> Tuple[int, float, int]:
        """Sort key: admissible converged restarts first, then residual, then index."""
        return (0 if self.converged(residual_tol) else 1, self.residual_norm, self.index)


@dataclass
class SolveOutcome:
    """Best restart and, in collect mode, the distinct converged solutions."""

    best_x: np.ndarray
    best_residual_norm: float
    converged: bool
    restart_index: int
    restarts_run: int = 0
    solutions: List[np.ndarray] = field(default_factory=list)


class MomentSolver:
    """
    Solves a StarSystem from many random starting points.
    Restarts are independent and run on a thread pool; results depend only
    on the configuration, never on scheduling.
    """

    def __init__(self, cfg: Optional[SolveConfig] = None, status_callback: Optional[Callable[[str], None]] = None):
        """
        Initialize solver.

        Args:
            cfg: Solver configuration
            status_callback: Optional callback for status updates
        """
        self.cfg = cfg or SolveConfig()
        self.cfg.validate()
        self.status_callback = status_callback or (lambda msg: None)

    def _emit_status(self, msg: str):
        try:
            self.status_callback(msg)
        except Exception:
            pass

    def starting_point(self, system: StarSystem, restart_index: int) -> np.ndarray:
        """Uniform(0, 1) start from the (seed, restart) substream, pinned entries set exactly."""
        rng = np.random.default_rng([self.cfg.seed, restart_index])
        x0 = rng.uniform(0.0, 1.0, size=system.n_variables)
        for c, value in PINNED.items():
            if system.structure[c]:
                # a single generator: weight first, then its one parameter
                x0[system.layout[c] + 1] = value
        return x0

    def run_restart(self, system: StarSystem, restart_index: int) -> RestartResult:
        """Run one Levenberg-Marquardt solve."""
        x0 = self.starting_point(system, restart_index)
        tol = max(self.cfg.step_tol, _EPS)
        # MINPACK's lm needs at least as many rows as unknowns
        method = "lm" if system.n_equations >= system.n_variables else "trf"
        guard = _LM_GUARD if method == "lm" else contextlib.nullcontext()
        try:
            with guard:
                result = least_squares(
                    system.residual,
                    x0,
                    jac=system.jacobian,
                    method=method,
                    ftol=tol,
                    xtol=tol,
                    gtol=tol,
                    max_nfev=self.cfg.max_iterations,
                )
            x = result.x
            norm = float(np.max(np.abs(system.residual(x)))) if system.n_equations else 0.0
            if not np.isfinite(norm):
                norm = float("inf")
            return RestartResult(
                restart_index, x, norm, int(result.nfev), str(result.message), is_admissible(system, x)
            )
        except Exception as ex:
            return RestartResult(restart_index, x0, float("inf"), 0, f"Failed to run restart: {ex}")

    def solve(self, system: StarSystem) -> SolveOutcome:
        """
        Run restarts in batches until one converges or the budget is spent.

        Returns:
            SolveOutcome with the lowest residual (ties to the lowest restart index)
        """
        cfg = self.cfg
        results: List[RestartResult] = []
        solutions: List[np.ndarray] = []
        self._emit_status(
            f"m={system.m} {system.structure}: {system.n_equations} equations, "
            f"{system.n_variables} unknowns, up to {cfg.restarts} restarts"
        )

        with ThreadPoolExecutor(max_workers=cfg.workers, thread_name_prefix="solver") as pool:
            for start in range(0, cfg.restarts, cfg.batch_size):
                indices = range(start, min(start + cfg.batch_size, cfg.restarts))
                batch = list(pool.map(lambda i: self.run_restart(system, i), indices))
                results.extend(batch)
                for r in batch:
                    if r.converged(cfg.residual_tol):
                        self._collect(system, r, solutions)
                best = min(results, key=lambda r: r.rank(cfg.residual_tol))
                self._emit_status(
                    f"restarts {start + 1}-{indices[-1] + 1}: best residual {best.residual_norm:.3e} "
                    f"(restart {best.index})"
                )
                if cfg.stop_on_convergence and len(solutions) >= cfg.collect:
                    break

        best = min(results, key=lambda r: r.rank(cfg.residual_tol))
        converged = best.converged(cfg.residual_tol)
        self._emit_status(
            f"{'converged' if converged else 'did not converge'}: residual {best.residual_norm:.3e} "
            f"after {len(results)} restarts"
        )
        return SolveOutcome(best.x, best.residual_norm, converged, best.index, len(results), solutions)

    def _collect(self, system: StarSystem, result: RestartResult, solutions: List[np.ndarray]) -> None:
        if len(solutions) >= self.cfg.collect:
            return
        candidate = system.canonical(result.x)
        for existing in solutions:
            if np.max(np.abs(existing - candidate)) <= self.cfg.distinct_tol:
                return
        solutions.append(candidate)


def solve(
    system: StarSystem,
    config: Optional[SolveConfig] = None,
    status_callback: Optional[Callable[[str], None]] = None,
) -> SolveOutcome:
    """Solve the system with a fresh MomentSolver."""
    return MomentSolver(config, status_callback).solve(system)


def residual_norm(system: StarSystem, x) -> Tuple[float, int]:
    """Largest absolute residual and the row where it occurs."""
    r = np.abs(system.residual(x))
    row = int(np.argmax(r))
    return float(r[row]), row


def is_admissible(system: StarSystem, x, gap: float = 1e-8) -> bool:
    """
    True when every generator of x is a proper member of its class type.

    Parameters must be clearly nonzero, and parameters that have to differ
    ([1,1], [2,1], [1,1,1]) must differ by more than gap.
    """
    for c, entries in system.unpack(system.canonical(x)).items():
        for _, params in entries:
            if any(not np.isfinite(p) or p <= gap for p in params):
                return False
            if c in (3, 5, 6) and any(abs(a - b) <= gap for i, a in enumerate(params) for b in params[i + 1:]):
                return False
    return True
