"""
Structure search for fully symmetric rules.

A structure {K0..K6} counts generators per class type. Consistency
constraints give necessary conditions on the counts; the search finds all
integer structures satisfying them with point count N between the LP
relaxation bound and a user limit, ordered by N and then lexically.
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from .errors import EvaluationError, StructureError
from .symmetry import GENERATOR_TYPES, p_nu

# Points per generator and variables per generator, indexed by class type.
ORBIT_SIZES = np.array([t.orbit_size for t in GENERATOR_TYPES])
VARIABLES_PER_GENERATOR = np.array([1 + t.param_count for t in GENERATOR_TYPES])

# Left-hand sides of the four sphere constraints, columns K0..K6.
U3_MATRIX = np.array([
    [0, 1, 1, 2, 1, 2, 3],
    [0, 0, 0, 0, 1, 2, 3],
    [0, 0, 0, 2, 0, 0, 3],
    [0, 0, 0, 0, 0, 0, 3],
])

# Left-hand sides of the thirteen general 3D constraints (K0 <= 1 is a bound).
GENERAL_MATRIX = np.array([
    [0, 0, 0, 0, 0, 3, 4],
    [0, 0, 0, 0, 2, 3, 4],
    [0, 0, 0, 3, 0, 3, 4],
    [0, 0, 0, 3, 2, 3, 4],
    [0, 0, 2, 3, 0, 3, 4],
    [0, 2, 0, 3, 0, 3, 4],
    [0, 0, 2, 3, 2, 3, 4],
    [0, 2, 0, 3, 2, 3, 4],
    [0, 2, 2, 3, 0, 3, 4],
    [0, 0, 0, 0, 0, 0, 4],
    [0, 0, 0, 3, 0, 0, 4],
    [1, 2, 2, 3, 2, 3, 4],
])


@dataclass(frozen=True)
class RuleStructure:
    """Generator counts K0..K6."""

    counts: Tuple[int, int, int, int, int, int, int]

    def __post_init__(self):
        if len(self.counts) != 7:
            raise StructureError(f"a structure has 7 counts K0..K6, got {len(self.counts)}")
        if any(int(k) != k or k < 0 for k in self.counts):
            raise StructureError(f"structure counts must be nonnegative integers, got {self.counts}")
        object.__setattr__(self, "counts", tuple(int(k) for k in self.counts))

    @classmethod
    def from_sphere_counts(cls, k1_to_k6: Sequence[int]) -> "RuleStructure":
        """Structure with K0 = 0 from the six counts K1..K6."""
        if len(k1_to_k6) != 6:
            raise StructureError(f"expected 6 counts K1..K6, got {len(k1_to_k6)}")
        return cls((0,) + tuple(k1_to_k6))

    def __getitem__(self, class_index: int) -> int:
        return self.counts[class_index]

    @property
    def sphere_counts(self) -> Tuple[int, ...]:
        return self.counts[1:]

    @property
    def cost(self) -> int:
        return cost(self)

    @property
    def var_count(self) -> int:
        return var_count(self)

    def is_u3(self) -> bool:
        """K0 = 0 and K1, K2, K4 in {0, 1}."""
        k = self.counts
        return k[0] == 0 and k[1] <= 1 and k[2] <= 1 and k[4] <= 1

    def require_u3(self) -> None:
        if not self.is_u3():
            raise StructureError(f"structure {self.counts} needs K0 = 0 and K1, K2, K4 <= 1 on the sphere")

    def __str__(self) -> str:
        return "(" + ",".join(str(k) for k in self.sphere_counts) + ")"


def cost(structure: RuleStructure) -> int:
    """Number of points N of a rule with this structure."""
    return int(ORBIT_SIZES @ np.array(structure.counts))


def var_count(structure: RuleStructure) -> int:
    """Number of unknowns v in the moment system."""
    return int(VARIABLES_PER_GENERATOR @ np.array(structure.counts))


def _p3(r: int) -> int:
    return p_nu(3, r) if r > 0 else 0


def u3_rhs(m: int) -> Tuple[int, int, int, int]:
    """
    Right-hand sides of the four sphere constraints for degree 2m+1.

    The partial sums of p_2 and p_3 collapse to shifted values of p_3.
    """
    if m < 1:
        raise StructureError(f"m must be at least 1, got {m}")
    return (
        p_nu(1, m) + p_nu(2, m) + p_nu(3, m),
        _p3(m),
        _p3(m - 3),
        _p3(m - 6),
    )


def _sum(lo: int, hi: int, term: Callable[[int], int]) -> int:
    return sum(term(r) for r in range(lo, hi + 1))


def general3d_rhs(m: int) -> Tuple[int, ...]:
    """Right-hand sides of the twelve general 3D inequalities (empty sums are 0)."""
    if m < 1:
        raise StructureError(f"m must be at least 1, got {m}")
    p1 = lambda r: p_nu(1, r)
    p2 = lambda r: p_nu(2, r)
    p3 = lambda r: p_nu(3, r)
    return (
        _sum(3, m, lambda r: p3(r) - 1),
        _sum(3, m, p3),
        _sum(3, m, lambda r: p2(r) + p3(r) - 2),
        _sum(2, m, lambda r: p2(r) + p3(r) - 1),
        _sum(2, m, lambda r: p2(r) + p3(r) - 1),
        _sum(2, m, lambda r: p2(r) + p3(r) - 1),
        _sum(2, m, lambda r: p2(r) + p3(r)),
        _sum(2, m, lambda r: p2(r) + p3(r)),
        _sum(2, m, lambda r: p2(r) + p3(r)),
        _sum(9, m, lambda r: p3(r) - (r - 3)),
        _sum(6, m, lambda r: p2(r) + p3(r) - (r - 1)),
        1 + _sum(1, m, lambda r: p1(r) + p2(r) + p3(r)),
    )


def satisfies_u3(structure: RuleStructure, m: int) -> bool:
    """True iff the structure is a sphere structure meeting all four constraints."""
    if not structure.is_u3():
        return False
    lhs = U3_MATRIX @ np.array(structure.counts)
    return bool(np.all(lhs >= np.array(u3_rhs(m))))


def satisfies_general3d(structure: RuleStructure, m: int) -> bool:
    """True iff all thirteen general 3D constraints hold."""
    if structure[0] > 1:
        return False
    lhs = GENERAL_MATRIX @ np.array(structure.counts)
    return bool(np.all(lhs >= np.array(general3d_rhs(m))))


@dataclass(frozen=True)
class LpRelaxationResult:
    """Lower bound on N from the relaxation with integrality dropped."""

    m: int
    N_lb: float
    fractional_K: Tuple[float, ...]  # K0..K6

    @property
    def n_min(self) -> int:
        """Smallest integer N an integer structure can reach."""
        return math.ceil(self.N_lb - 1e-9)


def _constraints(m: int, general3d: bool) -> Tuple[np.ndarray, np.ndarray]:
    if general3d:
        return GENERAL_MATRIX, np.array(general3d_rhs(m))
    return U3_MATRIX, np.array(u3_rhs(m))


def _count_bounds(general3d: bool, k_bound: Optional[int]) -> List[Tuple[int, Optional[int]]]:
    if general3d:
        return [(0, 1)] + [(0, k_bound)] * 6
    return [(0, 0), (0, 1), (0, 1), (0, k_bound), (0, 1), (0, k_bound), (0, k_bound)]


def lp_lower_bound(m: int, general3d: bool = False) -> LpRelaxationResult:
    """
    Minimize N over real counts subject to the consistency constraints.

    Args:
        m: Rule degree is 2m+1
        general3d: Use the thirteen general constraints instead of the sphere ones

    Returns:
        LpRelaxationResult; only N_lb is unique, fractional_K is one optimizer
    """
    matrix, rhs = _constraints(m, general3d)
    try:
        result = linprog(
            c=ORBIT_SIZES.astype(float),
            A_ub=-matrix.astype(float),
            b_ub=-rhs.astype(float),
            bounds=_count_bounds(general3d, None),
            method="highs",
        )
    except Exception as ex:
        raise EvaluationError(f"Failed to solve LP relaxation for m={m}: {ex}")
    if result.status != 0:
        raise EvaluationError(f"LP relaxation for m={m} did not solve: {result.message}")
    return LpRelaxationResult(m, float(result.fun), tuple(float(k) for k in result.x))


@dataclass(frozen=True)
class StructureSolution:
    """A feasible integer structure with its position in the sorted search output."""

    structure: RuleStructure
    N: int
    v: int
    minimum_index: int  # i: rank of N among distinct N values
    lexical_index: int  # j: rank within the equal-N group


def _candidates(bounds: List[Tuple[int, int]], n_max: int) -> np.ndarray:
    """All count vectors within bounds whose cost is at most n_max, K0 outermost."""
    out: List[Tuple[int, ...]] = []
    current = [0] * 7

    def walk(index: int, budget: int) -> None:
        if index == 7:
            out.append(tuple(current))
            return
        lo, hi = bounds[index]
        size = int(ORBIT_SIZES[index])
        for k in range(lo, hi + 1):
            spent = k * size
            if spent > budget:
                break
            current[index] = k
            walk(index + 1, budget - spent)
        current[index] = 0

    walk(0, n_max)
    return np.array(out, dtype=int).reshape(-1, 7)


def enumerate_structures(
    m: int,
    k_bound: int = 20,
    n_max: Optional[int] = None,
    general3d: bool = False,
    status_callback: Optional[Callable[[str], None]] = None,
) -> List[StructureSolution]:
    """
    All feasible integer structures with N between the LP bound and n_max.

    Args:
        m: Rule degree is 2m+1
        k_bound: Upper bound on the unbounded counts
        n_max: Largest N reported; defaults to ceil(1.5 * N_lb)
        general3d: Use the thirteen general constraints, K0 in {0, 1}
        status_callback: Optional callback for progress messages

    Returns:
        Solutions sorted by N, then lexically on K1..K6 (K0 first in general 3D mode)
    """
    if k_bound < 1:
        raise StructureError(f"k_bound must be at least 1, got {k_bound}")
    emit = status_callback or (lambda msg: None)

    bound = lp_lower_bound(m, general3d)
    n_min = bound.n_min
    if n_max is None:
        n_max = math.ceil(1.5 * bound.N_lb - 1e-9)
    emit(f"m={m}: N_lb={bound.N_lb:.6g}, searching {n_min} <= N <= {n_max}")
    if n_max < n_min:
        return []

    candidates = _candidates(_count_bounds(general3d, k_bound), n_max)
    matrix, rhs = _constraints(m, general3d)
    costs = candidates @ ORBIT_SIZES
    feasible = np.all(candidates @ matrix.T >= rhs, axis=1) & (costs >= n_min)
    rows = sorted((int(n), tuple(int(k) for k in ks)) for n, ks in zip(costs[feasible], candidates[feasible]))
    emit(f"m={m}: {len(rows)} feasible structures out of {len(candidates)} candidates")

    solutions: List[StructureSolution] = []
    i = j = 0
    last_n = None
    for n, ks in rows:
        if n != last_n:
            i, j, last_n = i + 1, 1, n
        else:
            j += 1
        structure = RuleStructure(ks)
        solutions.append(StructureSolution(structure, n, var_count(structure), i, j))
    return solutions


def first_minima(
    m: int,
    count: int = 5,
    k_bound: int = 20,
    general3d: bool = False,
    status_callback: Optional[Callable[[str], None]] = None,
) -> List[StructureSolution]:
    """
    Structures belonging to the first `count` distinct values of N.

    The upper limit on N starts at 1.5 * N_lb and grows until enough distinct
    values are present or the count bounds cap the search.
    """
    if count < 1:
        raise StructureError(f"count must be at least 1, got {count}")
    bound = lp_lower_bound(m, general3d)
    n_max = max(math.ceil(1.5 * bound.N_lb - 1e-9), bound.n_min)
    ceiling = int(ORBIT_SIZES @ np.array([b or 0 for _, b in _count_bounds(general3d, k_bound)]))
    while True:
        solutions = enumerate_structures(m, k_bound, n_max, general3d, status_callback)
        if (solutions and solutions[-1].minimum_index >= count) or n_max >= ceiling:
            break
        n_max = min(ceiling, 2 * n_max)
    return [s for s in solutions if s.minimum_index <= count]
