"""
Cubature rule data model, naming, expansion, integration and verification.

A CubatureRule stores generators and per-orbit weights; a PointRule is the
explicit list of points and weights, either expanded from a CubatureRule or
built directly (product rules).
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import EvaluationError, StructureError
from .moments import monomial_moment
from .search import RuleStructure, enumerate_structures, satisfies_u3
from .star import PINNED, SPHERE_CLASSES, StarSystem
from .symmetry import GENERATOR_TYPES, Generator, make_generator, orbit

PROVENANCES = ("bundled", "solved", "imported")
SPHERE_TOL = 1e-12


@dataclass(frozen=True)
class Block:
    """One generator of a rule: its weight and class parameters."""

    weight: float
    params: Tuple[float, ...]


def constraint_violation(class_index: int, params: Sequence[float]) -> float:
    """Absolute violation of the on-sphere condition for one generator."""
    if class_index == 0:
        return 1.0  # the origin is never on the sphere
    if class_index in PINNED:
        return abs(abs(params[0]) - PINNED[class_index])
    if class_index == 5:
        return abs(2.0 * params[0] ** 2 + params[1] ** 2 - 1.0)
    return abs(sum(p * p for p in params) - 1.0)


@dataclass
class CubatureRule:
    """
    Fully symmetric rule of degree 2m+1 on the unit sphere.

    Attributes:
        m: Degree parameter
        structure: Generator counts K0..K6
        blocks: Class index -> generators of that class, in order
        name: Rule name, e.g. "U3:5-1.1(1,0,0,1,0,0)-14"
        provenance: "bundled", "solved" or "imported"
    """

    m: int
    structure: RuleStructure
    blocks: Dict[int, List[Block]]
    name: str = ""
    provenance: str = "solved"
    sphere_tol: float = field(default=SPHERE_TOL, repr=False)

    def __post_init__(self):
        if self.m < 1:
            raise StructureError(f"m must be at least 1, got {self.m}")
        self.structure.require_u3()
        if self.provenance not in PROVENANCES:
            raise StructureError(f"provenance must be one of {PROVENANCES}, got '{self.provenance}'")
        self.blocks = {c: list(self.blocks.get(c, [])) for c in SPHERE_CLASSES if self.blocks.get(c)}
        for c in SPHERE_CLASSES:
            found = len(self.blocks.get(c, []))
            if found != self.structure[c]:
                raise StructureError(f"class {c} has {found} generators, structure says {self.structure[c]}")
            for g, block in enumerate(self.blocks.get(c, [])):
                label = f"{GENERATOR_TYPES[c].weight_name}{g + 1}"
                if len(block.params) != GENERATOR_TYPES[c].param_count:
                    raise StructureError(f"{label}: expected {GENERATOR_TYPES[c].param_count} parameters")
                if not all(math.isfinite(v) for v in (block.weight,) + tuple(block.params)):
                    raise StructureError(f"{label}: non-finite value")
                violation = constraint_violation(c, block.params)
                if violation > self.sphere_tol:
                    raise StructureError(
                        f"{label}: generator {block.params} is off the sphere by {violation:.3e}"
                    )
        if not self.name:
            self.name = rule_name(self)

    @property
    def degree(self) -> int:
        return 2 * self.m + 1

    @property
    def cost(self) -> int:
        return self.structure.cost

    def generators(self) -> List[Tuple[str, float, Generator]]:
        """(weight label, weight, canonical generator) for every block."""
        out = []
        for c, entries in self.blocks.items():
            for g, block in enumerate(entries):
                label = f"{GENERATOR_TYPES[c].weight_name}{g + 1}"
                out.append((label, block.weight, make_generator(c, block.params)))
        return out

    def to_vector(self, system: StarSystem) -> np.ndarray:
        """This rule as a variable vector of the matching moment system."""
        return system.pack({c: [(b.weight, b.params) for b in entries] for c, entries in self.blocks.items()})


@dataclass
class PointRule:
    """Explicit points on the sphere with their weights."""

    points: np.ndarray
    weights: np.ndarray
    degree: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.points.ndim != 2 or self.points.shape[1] != 3:
            raise StructureError(f"points must have shape (N, 3), got {self.points.shape}")
        if self.weights.shape != (len(self.points),):
            raise StructureError(f"{len(self.points)} points but {self.weights.shape} weights")
        if not (np.all(np.isfinite(self.points)) and np.all(np.isfinite(self.weights))):
            raise StructureError("points and weights must be finite")

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class VerificationReport:
    """Exactness of a rule against the exact moments up to a claimed degree."""

    degree: int
    max_even_error: float
    max_odd_error: float
    worst_monomial: Tuple[int, int, int]
    weight_min: float
    max_norm_deviation: float
    tolerance: float
    passes: bool


@dataclass
class GoodnessReport:
    """Positivity of weights and placement of points."""

    all_weights_positive: bool
    all_points_on_sphere: bool
    negative_weights: List[Tuple[str, float]]
    max_norm_deviation: float

    @property
    def good(self) -> bool:
        return self.all_weights_positive and self.all_points_on_sphere


AnyRule = Union[CubatureRule, PointRule]


def rule_name(rule: CubatureRule, i: Optional[int] = None, j: Optional[int] = None) -> str:
    """
    Name "U3:(2m+1)-i.j(K1,...,K6)-N".

    When the minima indices are not given they are looked up by enumerating
    structures; structures outside the sphere constraints get no i.j part.
    """
    if i is None or j is None:
        located = locate_structure(rule.m, rule.structure)
        if located is not None:
            i, j = located
    counts = ",".join(str(k) for k in rule.structure.sphere_counts)
    index = f"{i}.{j}" if i is not None and j is not None else ""
    return f"U3:{rule.degree}-{index}({counts})-{rule.cost}"


def locate_structure(m: int, structure: RuleStructure) -> Optional[Tuple[int, int]]:
    """Minima indices (i, j) of a structure in the enumeration for m, if feasible."""
    if not satisfies_u3(structure, m):
        return None
    k_bound = max(20, structure[3], structure[5], structure[6])
    for s in enumerate_structures(m, k_bound=k_bound, n_max=structure.cost):
        if s.structure == structure:
            return s.minimum_index, s.lexical_index
    return None


def rule_from_solution(
    system: StarSystem,
    x,
    provenance: str = "solved",
    name: str = "",
) -> CubatureRule:
    """
    CubatureRule from a solution vector, in canonical form.

    Raises:
        StructureError: if a generator is degenerate or off the sphere
    """
    blocks = {
        c: [Block(w, params) for w, params in entries]
        for c, entries in system.unpack(system.canonical(x)).items()
    }
    rule = CubatureRule(system.m, system.structure, blocks, name=name, provenance=provenance)
    rule.generators()  # raises StructureError for degenerate generators
    return rule


def expand(rule: AnyRule) -> PointRule:
    """Explicit points and weights, one orbit per generator."""
    if isinstance(rule, PointRule):
        return rule
    points, weights = [], []
    for _, weight, generator in rule.generators():
        pts = orbit(generator)
        points.append(pts)
        weights.append(np.full(len(pts), weight))
    return PointRule(np.vstack(points), np.concatenate(weights), degree=rule.degree, name=rule.name)


def integrate(rule: AnyRule, f: Callable[[np.ndarray], float]) -> float:
    """
    Apply the rule to f with compensated summation.

    Raises:
        EvaluationError: if f returns a non-finite value
    """
    pr = expand(rule)
    terms = []
    for index, (point, weight) in enumerate(zip(pr.points, pr.weights)):
        try:
            value = float(f(point))
        except Exception as ex:
            raise EvaluationError(f"Failed to evaluate integrand: {ex}", index)
        if not math.isfinite(value):
            raise EvaluationError(f"integrand returned {value}", index)
        terms.append(weight * value)
    return math.fsum(terms)


@lru_cache(maxsize=32)
def _exact_moment_tensor(degree: int) -> np.ndarray:
    size = degree + 1
    exact = np.zeros((size, size, size))
    for a in range(size):
        for b in range(size - a):
            for c in range(size - a - b):
                exact[a, b, c] = float(monomial_moment(a, b, c)) * math.pi
    return exact


def verify(rule: AnyRule, claimed_degree: Optional[int] = None, tol: Optional[float] = None) -> VerificationReport:
    """
    Check a rule on every monomial x^a y^b z^c with a+b+c <= claimed_degree.

    Args:
        rule: CubatureRule or PointRule
        claimed_degree: Odd degree to test; defaults to the rule's own degree
        tol: Absolute tolerance; defaults to 1e-10 * 4 pi

    Returns:
        VerificationReport
    """
    pr = expand(rule)
    degree = claimed_degree if claimed_degree is not None else pr.degree
    if degree is None or degree < 1 or degree % 2 == 0:
        raise StructureError(f"claimed degree must be odd and positive, got {degree}")
    tol = 1e-10 * 4.0 * math.pi if tol is None else tol

    powers = np.arange(degree + 1)
    x, y, z = (pr.points[:, k][:, None] ** powers[None, :] for k in range(3))
    sums = np.einsum("i,ia,ib,ic->abc", pr.weights, x, y, z, optimize=True)
    errors = np.abs(sums - _exact_moment_tensor(degree))

    a, b, c = np.meshgrid(powers, powers, powers, indexing="ij")
    in_range = a + b + c <= degree
    even = in_range & (a % 2 == 0) & (b % 2 == 0) & (c % 2 == 0)
    odd = in_range & ~even
    even_errors = np.where(even, errors, -1.0)
    worst = np.unravel_index(np.argmax(even_errors), even_errors.shape)
    max_even = float(even_errors[worst])
    max_odd = float(np.max(errors[odd])) if np.any(odd) else 0.0

    return VerificationReport(
        degree=degree,
        max_even_error=max_even,
        max_odd_error=max_odd,
        worst_monomial=tuple(int(v) for v in worst),
        weight_min=float(np.min(pr.weights)),
        max_norm_deviation=float(np.max(np.abs(np.linalg.norm(pr.points, axis=1) - 1.0))),
        tolerance=tol,
        passes=max_even <= tol and max_odd <= tol,
    )


def classify(rule: AnyRule, tol: float = SPHERE_TOL) -> GoodnessReport:
    """
    Goodness of a rule: positive weights and all points on the sphere.

    Offending weights are listed by name (e.g. "d1") for CubatureRules and by
    point index for PointRules.
    """
    if isinstance(rule, CubatureRule):
        negatives = [(label, w) for label, w, _ in rule.generators() if not w > 0]
    else:
        negatives = [(f"w{i}", float(w)) for i, w in enumerate(rule.weights) if not w > 0]
    pr = expand(rule)
    deviation = float(np.max(np.abs(np.linalg.norm(pr.points, axis=1) - 1.0)))
    return GoodnessReport(
        all_weights_positive=not negatives,
        all_points_on_sphere=deviation <= tol,
        negative_weights=negatives,
        max_norm_deviation=deviation,
    )
