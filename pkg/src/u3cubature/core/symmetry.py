"""
Fully symmetric (octahedral) equivalence classes of points in three dimensions.

Generators are canonical representatives of the classes, orbits are the
distinct images under the 48 signed permutations. The module also holds the
counting functions used to size the moment system and to count class types
in n dimensions.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .errors import StructureError


@dataclass(frozen=True)
class GeneratorType:
    """One of the seven class types of fully symmetric points in 3D."""

    class_index: int
    label: str
    orbit_size: int
    param_count: int
    multiplicities: Tuple[int, ...]
    weight_name: str
    param_names: Tuple[str, ...]
    latex_params: Tuple[str, ...]

    def __str__(self) -> str:
        return self.label


GENERATOR_TYPES: Tuple[GeneratorType, ...] = (
    GeneratorType(0, "[0]", 1, 0, (), "o", (), ()),
    GeneratorType(1, "[1]", 6, 1, (1,), "a", ("α",), (r"\alpha",)),
    GeneratorType(2, "[2]", 12, 1, (2,), "b", ("β",), (r"\beta",)),
    GeneratorType(3, "[1,1]", 24, 2, (1, 1), "c", ("γ", "δ"), (r"\gamma", r"\delta")),
    GeneratorType(4, "[3]", 8, 1, (3,), "d", ("ε",), (r"\epsilon",)),
    GeneratorType(5, "[2,1]", 24, 2, (2, 1), "e", ("ζ", "η"), (r"\zeta", r"\eta")),
    GeneratorType(6, "[1,1,1]", 48, 3, (1, 1, 1), "f", ("θ", "μ", "λ"), (r"\theta", r"\mu", r"\lambda")),
)

_TYPE_BY_MULTIPLICITIES = {t.multiplicities: t for t in GENERATOR_TYPES}


def generator_type(class_index: int) -> GeneratorType:
    if not 0 <= class_index <= 6:
        raise StructureError(f"class index must be in 0..6, got {class_index}")
    return GENERATOR_TYPES[class_index]


@dataclass(frozen=True)
class Generator:
    """
    Canonical generator of an equivalence class.

    params holds the distinct nonzero coordinates. For [1,1] and [1,1,1] they
    are strictly increasing; for [2,1] they are (ζ, η) with ζ the repeated one.
    """

    gtype: GeneratorType
    params: Tuple[float, ...]

    def __post_init__(self):
        t = self.gtype
        if len(self.params) != t.param_count:
            raise StructureError(f"type {t.label} takes {t.param_count} parameters, got {len(self.params)}")
        if any(not math.isfinite(p) or p <= 0.0 for p in self.params):
            raise StructureError(f"type {t.label} parameters must be positive and finite, got {self.params}")
        if t.class_index in (3, 6) and any(a >= b for a, b in zip(self.params, self.params[1:])):
            raise StructureError(f"type {t.label} parameters must be strictly increasing, got {self.params}")
        if t.class_index == 5 and self.params[0] == self.params[1]:
            raise StructureError(f"type {t.label} needs ζ != η, got {self.params}")

    @property
    def class_index(self) -> int:
        return self.gtype.class_index

    def coordinates(self) -> Tuple[float, float, float]:
        """Canonical coordinate vector, e.g. (ζ, ζ, η) for type [2,1]."""
        p = self.params
        index = self.class_index
        if index == 0:
            return (0.0, 0.0, 0.0)
        if index == 1:
            return (p[0], 0.0, 0.0)
        if index == 2:
            return (p[0], p[0], 0.0)
        if index == 3:
            return (p[0], p[1], 0.0)
        if index == 4:
            return (p[0], p[0], p[0])
        if index == 5:
            return (p[0], p[0], p[1])
        return (p[0], p[1], p[2])


def make_generator(class_index: int, params: Sequence[float]) -> Generator:
    """
    Build a generator from parameters in any sign or order.

    Absolute values are taken and interchangeable parameters sorted, so
    (0.94, -0.33) for type [1,1] becomes (0.33, 0.94).
    """
    t = generator_type(class_index)
    values = [abs(float(p)) for p in params]
    if class_index in (3, 6):
        values.sort()
    return Generator(t, tuple(values))


def canonicalize(point: Sequence[float], tol: float = 1e-12) -> Generator:
    """
    Generator of the equivalence class containing a point.

    Args:
        point: Any 3-vector
        tol: Absolute tolerance for treating a coordinate as zero and two
            coordinates as equal; 0 gives exact comparisons

    Returns:
        The canonical Generator
    """
    values = sorted(abs(float(x)) for x in point)
    values = [v for v in values if v > tol]

    groups: List[List[float]] = []
    for v in values:
        if groups and v - groups[-1][0] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])

    multiplicities = tuple(len(g) for g in groups)
    if len(groups) == 2 and multiplicities == (1, 2):
        # smaller value single, larger repeated: still type [2,1]
        return Generator(GENERATOR_TYPES[5], (groups[1][0], groups[0][0]))
    if multiplicities not in _TYPE_BY_MULTIPLICITIES:
        raise StructureError(f"cannot classify point {tuple(point)}")
    gtype = _TYPE_BY_MULTIPLICITIES[multiplicities]
    if gtype.class_index == 5:
        return Generator(gtype, (groups[0][0], groups[1][0]))
    return Generator(gtype, tuple(g[0] for g in groups))


@lru_cache(maxsize=1)
def signed_permutations() -> np.ndarray:
    """The 48 signed permutation matrices of the octahedral group, shape (48, 3, 3)."""
    mats = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1.0, -1.0), repeat=3):
            m = np.zeros((3, 3))
            for row, (col, s) in enumerate(zip(perm, signs)):
                m[row, col] = s
            mats.append(m)
    out = np.array(mats)
    out.setflags(write=False)
    return out


def orbit(g: Generator) -> np.ndarray:
    """
    All distinct images of a generator under the 48 signed permutations.

    Returns:
        Array of shape (orbit_size, 3) in first-seen order
    """
    base = np.array(g.coordinates())
    seen = {}
    for image in signed_permutations() @ base:
        key = tuple(float(x) + 0.0 for x in image)  # folds -0.0 into 0.0
        seen.setdefault(key, None)
    points = np.array(list(seen.keys()))
    if len(points) != g.gtype.orbit_size:
        raise StructureError(
            f"generator {g.params} of type {g.gtype.label} yields {len(points)} points, "
            f"expected {g.gtype.orbit_size}"
        )
    return points


def orbit_moment_sum(g: Generator, exponents: Sequence[int]) -> float:
    """Sum of x^a y^b z^c over the orbit of g, by explicit expansion."""
    pts = orbit(g)
    a, b, c = (int(e) for e in exponents)
    return math.fsum(pts[:, 0] ** a * pts[:, 1] ** b * pts[:, 2] ** c)


def orbit_size_formula(n: int, multiplicities: Sequence[int]) -> int:
    """
    Number of distinct points in an n-dimensional fully symmetric class.

    Args:
        n: Dimension
        multiplicities: Repetition counts l_1..l_p of the distinct nonzero
            coordinates; r = sum(l) nonzero coordinates in total

    Returns:
        2^r n! / ((n-r)! l_1! ... l_p!)
    """
    ls = [int(l) for l in multiplicities]
    if n < 1:
        raise StructureError(f"dimension must be at least 1, got {n}")
    if any(l < 1 for l in ls):
        raise StructureError(f"multiplicities must be positive, got {tuple(ls)}")
    r = sum(ls)
    if r > n:
        raise StructureError(f"multiplicities sum to {r}, more than the dimension {n}")
    size = 2 ** r * math.factorial(n) // math.factorial(n - r)
    for l in ls:
        size //= math.factorial(l)
    return size


@lru_cache(maxsize=None)
def _parts_exact(r: int, k: int) -> int:
    """Partitions of r into exactly k positive parts."""
    if r == 0 and k == 0:
        return 1
    if r <= 0 or k <= 0 or k > r:
        return 0
    return _parts_exact(r - 1, k - 1) + _parts_exact(r - k, k)


def p_nu(nu: int, r: int) -> int:
    """
    Number of solutions of j_1 + ... + j_nu = r with 1 <= j_1 <= ... <= j_nu.

    For nu = 0 this is the single I[1] row, counted at r = 1.
    """
    if nu < 0:
        raise StructureError(f"nu must be nonnegative, got {nu}")
    if nu == 0:
        return 1 if r == 1 else 0
    return _parts_exact(r, nu)


def equation_count(m: int) -> int:
    """Number of moment equations for a rule of degree 2m+1 in 3D."""
    if m < 1:
        raise StructureError(f"m must be at least 1, got {m}")
    return sum(p_nu(nu, r) for r in range(1, m + 1) for nu in range(4))


def partition_numbers(n: int) -> List[int]:
    """Partition numbers p(0)..p(n)."""
    counts = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            counts[total] += counts[total - part]
    return counts


def count_class_types(n: int) -> int:
    """
    Number e+1 of class types of fully symmetric points in n dimensions.

    Every class type is a partition of its number of nonzero coordinates, so
    e+1 = p(0) + p(1) + ... + p(n).
    """
    if n < 1:
        raise StructureError(f"n must be at least 1, got {n}")
    return sum(partition_numbers(n))


def count_class_types_brute(n: int) -> int:
    """
    Count class types by enumerating multiplicity strings.

    Strings run 1..1 2..2 ... with nonincreasing run lengths and length at
    most n; the empty string is the origin class.
    """
    if n < 1:
        raise StructureError(f"n must be at least 1, got {n}")
    string = [0] * (n + 1)
    count = 1  # origin

    def runs_nonincreasing(length: int) -> bool:
        runs = [1]
        for i in range(1, length):
            if string[i] == string[i - 1]:
                runs[-1] += 1
            else:
                runs.append(1)
        return all(a >= b for a, b in zip(runs, runs[1:]))

    def build(last: int, length: int) -> None:
        nonlocal count
        if not runs_nonincreasing(length):
            return
        count += 1
        if length == n:
            return
        string[length] = last
        build(last, length + 1)
        if last < n:
            string[length] = last + 1
            build(last + 1, length + 1)
        string[length] = 0

    string[0] = 1
    build(1, 1)
    return count
