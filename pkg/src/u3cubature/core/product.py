"""
Product rules on the unit sphere from one-dimensional Gauss rules.

A Gauss-Legendre rule in z times an equally weighted rule in the azimuth
gives 2m^2 points and degree 2m-1.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import StructureError
from .rules import PointRule

NEWTON_TOL = 1e-15
NEWTON_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class Rule1D:
    """Nodes in (-1, 1), strictly increasing, with positive weights."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise StructureError("nodes and weights must be 1D arrays of equal length")
        if np.any(np.diff(self.nodes) <= 0):
            raise StructureError("nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise StructureError("weights must be positive")

    def __len__(self) -> int:
        return len(self.nodes)


def _legendre_with_derivative(m: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """P_m(x) and P_m'(x) by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, m + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    if m == 0:
        return p_prev, np.zeros_like(x)
    dp = m * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre(m: int) -> Rule1D:
    """
    m-point Gauss-Legendre rule on [-1, 1].

    Newton iteration on P_m from the usual cosine guesses; the result is
    symmetrized so that nodes and weights mirror exactly about 0.
    """
    if m < 1:
        raise StructureError(f"m must be at least 1, got {m}")
    i = np.arange(1, m + 1)
    x = np.cos(math.pi * (i - 0.25) / (m + 0.5))
    for _ in range(NEWTON_MAX_ITERATIONS):
        p, dp = _legendre_with_derivative(m, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) <= NEWTON_TOL:
            break
    _, dp = _legendre_with_derivative(m, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    order = np.argsort(x)
    x, w = x[order], w[order]
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return Rule1D(x, w)


def chebyshev_first(m: int) -> Rule1D:
    """Gauss-Chebyshev rule of the first kind: nodes cos((2i-1)pi/2m), weights pi/m."""
    if m < 1:
        raise StructureError(f"m must be at least 1, got {m}")
    i = np.arange(m, 0, -1)
    nodes = np.cos((2 * i - 1) * math.pi / (2 * m))
    return Rule1D(nodes, np.full(m, math.pi / m))


def u3_product_rule(m: int) -> PointRule:
    """
    2m^2-point product rule of degree 2m-1 on the unit sphere.

    Points are (sqrt(1-y^2) sin t, sqrt(1-y^2) cos t, y) for the m Legendre
    nodes y and the 2m angles t = (2i-1)pi/(2m), weights (pi/m) A_y. The
    angles come from the m-point Chebyshev rule: cos t runs over its nodes
    and each node gives t and 2pi - t with the Chebyshev weight.
    """
    legendre = gauss_legendre(m)
    chebyshev = chebyshev_first(m)
    cos_t = np.concatenate([chebyshev.nodes, chebyshev.nodes])
    sin_half = np.sqrt(1.0 - chebyshev.nodes ** 2)
    sin_t = np.concatenate([sin_half, -sin_half])
    azimuth_weights = np.concatenate([chebyshev.weights, chebyshev.weights])

    y = np.repeat(legendre.nodes, 2 * m)
    radius = np.sqrt(1.0 - y * y)
    points = np.column_stack([radius * np.tile(sin_t, m), radius * np.tile(cos_t, m), y])
    weights = np.repeat(legendre.weights, 2 * m) * np.tile(azimuth_weights, m)

    if len(np.unique(points, axis=0)) != len(points):
        raise StructureError(f"product rule for m={m} has coincident points")
    return PointRule(points, weights, degree=2 * m - 1, name=f"U3:product-{2 * m - 1}-{2 * m * m}")


def product_point_count(degree: int) -> int:
    """Points of the product rule reaching an odd degree."""
    if degree < 1 or degree % 2 == 0:
        raise StructureError(f"degree must be odd and positive, got {degree}")
    m = (degree + 1) // 2
    return 2 * m * m


def efficiency_table(rules) -> List[Tuple[int, int, int, int]]:
    """
    Compare fully symmetric rules with product rules of the same degree.

    Args:
        rules: CubatureRules, one per degree

    Returns:
        Rows (degree, fully symmetric N, product N, ratio in whole percent)
    """
    rows = []
    for rule in sorted(rules, key=lambda r: r.degree):
        n_product = product_point_count(rule.degree)
        rows.append((rule.degree, rule.cost, n_product, round(100 * rule.cost / n_product)))
    return rows
