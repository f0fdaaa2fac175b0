"""
Exact moments of even monomials over the unit sphere.

I[x^(2j1) y^(2j2) z^(2j3)] = 4 pi (2j1-1)!! (2j2-1)!! (2j3-1)!! / (2(j1+j2+j3)+1)!!
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, Tuple

from .errors import StructureError


@dataclass(frozen=True)
class Moment:
    """Moment value numerator/denominator * pi, fraction in lowest terms."""

    numerator: int
    denominator: int
    exponents: Tuple[int, int, int]

    @property
    def ratio(self) -> Fraction:
        """Value divided by pi."""
        return Fraction(self.numerator, self.denominator)

    @property
    def value(self) -> float:
        return self.numerator / self.denominator * math.pi

    def __str__(self) -> str:
        if self.numerator == 0:
            return "0"
        head = "π" if self.numerator == 1 else f"{self.numerator}π"
        return head if self.denominator == 1 else f"{head}/{self.denominator}"


@lru_cache(maxsize=None)
def double_factorial(k: int) -> int:
    """k!! with (-1)!! = 0!! = 1."""
    if k <= 0:
        return 1
    return k * double_factorial(k - 2)


def _even_ratio(j1: int, j2: int, j3: int) -> Fraction:
    top = 4 * double_factorial(2 * j1 - 1) * double_factorial(2 * j2 - 1) * double_factorial(2 * j3 - 1)
    return Fraction(top, double_factorial(2 * (j1 + j2 + j3) + 1))


def moment(j1: int, j2: int, j3: int) -> Moment:
    """
    Exact integral of x^(2j1) y^(2j2) z^(2j3) over the unit sphere.

    Args:
        j1, j2, j3: Half exponents, nonnegative

    Returns:
        Moment as a rational multiple of pi
    """
    js = (int(j1), int(j2), int(j3))
    if any(j < 0 for j in js):
        raise StructureError(f"exponents must be nonnegative, got {js}")
    ratio = _even_ratio(*js)
    return Moment(ratio.numerator, ratio.denominator, js)


def monomial_moment(a: int, b: int, c: int) -> Fraction:
    """
    Integral of x^a y^b z^c over the sphere divided by pi.

    Any odd exponent gives exactly zero.
    """
    if a < 0 or b < 0 or c < 0:
        raise StructureError(f"exponents must be nonnegative, got {(a, b, c)}")
    if a % 2 or b % 2 or c % 2:
        return Fraction(0)
    return _even_ratio(a // 2, b // 2, c // 2)


def sorted_triples(m: int) -> Iterator[Tuple[int, int, int]]:
    """Sorted triples j1 <= j2 <= j3 with j1 + j2 + j3 <= m."""
    for j1 in range(m // 3 + 1):
        for j2 in range(j1, (m - j1) // 2 + 1):
            for j3 in range(j2, m - j1 - j2 + 1):
                yield (j1, j2, j3)


class MomentTable:
    """All moments for sorted exponent triples with sum at most m."""

    def __init__(self, m: int):
        if m < 1:
            raise StructureError(f"m must be at least 1, got {m}")
        self.m = m
        self._entries: Dict[Tuple[int, int, int], Moment] = {t: moment(*t) for t in sorted_triples(m)}

    def __getitem__(self, exponents: Tuple[int, int, int]) -> Moment:
        key = tuple(sorted(exponents))
        if key not in self._entries:
            raise KeyError(f"{exponents} is outside the table for m={self.m}")
        return self._entries[key]

    def __contains__(self, exponents) -> bool:
        return tuple(sorted(exponents)) in self._entries

    def __iter__(self):
        return iter(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def keys(self):
        return self._entries.keys()


def moment_table(m: int) -> MomentTable:
    return MomentTable(m)
