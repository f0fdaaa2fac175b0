import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from u3cubature.core.errors import StructureError
from u3cubature.core.moments import double_factorial, moment, moment_table, monomial_moment, sorted_triples

# (j1, j2, j3, numerator, denominator): I[x^2j1 y^2j2 z^2j3] = numerator * pi / denominator
MOMENT_TABLE = [
    (0, 0, 1, 4, 3),
    (0, 4, 6, 4, 12597),
    (0, 0, 2, 4, 5),
    (0, 5, 5, 12, 46189),
    (0, 0, 3, 4, 7),
    (1, 1, 1, 4, 105),
    (0, 0, 4, 4, 9),
    (1, 1, 2, 4, 315),
    (0, 0, 5, 4, 11),
    (1, 1, 3, 4, 693),
    (0, 0, 6, 4, 13),
    (1, 1, 4, 4, 1287),
    (0, 0, 7, 4, 15),
    (1, 1, 5, 4, 2145),
    (0, 0, 8, 4, 17),
    (1, 1, 6, 4, 3315),
    (0, 0, 9, 4, 19),
    (1, 1, 7, 4, 4845),
    (0, 0, 10, 4, 21),
    (1, 1, 8, 4, 6783),
    (0, 1, 1, 4, 15),
    (1, 2, 2, 4, 1155),
    (0, 1, 2, 4, 35),
    (1, 2, 3, 4, 3003),
    (0, 1, 3, 4, 63),
    (1, 2, 4, 4, 6435),
    (0, 1, 4, 4, 99),
    (1, 2, 5, 4, 12155),
    (0, 1, 5, 4, 143),
    (1, 2, 6, 4, 20995),
    (0, 1, 6, 4, 195),
    (1, 2, 7, 4, 33915),
    (0, 1, 7, 4, 255),
    (1, 3, 3, 4, 9009),
    (0, 1, 8, 4, 323),
    (1, 3, 4, 4, 21879),
    (0, 1, 9, 4, 399),
    (1, 3, 5, 4, 46189),
    (0, 2, 2, 4, 105),
    (1, 3, 6, 4, 88179),
    (0, 2, 3, 4, 231),
    (1, 4, 4, 28, 415701),
    (0, 2, 4, 4, 429),
    (1, 4, 5, 4, 138567),
    (0, 2, 5, 4, 715),
    (2, 2, 2, 4, 5005),
    (0, 2, 6, 4, 1105),
    (2, 2, 3, 4, 15015),
    (0, 2, 7, 4, 1615),
    (2, 2, 4, 4, 36465),
    (0, 2, 8, 4, 2261),
    (2, 2, 5, 12, 230945),
    (0, 3, 3, 20, 3003),
    (2, 2, 6, 4, 146965),
    (0, 3, 4, 4, 1287),
    (2, 3, 3, 4, 51051),
    (0, 3, 5, 4, 2431),
    (2, 3, 4, 4, 138567),
    (0, 3, 6, 4, 4199),
    (2, 3, 5, 4, 323323),
    (0, 3, 7, 4, 6783),
    (2, 4, 4, 4, 415701),
    (0, 4, 4, 28, 21879),
    (3, 3, 3, 20, 969969),
    (0, 4, 5, 28, 46189),
    (3, 3, 4, 20, 2909907),
]


def sphere_integral(f):
    """Integral over the unit sphere in spherical coordinates."""
    def integrand(phi, theta):
        s = math.sin(theta)
        return f(s * math.cos(phi), s * math.sin(phi), math.cos(theta)) * s

    value, _ = integrate.dblquad(integrand, 0.0, math.pi, 0.0, 2.0 * math.pi, epsabs=1e-14, epsrel=1e-13)
    return value


@pytest.mark.parametrize("j1, j2, j3, num, den", MOMENT_TABLE)
def test_moment_table_entries(j1, j2, j3, num, den):
    m = moment(j1, j2, j3)
    assert m.ratio == Fraction(num, den)
    assert m.value == pytest.approx(num * math.pi / den, rel=1e-15)


def test_moment_is_symmetric_in_exponents():
    assert moment(3, 1, 0).ratio == moment(0, 1, 3).ratio == moment(1, 3, 0).ratio


def test_moment_of_one_is_sphere_area():
    m = moment(0, 0, 0)
    assert m.ratio == 4
    assert str(m) == "4π"


def test_moment_string():
    assert str(moment(0, 0, 1)) == "4π/3"


@pytest.mark.parametrize("j1, j2, j3", list(sorted_triples(6)))
def test_moments_match_numerical_quadrature(j1, j2, j3):
    exact = moment(j1, j2, j3).value
    value = sphere_integral(lambda x, y, z: x ** (2 * j1) * y ** (2 * j2) * z ** (2 * j3))
    assert value == pytest.approx(exact, rel=1e-12)


def test_monomial_moment_odd_exponents_vanish():
    assert monomial_moment(1, 1, 2) == 0
    assert monomial_moment(0, 0, 3) == 0
    assert monomial_moment(2, 0, 0) == Fraction(4, 3)


def test_odd_moment_numerically_zero():
    value = sphere_integral(lambda x, y, z: x * y * z ** 2)
    assert abs(value) < 1e-12


def test_negative_exponent_rejected():
    with pytest.raises(StructureError):
        moment(-1, 0, 0)
    with pytest.raises(StructureError):
        monomial_moment(0, -2, 0)


def test_double_factorial():
    assert [double_factorial(k) for k in (-1, 0, 1, 5, 6)] == [1, 1, 1, 15, 48]


def test_sorted_triples_count_matches_system_rows():
    # one row per sorted triple: the equation counts 2, 4, 7, 11
    assert [len(list(sorted_triples(m))) for m in range(1, 5)] == [2, 4, 7, 11]


def test_moment_table_lookup_sorts_keys():
    table = moment_table(4)
    assert len(table) == 11
    assert table[(2, 0, 1)] == table[(0, 1, 2)]
    assert (1, 1, 1) in table
    with pytest.raises(KeyError):
        table[(0, 0, 5)]


def test_moment_table_covers_table_entries():
    table = moment_table(10)
    for j1, j2, j3, num, den in MOMENT_TABLE:
        if j1 + j2 + j3 <= 10:
            assert table[(j1, j2, j3)].ratio == Fraction(num, den)
    assert np.all(np.array([m.value for m in table]) > 0)
