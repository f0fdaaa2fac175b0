import math

import numpy as np
import pytest

from u3cubature.core.errors import StructureError
from u3cubature.core.symmetry import (
    GENERATOR_TYPES,
    Generator,
    canonicalize,
    count_class_types,
    count_class_types_brute,
    equation_count,
    make_generator,
    orbit,
    orbit_moment_sum,
    orbit_size_formula,
    p_nu,
    signed_permutations,
)

CLASS_TYPE_COUNTS = [2, 4, 7, 12, 19, 30, 45, 67, 97, 139, 195, 272]

P3 = [0, 0, 1, 1, 2, 3, 4, 5, 7, 8, 10, 12, 14, 16, 19, 21, 24, 27, 30, 33]
EQUATION_COUNTS = [2, 4, 7, 11, 16, 23, 31, 41, 53, 67, 83, 102, 123, 147, 174, 204, 237, 274, 314, 358]

SAMPLE_PARAMS = {
    1: (1.0,),
    2: (1 / math.sqrt(2),),
    3: (0.6, 0.8),
    4: (1 / math.sqrt(3),),
    5: (1 / math.sqrt(11), 3 / math.sqrt(11)),
    6: (0.2, 0.4, math.sqrt(0.8)),
}


@pytest.mark.parametrize("n, expected", list(enumerate(CLASS_TYPE_COUNTS, start=1)))
def test_class_type_counts(n, expected):
    assert count_class_types(n) == expected


def test_class_type_count_large_dimension():
    assert count_class_types(100) == 1642992568


@pytest.mark.parametrize("n", range(1, 9))
def test_brute_force_class_types_agree(n):
    assert count_class_types_brute(n) == count_class_types(n)


@pytest.mark.slow
@pytest.mark.parametrize("n", range(9, 13))
def test_brute_force_class_types_agree_larger(n):
    assert count_class_types_brute(n) == CLASS_TYPE_COUNTS[n - 1]


@pytest.mark.parametrize("r", range(1, 21))
def test_partition_counts(r):
    assert p_nu(0, r) == (1 if r == 1 else 0)
    assert p_nu(1, r) == 1
    assert p_nu(2, r) == r // 2
    assert p_nu(3, r) == P3[r - 1]


@pytest.mark.parametrize("m, expected", list(enumerate(EQUATION_COUNTS, start=1)))
def test_equation_counts(m, expected):
    assert equation_count(m) == expected


def test_orbit_size_formula_matches_class_table():
    for t in GENERATOR_TYPES:
        assert orbit_size_formula(3, t.multiplicities) == t.orbit_size
    assert orbit_size_formula(3, ()) == 1


def test_orbit_size_formula_rejects_too_many_coordinates():
    with pytest.raises(StructureError):
        orbit_size_formula(3, (2, 2))


def test_signed_permutations_form_a_group():
    mats = signed_permutations()
    assert mats.shape == (48, 3, 3)
    keys = {m.tobytes() for m in mats}
    assert len(keys) == 48
    for a in mats[::7]:
        for b in mats[::5]:
            assert (a @ b).tobytes() in keys


@pytest.mark.parametrize("class_index", range(1, 7))
def test_orbit_size_and_closure(class_index):
    g = make_generator(class_index, SAMPLE_PARAMS[class_index])
    pts = orbit(g)
    assert len(pts) == GENERATOR_TYPES[class_index].orbit_size
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-15)
    keys = {tuple(np.round(p, 12)) for p in pts}
    for mat in signed_permutations():
        for p in pts:
            assert tuple(np.round(mat @ p, 12) + 0.0) in keys


def test_origin_orbit_is_one_point():
    pts = orbit(Generator(GENERATOR_TYPES[0], ()))
    assert pts.shape == (1, 3)


@pytest.mark.parametrize("class_index", range(1, 7))
def test_canonicalize_recovers_generator(class_index):
    g = make_generator(class_index, SAMPLE_PARAMS[class_index])
    for p in orbit(g):
        back = canonicalize(p)
        assert back.class_index == class_index
        np.testing.assert_allclose(back.params, g.params, atol=1e-14)


def test_canonicalize_is_idempotent_on_random_points():
    rng = np.random.default_rng(1)
    for p in rng.normal(size=(10000, 3)):
        g = canonicalize(p, tol=0.0)
        again = canonicalize(g.coordinates(), tol=0.0)
        assert again == g


def test_canonicalize_repeated_larger_value():
    g = canonicalize((0.3, -0.9, 0.9))
    assert g.class_index == 5
    assert g.params == (0.9, 0.3)


def test_generator_validation():
    with pytest.raises(StructureError):
        Generator(GENERATOR_TYPES[3], (0.8, 0.6))
    with pytest.raises(StructureError):
        Generator(GENERATOR_TYPES[5], (0.5, 0.5))
    with pytest.raises(StructureError):
        Generator(GENERATOR_TYPES[1], (0.0,))
    with pytest.raises(StructureError):
        make_generator(7, (1.0,))


def test_make_generator_normalizes_signs_and_order():
    g = make_generator(3, (0.94, -0.33))
    assert g.params == (0.33, 0.94)


def test_orbit_moment_sum_odd_exponent_vanishes():
    g = make_generator(6, SAMPLE_PARAMS[6])
    assert abs(orbit_moment_sum(g, (1, 2, 0))) < 1e-14
    assert abs(orbit_moment_sum(g, (3, 1, 1))) < 1e-14


def test_orbit_moment_sum_even_exponent():
    # six axis points, x^2 is 1 on two of them
    assert orbit_moment_sum(make_generator(1, (1.0,)), (2, 0, 0)) == pytest.approx(2.0)
