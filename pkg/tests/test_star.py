import math

import numpy as np
import pytest

from u3cubature.core.bundled import builtin_rules
from u3cubature.core.errors import StructureError
from u3cubature.core.search import RuleStructure, enumerate_structures
from u3cubature.core.star import StarSystem, assemble, render_star
from u3cubature.core.symmetry import equation_count, make_generator, orbit_moment_sum

SAMPLE_PARAMS = {
    1: (0.9,),
    2: (0.6,),
    3: (0.3, 0.7),
    4: (0.55,),
    5: (0.45, 0.8),
    6: (0.2, 0.5, 0.75),
}


def single_class_structure(class_index):
    counts = [0] * 6
    counts[class_index - 1] = 1
    return RuleStructure.from_sphere_counts(counts)


@pytest.mark.parametrize("rule", builtin_rules(), ids=lambda r: r.name)
def test_row_counts(rule):
    system = assemble(rule.m, rule.structure)
    generators = sum(rule.structure.sphere_counts)
    assert system.n_moment_rows == equation_count(rule.m)
    assert system.n_equations == equation_count(rule.m) + generators
    assert system.n_variables == rule.structure.var_count


@pytest.mark.parametrize("rule", builtin_rules(), ids=lambda r: r.name)
def test_bundled_rules_solve_the_system(rule):
    system = assemble(rule.m, rule.structure)
    r = system.residual(rule.to_vector(system))
    assert np.max(np.abs(r)) < 1e-10


@pytest.mark.parametrize("class_index", range(1, 7))
def test_rows_match_orbit_sums(class_index):
    system = assemble(5, single_class_structure(class_index))
    params = SAMPLE_PARAMS[class_index]
    x = system.pack({class_index: [(1.0, params)]})
    sums = (system.residual(x) + system.rhs)[: system.n_moment_rows]
    g = make_generator(class_index, params)
    for value, eq in zip(sums, system.equations):
        exponents = tuple(2 * e for e in eq.exponents)
        assert value == pytest.approx(orbit_moment_sum(g, exponents), rel=1e-13, abs=1e-14)


def first_minimum_structures():
    for m in range(1, 7):
        s = enumerate_structures(m)[0]
        yield m, s.structure


@pytest.mark.parametrize("m, structure", list(first_minimum_structures()))
def test_jacobian_matches_finite_differences(m, structure):
    system = assemble(m, structure)
    rng = np.random.default_rng(m)
    h = 1e-6
    for _ in range(20):
        x = rng.uniform(0.0, 1.0, size=system.n_variables)
        jac = system.jacobian(x)
        fd = np.empty_like(jac)
        for k in range(system.n_variables):
            step = np.zeros_like(x)
            step[k] = h
            fd[:, k] = (system.residual(x + step) - system.residual(x - step)) / (2 * h)
        np.testing.assert_allclose(jac, fd, rtol=0, atol=1e-5)


def test_pack_unpack_layout():
    structure = RuleStructure.from_sphere_counts((1, 0, 1, 1, 2, 0))
    system = StarSystem(7, structure)
    blocks = {
        1: [(0.1, (1.0,))],
        3: [(0.2, (0.3, 0.9))],
        4: [(0.3, (0.57,))],
        5: [(0.4, (0.1, 0.2)), (0.5, (0.3, 0.4))],
    }
    x = system.pack(blocks)
    # weights of a class come first, then each parameter array
    assert list(x[system.layout[5]:system.layout[5] + 6]) == [0.4, 0.5, 0.1, 0.3, 0.2, 0.4]
    assert system.unpack(x) == blocks
    names = system.variable_names()
    assert names[system.layout[5]:system.layout[5] + 6] == ["e1", "e2", "ζ1", "ζ2", "η1", "η2"]


def test_canonical_form():
    system = StarSystem(7, RuleStructure.from_sphere_counts((1, 0, 1, 1, 2, 0)))
    x = system.pack({
        1: [(0.1, (-1.0,))],
        3: [(0.2, (0.9, -0.3))],
        4: [(0.3, (0.57,))],
        5: [(0.5, (0.3, 0.4)), (0.4, (-0.1, 0.2))],
    })
    canonical = system.unpack(system.canonical(x))
    assert canonical[1] == [(0.1, (1.0,))]
    assert canonical[3] == [(0.2, (0.3, 0.9))]
    assert canonical[5] == [(0.4, (0.1, 0.2)), (0.5, (0.3, 0.4))]


def test_wrong_vector_length():
    system = assemble(1, RuleStructure.from_sphere_counts((1, 0, 0, 0, 0, 0)))
    with pytest.raises(StructureError):
        system.residual(np.zeros(3))
    with pytest.raises(StructureError):
        system.pack({})


def test_non_sphere_structure_rejected():
    with pytest.raises(StructureError):
        assemble(2, RuleStructure((1, 1, 0, 0, 1, 0, 0)))


def test_render_text():
    system = assemble(1, RuleStructure.from_sphere_counts((1, 0, 0, 0, 0, 0)))
    assert render_star(system).splitlines() == [
        "I[1] = 6 a₁",
        "I[x²] = 2 a₁ α₁²",
        "α₁ = 1",
        "There are a total of 3 equations.",
    ]


def test_render_text_mixed_classes():
    system = assemble(3, RuleStructure.from_sphere_counts((0, 0, 0, 1, 1, 0)))
    lines = render_star(system).splitlines()
    assert "I[x²y²z²] = 8 d₁ ε₁⁶ + 8 e₁ (ζ₁⁴ η₁² + ζ₁⁴ η₁² + ζ₁⁴ η₁²)" in lines
    assert "2 ζ₁² + η₁² = 1" in lines
    assert "ε₁ = 1/√3" in lines
    assert lines[-1] == f"There are a total of {system.n_equations} equations."


def test_render_latex():
    system = assemble(2, RuleStructure.from_sphere_counts((1, 0, 0, 1, 0, 0)))
    lines = render_star(system, latex=True).splitlines()
    assert lines[0] == r"I [ 1 ] & = & 6 a_{1} + 8 d_{1} \\"
    assert r"\epsilon_{1} & = & 1/\sqrt{3} \\" in lines
    assert lines[-1] == "% There are a total of 6 equations."


def test_rhs_holds_exact_moments():
    system = assemble(2, RuleStructure.from_sphere_counts((1, 0, 0, 1, 0, 0)))
    assert system.rhs[0] == pytest.approx(4 * math.pi)
    assert system.rhs[1] == pytest.approx(4 * math.pi / 3)
    assert system.rhs[-1] == pytest.approx(1 / math.sqrt(3))
