"""
The nonlinear moment system for a fully symmetric rule on the unit sphere.

Rows equate the rule sum of an even monomial to its exact moment:
subsystem I holds I[1] and I[x^2j], subsystem II the I[x^2j y^2k] rows,
subsystem III the I[x^2j y^2k z^2l] rows, followed by one on-sphere
constraint per generator. Variables are laid out class by class; inside a
class block all weights come first, then each parameter array in turn.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import StructureError
from .moments import Moment, moment
from .search import RuleStructure
from .symmetry import GENERATOR_TYPES
from ..utils.helpers import subscript, superscript

SPHERE_CLASSES = (1, 2, 3, 4, 5, 6)

# Row I[1]: points per orbit.
_I1_COEFFS = {1: 6, 2: 12, 3: 24, 4: 8, 5: 24, 6: 48}

# Exact values of the pinned parameters.
PINNED = {1: 1.0, 2: 1.0 / math.sqrt(2.0), 4: 1.0 / math.sqrt(3.0)}
_PINNED_TEXT = {1: "1", 2: "1/√2", 4: "1/√3"}
_PINNED_LATEX = {1: "1", 2: r"1/\sqrt{2}", 4: r"1/\sqrt{3}"}

# d(constraint)/d(param) is slope * param, or slope alone for the pinned classes.
_CONSTRAINT_SLOPES = {1: (1.0,), 2: (1.0,), 3: (2.0, 2.0), 4: (1.0,), 5: (4.0, 2.0), 6: (2.0, 2.0, 2.0)}

# A class contribution to one row: (coefficient, [(multiplier, exponents per parameter)]).
Terms = Tuple[int, List[Tuple[int, Tuple[int, ...]]]]


@dataclass(frozen=True)
class Equation:
    """One row of the system."""

    tag: str  # "I", "II", "III" or "constraint"
    exponents: Tuple[int, int, int] = (0, 0, 0)  # half exponents of x, y, z
    class_index: int = 0  # constraint rows only
    generator: int = 0  # 0-based generator within its class, constraint rows only

    @property
    def is_constraint(self) -> bool:
        return self.tag == "constraint"


def _row_terms(eq: Equation, class_index: int) -> Terms:
    """Contribution of one class to a moment row, per generator."""
    j, k, l = (2 * e for e in eq.exponents)
    c = class_index
    if eq.tag == "I" and eq.exponents == (0, 0, 0):
        zeros = (0,) * GENERATOR_TYPES[c].param_count
        return _I1_COEFFS[c], [(1, zeros)]
    if eq.tag == "I":
        return {
            1: (2, [(1, (j,))]),
            2: (8, [(1, (j,))]),
            3: (8, [(1, (j, 0)), (1, (0, j))]),
            4: (8, [(1, (j,))]),
            5: (8, [(2, (j, 0)), (1, (0, j))]),
            6: (16, [(1, (j, 0, 0)), (1, (0, j, 0)), (1, (0, 0, j))]),
        }[c]
    if eq.tag == "II":
        return {
            1: (0, []),
            2: (4, [(1, (j + k,))]),
            3: (4, [(1, (j, k)), (1, (k, j))]),
            4: (8, [(1, (j + k,))]),
            5: (8, [(1, (j + k, 0)), (1, (j, k)), (1, (k, j))]),
            6: (8, [(1, (j, k, 0)), (1, (k, j, 0)), (1, (j, 0, k)),
                    (1, (k, 0, j)), (1, (0, j, k)), (1, (0, k, j))]),
        }[c]
    if eq.tag == "III":
        if c in (1, 2, 3):
            return 0, []
        if c == 4:
            return 8, [(1, (j + k + l,))]
        if c == 5:
            return 8, [(1, (j + k, l)), (1, (j + l, k)), (1, (k + l, j))]
        return 8, [(1, perm) for perm in itertools.permutations((j, k, l))]
    raise StructureError(f"row {eq} has no moment terms")


@dataclass
class _CompiledClass:
    rows: np.ndarray  # row index per term
    coef: np.ndarray  # coefficient times multiplier per term
    exps: np.ndarray  # (terms, params) exponents


class StarSystem:
    """
    Assembled moment system for a given degree parameter m and structure.

    Attributes:
        m: Rule degree is 2m+1
        structure: Generator counts
        layout: Offset of each present class block in the variable vector
        equations: Rows in order I, II, III, constraints
        moments: Exact moments of the moment rows
        rhs: Right-hand side of every row
    """

    def __init__(self, m: int, structure: RuleStructure):
        if m < 1:
            raise StructureError(f"m must be at least 1, got {m}")
        structure.require_u3()
        self.m = m
        self.structure = structure

        self.layout: Dict[int, int] = {}
        offset = 0
        for c in SPHERE_CLASSES:
            if structure[c]:
                self.layout[c] = offset
                offset += structure[c] * (1 + GENERATOR_TYPES[c].param_count)
        self.n_variables = offset

        self.equations: List[Equation] = _moment_rows(m)
        self.moments: List[Moment] = [moment(*sorted(eq.exponents)) for eq in self.equations]
        self.n_moment_rows = len(self.equations)
        for c in SPHERE_CLASSES:
            for g in range(structure[c]):
                self.equations.append(Equation("constraint", class_index=c, generator=g))

        rhs = [m_.value for m_ in self.moments]
        rhs += [PINNED.get(eq.class_index, 1.0) for eq in self.equations[self.n_moment_rows:]]
        self.rhs = np.array(rhs)

        self._compiled: Dict[int, _CompiledClass] = {}
        for c in self.layout:
            rows, coefs, exps = [], [], []
            for r, eq in enumerate(self.equations[: self.n_moment_rows]):
                coef, terms = _row_terms(eq, c)
                for mult, e in terms:
                    rows.append(r)
                    coefs.append(coef * mult)
                    exps.append(e)
            p = GENERATOR_TYPES[c].param_count
            self._compiled[c] = _CompiledClass(
                np.array(rows, dtype=int),
                np.array(coefs, dtype=float),
                np.array(exps, dtype=int).reshape(-1, p),
            )

    @property
    def n_equations(self) -> int:
        return len(self.equations)

    def block(self, x: np.ndarray, class_index: int) -> Tuple[np.ndarray, np.ndarray]:
        """Weights (K,) and parameters (K, p) of one class block."""
        k = self.structure[class_index]
        p = GENERATOR_TYPES[class_index].param_count
        start = self.layout[class_index]
        weights = x[start:start + k]
        params = x[start + k:start + k * (1 + p)].reshape(p, k).T
        return weights, params

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_variables,):
            raise StructureError(f"expected {self.n_variables} variables, got shape {x.shape}")
        return x

    def residual(self, x) -> np.ndarray:
        """Row sums minus right-hand sides."""
        x = self._check(x)
        out = np.zeros(self.n_equations)
        for c, comp in self._compiled.items():
            w, params = self.block(x, c)
            monomials = np.prod(params[:, None, :] ** comp.exps[None, :, :], axis=2)
            out[: self.n_moment_rows] += np.bincount(
                comp.rows, weights=comp.coef * (w @ monomials), minlength=self.n_moment_rows
            )
        for r in range(self.n_moment_rows, self.n_equations):
            out[r] = self._constraint_value(x, self.equations[r])
        return out - self.rhs

    def jacobian(self, x) -> np.ndarray:
        """Analytic derivatives of the residual, shape (rows, variables)."""
        x = self._check(x)
        jac = np.zeros((self.n_equations, self.n_variables))
        n = self.n_moment_rows
        for c, comp in self._compiled.items():
            k = self.structure[c]
            p = GENERATOR_TYPES[c].param_count
            start = self.layout[c]
            w, params = self.block(x, c)
            powers = params[:, None, :] ** comp.exps[None, :, :]
            monomials = np.prod(powers, axis=2)
            for g in range(k):
                jac[:n, start + g] = np.bincount(comp.rows, weights=comp.coef * monomials[g], minlength=n)
                for q in range(p):
                    e = comp.exps[:, q]
                    others = np.prod(np.delete(powers[g], q, axis=1), axis=1)
                    deriv = e * params[g, q] ** np.maximum(e - 1, 0) * others
                    column = start + k * (1 + q) + g
                    jac[:n, column] = np.bincount(comp.rows, weights=comp.coef * w[g] * deriv, minlength=n)
        for r in range(n, self.n_equations):
            eq = self.equations[r]
            k = self.structure[eq.class_index]
            start = self.layout[eq.class_index]
            _, params = self.block(x, eq.class_index)
            row = params[eq.generator]
            for q, f in enumerate(_CONSTRAINT_SLOPES[eq.class_index]):
                value = f if eq.class_index in PINNED else f * row[q]
                jac[r, start + k * (1 + q) + eq.generator] = value
        return jac

    def _constraint_value(self, x: np.ndarray, eq: Equation) -> float:
        _, params = self.block(x, eq.class_index)
        p = params[eq.generator]
        if eq.class_index in PINNED:
            return float(p[0])
        if eq.class_index == 5:
            return float(2.0 * p[0] ** 2 + p[1] ** 2)
        return float(np.sum(p ** 2))

    def pack(self, blocks: Dict[int, Sequence[Tuple[float, Sequence[float]]]]) -> np.ndarray:
        """
        Variable vector from per-class lists of (weight, params).

        Args:
            blocks: Mapping class index -> list of (weight, params)

        Returns:
            Vector in this system's layout
        """
        x = np.zeros(self.n_variables)
        for c in SPHERE_CLASSES:
            entries = list(blocks.get(c, []))
            if len(entries) != self.structure[c]:
                raise StructureError(f"class {c} needs {self.structure[c]} generators, got {len(entries)}")
            if not entries:
                continue
            k = len(entries)
            start = self.layout[c]
            for g, (weight, params) in enumerate(entries):
                if len(params) != GENERATOR_TYPES[c].param_count:
                    raise StructureError(f"class {c} generators take {GENERATOR_TYPES[c].param_count} parameters")
                x[start + g] = weight
                for q, value in enumerate(params):
                    x[start + k * (1 + q) + g] = value
        return x

    def unpack(self, x) -> Dict[int, List[Tuple[float, Tuple[float, ...]]]]:
        """Inverse of pack."""
        x = self._check(x)
        out: Dict[int, List[Tuple[float, Tuple[float, ...]]]] = {}
        for c in self.layout:
            w, params = self.block(x, c)
            out[c] = [(float(w[g]), tuple(float(v) for v in params[g])) for g in range(len(w))]
        return out

    def canonical(self, x) -> np.ndarray:
        """
        Canonical form of a solution vector.

        Parameters lose their signs, interchangeable parameters ([1,1] and
        [1,1,1]) are sorted, and generators of one class are sorted by
        their first parameter.
        """
        blocks = {}
        for c, entries in self.unpack(x).items():
            fixed = []
            for weight, params in entries:
                values = [abs(v) for v in params]
                if c in (3, 6):
                    values.sort()
                fixed.append((weight, tuple(values)))
            fixed.sort(key=lambda item: (item[1], item[0]))
            blocks[c] = fixed
        return self.pack(blocks)

    def variable_names(self) -> List[str]:
        names = [""] * self.n_variables
        for c in self.layout:
            t = GENERATOR_TYPES[c]
            k = self.structure[c]
            start = self.layout[c]
            for g in range(k):
                names[start + g] = f"{t.weight_name}{g + 1}"
                for q, pname in enumerate(t.param_names):
                    names[start + k * (1 + q) + g] = f"{pname}{g + 1}"
        return names


def _moment_rows(m: int) -> List[Equation]:
    rows = [Equation("I", (0, 0, 0))]
    rows += [Equation("I", (j, 0, 0)) for j in range(1, m + 1)]
    rows += [Equation("II", (j, k, 0)) for j in range(1, m + 1) for k in range(j, m - j + 1)]
    for j in range(1, m + 1):
        for k in range(j, m + 1):
            for l in range(k, m - j - k + 1):
                rows.append(Equation("III", (j, k, l)))
    return rows


def assemble(m: int, structure: RuleStructure) -> StarSystem:
    """Build the moment system for a rule of degree 2m+1 with the given structure."""
    return StarSystem(m, structure)


def residual(system: StarSystem, x) -> np.ndarray:
    return system.residual(x)


def jacobian(system: StarSystem, x) -> np.ndarray:
    return system.jacobian(x)


# Rendering

def _power(name: str, exponent: int, latex: bool) -> str:
    if exponent == 0:
        return ""
    if exponent == 1:
        return name
    return f"{name}^{{{exponent}}}" if latex else f"{name}{superscript(exponent)}"


def _symbol(base: str, index: int, latex: bool) -> str:
    return f"{base}_{{{index}}}" if latex else f"{base}{subscript(index)}"


def _monomial_label(eq: Equation, latex: bool) -> str:
    parts = [_power(v, 2 * e, latex) for v, e in zip("xyz", eq.exponents) if e]
    body = " ".join(parts) if parts else "1"
    return f"I [ {body} ]" if latex else f"I[{''.join(parts) or '1'}]"


def _class_text(c: int, g: int, coef: int, terms, latex: bool) -> str:
    t = GENERATOR_TYPES[c]
    names = t.latex_params if latex else t.param_names
    weight = _symbol(t.weight_name, g, latex)
    pieces = []
    for mult, exps in terms:
        factors = [_power(_symbol(n, g, latex), e, latex) for n, e in zip(names, exps)]
        factors = [f for f in factors if f]
        text = " ".join(factors) if factors else "1"
        pieces.append(f"{mult} {text}" if mult != 1 else text)
    if len(pieces) == 1 and pieces[0] == "1":
        return f"{coef} {weight}"
    if len(pieces) == 1:
        return f"{coef} {weight} {pieces[0]}"
    return f"{coef} {weight} ({' + '.join(pieces)})"


def _constraint_text(eq: Equation, latex: bool) -> str:
    t = GENERATOR_TYPES[eq.class_index]
    names = t.latex_params if latex else t.param_names
    g = eq.generator + 1
    syms = [_symbol(n, g, latex) for n in names]
    if eq.class_index in PINNED:
        value = (_PINNED_LATEX if latex else _PINNED_TEXT)[eq.class_index]
        return f"{syms[0]} = {value}"
    squares = [_power(s, 2, latex) for s in syms]
    if eq.class_index == 5:
        squares[0] = f"2 {squares[0]}"
    return f"{' + '.join(squares)} = 1"


def render_star(system: StarSystem, latex: bool = False) -> str:
    """
    The system as text, one equation per line, ending with the row count.

    Args:
        system: Assembled system
        latex: Emit eqnarray rows instead of plain Unicode text
    """
    lines = []
    for r, eq in enumerate(system.equations):
        if eq.is_constraint:
            text = _constraint_text(eq, latex)
            lines.append(text.replace(" = ", " & = & ") + r" \\" if latex else text)
            continue
        contributions = []
        for c in system.layout:
            coef, terms = _row_terms(eq, c)
            if not coef:
                continue
            for g in range(1, system.structure[c] + 1):
                contributions.append(_class_text(c, g, coef, terms, latex))
        lhs = _monomial_label(eq, latex)
        rhs = " + ".join(contributions) if contributions else "0"
        lines.append(f"{lhs} & = & {rhs} \\\\" if latex else f"{lhs} = {rhs}")
    total = f"There are a total of {system.n_equations} equations."
    lines.append(f"% {total}" if latex else total)
    return "\n".join(lines)
