"""F_q- and geometric irreducibility of plane cubics.

A geometrically reducible cubic has a linear factor over some extension.
If F has F_q coefficients and a linear factor l, the Frobenius orbit of l
consists of factors of F, so it has size 1, 2 or 3.  Size 2 makes l * l^sigma
an F_q-conic whose cofactor is an F_q-line; size 1 is an F_q-line already.
So F is geometrically reducible iff it has a linear factor over F_{q^3}, and
that is what the checks below scan for.  The F_{q^6} cross-check in the test
suite guards this reduction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .forms import (ConicForm, CubicForm, LinearForm, divides, enumerate_lines, form_to_json,
                    frobenius_form, line_count, line_from_index, line_index, multiply)
from .gf import FieldCtx, FieldError, TowerCtx, find_embedding
from .linalg import solve
from .linescan import engine_for

CENSUS_MAX_Q = 5


class Kind(str, Enum):
    GEOM_IRREDUCIBLE = "GeomIrreducible"
    FQ_IRREDUCIBLE_GEOM_REDUCIBLE = "FqIrreducibleGeomReducible"
    FQ_REDUCIBLE = "FqReducible"
    ZERO = "Zero"


@dataclass(frozen=True)
class WitnessLine:
    line: LinearForm
    degree: int  # degree over F_q of the line's field of definition

    def to_json(self):
        return {"line": form_to_json(self.line), "degree": self.degree}


@dataclass
class CubicVerdict:
    kind: Kind
    factors: list = field(default_factory=list)
    quotient: ConicForm | None = None

    @property
    def orbit(self) -> bool:
        return self.kind is Kind.FQ_IRREDUCIBLE_GEOM_REDUCIBLE

    @property
    def geometrically_irreducible(self) -> bool:
        return self.kind is Kind.GEOM_IRREDUCIBLE

    def to_json(self):
        out = {"kind": self.kind.value,
               "witness_lines": [w.to_json() for w in self.factors],
               "orbit": self.orbit}
        if self.quotient is not None:
            out["quotient"] = form_to_json(self.quotient)
        return out


def has_linear_factor_over(F: CubicForm, K: FieldCtx):
    """First line over K (enumeration order) dividing F, or None.

    Plain per-line restriction; the reference path for small fields.
    """
    if F.is_zero():
        raise ValueError("zero form")
    G = F if F.field == K else F.lift(find_embedding(F.field, K))
    for L in enumerate_lines(K):
        if divides(L, G):
            return L
    return None


def divide_by_line(F: CubicForm, L: LinearForm) -> ConicForm:
    """The conic Q with L * Q = F; raises if L does not divide F."""
    K = F.field
    cols = [multiply(L, ConicForm.monomial(K, m)).coeffs for m in ConicForm.MONOMIALS]
    rows = [[col[i] for col in cols] for i in range(10)]
    sol = solve(K, rows, list(F.coeffs))
    if sol is None:
        raise ValueError("line does not divide the form")
    return ConicForm(K, tuple(sol))


def cubic_engine(tower: TowerCtx):
    return engine_for(tower.base, tower.cubic, tower.base_to_cubic)


def dividing_lines(F: CubicForm, tower: TowerCtx) -> list[LinearForm]:
    """All lines over F_{q^3} dividing F, in enumeration order."""
    if F.is_zero():
        raise ValueError("zero form")
    hits, _ = cubic_engine(tower).scan([F])
    return [line_from_index(tower.cubic, h.line) for h in hits]


def is_geometrically_irreducible(F: CubicForm, tower: TowerCtx) -> bool:
    if F.is_zero():
        raise ValueError("zero form")
    hits, _ = cubic_engine(tower).scan([F], early_abort=True)
    return not hits


def _rational_line(L: LinearForm, tower: TowerCtx):
    try:
        return L.normalize().descend(tower.base_to_cubic)
    except FieldError:
        return None


def verdict_from_lines(F: CubicForm, lines, tower: TowerCtx) -> CubicVerdict:
    """Build the verdict for an F_q-cubic given every F_{q^3}-line dividing it."""
    if F.is_zero():
        return CubicVerdict(Kind.ZERO)
    if not lines:
        return CubicVerdict(Kind.GEOM_IRREDUCIBLE)
    rational = [r for r in (_rational_line(L, tower) for L in lines) if r is not None]
    if rational:
        rational.sort(key=line_index)
        w = rational[0]
        return CubicVerdict(Kind.FQ_REDUCIBLE, [WitnessLine(w, 1)], divide_by_line(F, w))
    first = min(lines, key=line_index).normalize()
    orbit = [first, frobenius_form(first, tower, 1).normalize(), frobenius_form(first, tower, 2).normalize()]
    if len(set(orbit)) != 3:
        raise AssertionError("non-rational line with orbit size != 3 over F_{q^3}")
    product = multiply(*orbit)
    if not product.same_curve(F.lift(tower.base_to_cubic)):
        raise AssertionError("conjugate lines do not multiply back to the cubic")
    return CubicVerdict(Kind.FQ_IRREDUCIBLE_GEOM_REDUCIBLE, [WitnessLine(L, 3) for L in orbit])


def classify(F: CubicForm, tower: TowerCtx) -> CubicVerdict:
    if F.is_zero():
        return CubicVerdict(Kind.ZERO)
    w = has_linear_factor_over(F, tower.base)
    if w is not None:
        return CubicVerdict(Kind.FQ_REDUCIBLE, [WitnessLine(w, 1)], divide_by_line(F, w))
    return verdict_from_lines(F, dividing_lines(F, tower), tower)


# --- bulk oracles ------------------------------------------------------------------


def normalized_cubics(F: FieldCtx):
    """Every cubic with first nonzero coefficient 1, in coefficient-code order."""
    q = F.size
    for lead in range(10):
        for rest in itertools.product(range(q), repeat=9 - lead):
            yield CubicForm(F, (0,) * lead + (1,) + tuple(reversed(rest)))


def normalized_count(q: int, n_coeffs: int = 10) -> int:
    return (q**n_coeffs - 1) // (q - 1)


def reducible_mask(forms, tower: TowerCtx, K: FieldCtx | None = None) -> np.ndarray:
    """Vectorized: does some line over K (default F_{q^3}) divide each form?"""
    K = K or tower.cubic
    emb = tower.embedding(tower.base, K)
    eng = engine_for(tower.base, K, emb)
    return eng.divisible_mask(forms)


def census_reducible(tower: TowerCtx, max_q: int = CENSUS_MAX_Q) -> set:
    """Normalized geometrically reducible F_q-cubics, built from their factors.

    (i) F_q-line times F_q-conic; (ii) products of Frobenius orbits of
    F_{q^3}-lines that are not F_q-rational.
    """
    if tower.q > max_q:
        raise ValueError(f"census is limited to q <= {max_q}")
    B, K = tower.base, tower.cubic
    out = set()
    lines = [L for L in enumerate_lines(B)]
    conics = [ConicForm(B, c) for c in _normalized_tuples(B, 6)]
    for L in lines:
        for Q in conics:
            out.add(multiply(L, Q).normalize())
    seen = set()
    for idx in range(line_count(K)):
        if idx in seen:
            continue
        L = line_from_index(K, idx)
        if _rational_line(L, tower) is not None:
            continue
        L1 = frobenius_form(L, tower, 1).normalize()
        L2 = frobenius_form(L, tower, 2).normalize()
        seen.update((line_index(L1), line_index(L2)))
        out.add(multiply(L, L1, L2).normalize().descend(tower.base_to_cubic))
    return out


def _normalized_tuples(F: FieldCtx, n: int):
    q = F.size
    for lead in range(n):
        for rest in itertools.product(range(q), repeat=n - 1 - lead):
            yield (0,) * lead + (1,) + tuple(reversed(rest))
