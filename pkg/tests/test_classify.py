import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cubicsys.classify import (Kind, census_reducible, classify, divide_by_line, dividing_lines,
                               has_linear_factor_over, is_geometrically_irreducible,
                               normalized_count, normalized_cubics, reducible_mask)
from cubicsys.construct import explicit_construction
from cubicsys.forms import (ConicForm, CubicForm, LinearForm, enumerate_lines, frobenius_form,
                            multiply, parse_form)
from cubicsys.gf import find_embedding, make_tower
from cubicsys.linescan import engine_for
from cubicsys.search import table_system

T2, T3 = make_tower(2), make_tower(3)


def test_linear_factor_examples():
    B = T2.base
    assert has_linear_factor_over(parse_form("xyz", B), B) == parse_form("x", B)
    assert has_linear_factor_over(parse_form("x^3+yz^2", B), T2.cubic) is None
    assert has_linear_factor_over(parse_form("x^2y+y^2z+z^2x+xyz", B), T2.cubic) is None


def test_zero_form_rejected():
    Z = CubicForm.zero(T2.base)
    for fn in (lambda: has_linear_factor_over(Z, T2.base),
               lambda: is_geometrically_irreducible(Z, T2)):
        with pytest.raises(ValueError):
            fn()
    assert classify(Z, T2).kind is Kind.ZERO


def test_table_q2_members_irreducible():
    S = table_system(2)
    from cubicsys.linsys import enumerate_members
    assert all(is_geometrically_irreducible(F, T2) for _, F in enumerate_members(S))


def test_classify_examples():
    B = T2.base
    v = classify(parse_form("x^3+xyz", B), T2)
    assert v.kind is Kind.FQ_REDUCIBLE
    assert v.factors[0].line == parse_form("x", B) and v.factors[0].degree == 1
    assert v.quotient == parse_form("x^2+yz", B, degree=2)
    assert classify(parse_form("x^3+y*z^2", B), T2).geometrically_irreducible
    assert classify(parse_form("xyz", B), T2).to_json()["kind"] == "FqReducible"


@pytest.mark.parametrize("q", [2, 3, 4])
def test_T_splits_into_conjugate_lines(q):
    w = explicit_construction(q)
    T = make_tower(q)
    Tq = w.T.descend(T.base_to_cubic)
    assert not is_geometrically_irreducible(Tq, T)
    v = classify(Tq, T)
    assert v.kind is Kind.FQ_IRREDUCIBLE_GEOM_REDUCIBLE and v.orbit
    L0, L1, L2 = (f.line for f in v.factors)
    assert frobenius_form(L0, T).normalize() == L1
    assert frobenius_form(L1, T).normalize() == L2
    assert frobenius_form(L2, T).normalize() == L0
    assert multiply(L0, L1, L2).same_curve(w.T)
    js = v.to_json()
    assert js["orbit"] and [x["degree"] for x in js["witness_lines"]] == [3, 3, 3]


@given(st.tuples(*[st.integers(0, 2)] * 3), st.tuples(*[st.integers(0, 2)] * 6),
       st.integers(1, 2))
def test_fq_reducible_quotient(lc, qc, lam):
    B = T3.base
    L, Q = LinearForm(B, lc), ConicForm(B, qc)
    if L.is_zero() or Q.is_zero():
        return
    F = multiply(L, Q).scale(lam)
    v = classify(F, T3)
    assert v.kind is Kind.FQ_REDUCIBLE
    w = v.factors[0].line
    assert w.field == B and v.quotient.field == B
    assert multiply(w, v.quotient).same_curve(F)
    assert divide_by_line(F, w) == v.quotient


def test_divide_by_non_factor_raises():
    B = T2.base
    with pytest.raises(ValueError):
        divide_by_line(parse_form("x^3+y*z^2", B), parse_form("y", B))


@pytest.mark.parametrize("q", [2, 3])
def test_vector_engine_matches_plain_line_test(q):
    T = make_tower(q)
    rng = random.Random(q)
    forms = [CubicForm(T.base, tuple(rng.randrange(q) for _ in range(10))) for _ in range(60)]
    forms = [f for f in forms if not f.is_zero()]
    mask = reducible_mask(forms, T)
    plain = [has_linear_factor_over(f, T.cubic) is not None for f in forms]
    assert list(mask) == plain
    for f in forms[:15]:
        lines = dividing_lines(f, T)
        G = f.lift(T.base_to_cubic)
        assert lines == [L for L in enumerate_lines(T.cubic) if _divides(L, G)]


def _divides(L, F):
    from cubicsys.forms import divides
    return divides(L, F)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_rational_engine_matches_plain_line_test(q):
    T = make_tower(q)
    B = T.base
    eng = engine_for(B, B, find_embedding(B, B))
    rng = random.Random(10 + q)
    forms = [CubicForm(B, tuple(rng.randrange(q) for _ in range(10))) for _ in range(80)]
    forms = [f for f in forms if not f.is_zero()]
    assert list(eng.divisible_mask(forms)) == [has_linear_factor_over(f, B) is not None for f in forms]


def test_census_q2_matches_line_oracle_and_classify():
    census = census_reducible(T2)
    forms = list(normalized_cubics(T2.base))
    assert len(forms) == normalized_count(2) == 1023
    mask = reducible_mask(forms, T2)
    assert {f for f, m in zip(forms, mask) if m} == census
    assert all(not classify(f, T2).geometrically_irreducible for f in census)


def test_cubic_field_suffices_q2():
    forms = list(normalized_cubics(T2.base))
    over_cubic = reducible_mask(forms, T2)
    over_top = reducible_mask(forms, T2, K=T2.top)
    assert np.array_equal(over_cubic, over_top)


def test_census_guard():
    with pytest.raises(ValueError):
        census_reducible(make_tower(7))
