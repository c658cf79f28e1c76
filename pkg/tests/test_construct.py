import pytest

from cubicsys.classify import Kind, is_geometrically_irreducible
from cubicsys.construct import (MONOMIAL_SYSTEM, BudgetExhausted, conic_free_orbit,
                                coordinate_matrix, explicit_construction,
                                galois_orbit_construction, lemma31_check, line_through,
                                monomial_family)
from cubicsys.forms import (CubicForm, evaluate, frobenius_form, frobenius_point, multiply,
                            parse_form, point, substitute)
from cubicsys.gf import make_tower, moore_determinant
from cubicsys.linalg import det
from cubicsys.linsys import frobenius_orbit


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_explicit_witness_invariants(q):
    w = explicit_construction(q)
    T = w.tower
    sig = lambda X: frobenius_form(X, T)  # noqa: E731
    assert (sig(w.F), sig(w.G), sig(w.H), sig(w.T)) == (w.G, w.H, w.F, w.T)
    assert w.scan.member_count == (q**4 - 1) // (q - 1)
    (a, v), = w.scan.reducible
    assert v.kind is Kind.FQ_IRREDUCIBLE_GEOM_REDUCIBLE
    assert w.system.member(a).lift(T.base_to_cubic).same_curve(w.T)
    for R in w.system.basis:
        lifted = R.lift(T.base_to_cubic)
        assert sig(lifted) == lifted


def test_explicit_q2_and_q3_member_counts():
    assert explicit_construction(2).scan.member_count == 15
    assert explicit_construction(3).scan.member_count == 40


@pytest.mark.parametrize("q", [2, 3, 4])
def test_coordinate_change_sends_monomials_to_FGHT(q):
    w = explicit_construction(q)
    K = w.tower.cubic
    conj = [w.alpha, K.pow(w.alpha, q), K.pow(w.alpha, q * q)]
    M = coordinate_matrix(K, conj)
    images = [substitute(CubicForm.monomial(K, m), M) for m in MONOMIAL_SYSTEM]
    assert images == [w.F, w.G, w.H, w.T]
    assert det(K, M) != 0
    assert moore_determinant(K, q, conj) != 0


def test_F_matches_direct_expansion():
    # (a x + b y + c z)^2 (b x + c y + a z), two coefficients by hand
    w = explicit_construction(3)
    K = w.tower.cubic
    a, b, c = (K.pow(w.alpha, 3**i) for i in range(3))
    F = dict(zip(CubicForm.MONOMIALS, w.F.coeffs))
    assert F[(3, 0, 0)] == K.mul(K.mul(a, a), b)
    two = K.from_int(2)
    # collect: terms of (ax+by+cz)^2 = a^2x^2 + b^2y^2 + c^2z^2 + 2ab xy + 2bc yz + 2ca zx
    # times (bx + cy + az): xyz arises from 2ab xy*a z + 2bc yz*b x + 2ca zx*c y
    xyz = K.add(K.add(K.mul(K.mul(two, K.mul(a, b)), a), K.mul(K.mul(two, K.mul(b, c)), b)),
                K.mul(K.mul(two, K.mul(c, a)), c))
    assert F[(1, 1, 1)] == xyz


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_orbit_witness(q):
    w = galois_orbit_construction(q, seed=0)
    T = w.tower
    assert len(set(w.orbit)) == 6
    assert det(T.top, _conic_rows(w.orbit)) != 0
    assert len(w.system.basis) == 4
    assert all(v.kind is not Kind.FQ_REDUCIBLE for _, v in w.scan.reducible)
    (a, v), = w.scan.reducible
    assert v.kind is Kind.FQ_IRREDUCIBLE_GEOM_REDUCIBLE
    member = w.system.member(a).lift(T.base_to_top)
    assert member.same_curve(multiply(*w.opposite_lines))
    for L in w.opposite_lines:
        assert frobenius_form(L, T, 3).normalize() == L


def _conic_rows(points):
    from cubicsys.construct import conic_matrix
    return conic_matrix(points)


def test_orbit_is_deterministic_per_seed():
    a = galois_orbit_construction(3, seed=5)
    b = galois_orbit_construction(3, seed=5)
    assert a.point == b.point and a.system.basis == b.system.basis


def test_small_orbits_and_conic_points_rejected():
    T = make_tower(2)
    K = T.top
    # a point over F_{q^3} has orbit size 3
    P = point(K, 1, T.cubic_to_top(2), 0)
    assert len(frobenius_orbit(P, T)) == 3
    assert conic_free_orbit(P, T) is None
    # a degree-6 point on the F_q-conic y^2 = xz
    g = K.generator
    Q = point(K, 1, g, K.mul(g, g))
    assert len(frobenius_orbit(Q, T)) == 6
    assert conic_free_orbit(Q, T) is None


def test_budget_exhausted():
    with pytest.raises(BudgetExhausted):
        galois_orbit_construction(2, seed=0, budget=1)


def test_line_through():
    K = make_tower(2).top
    assert line_through(point(K, 1, 0, 0), point(K, 0, 1, 0)) == parse_form("z", K)
    with pytest.raises(ValueError):
        line_through(point(K, 1, 0, 0), point(K, 1, 0, 0))
    w = galois_orbit_construction(2, seed=1)
    T = w.tower
    L = line_through(w.orbit[0], w.orbit[3])
    assert evaluate(L, w.orbit[0]) == 0 == evaluate(L, w.orbit[3])
    assert frobenius_point(w.orbit[0], T, 3) == w.orbit[3]
    assert frobenius_form(L, T, 3).normalize() == L


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_lemma31(q):
    r = lemma31_check(q)
    assert r.ok
    assert r.tuples_checked == q**4 - 1
    assert sum(r.counts.values()) == q**4 - 1


def test_lemma31_examples():
    for q in (2, 3, 5):
        T = make_tower(q)
        B = T.base
        assert is_geometrically_irreducible(monomial_family(B, 1, 1, 1, 0), T)
        assert not is_geometrically_irreducible(monomial_family(B, 1, 0, 0, 0), T)
        assert not is_geometrically_irreducible(monomial_family(B, 0, 0, 0, 1), T)


def test_lemma31_guard():
    with pytest.raises(ValueError):
        lemma31_check(8)
