import json

import pytest

from cubicsys.classify import has_linear_factor_over
from cubicsys.forms import evaluate, parse_form, point
from cubicsys.gf import FieldError, find_embedding, make_field, make_tower
from cubicsys.linsys import LinearSystem, independence_rank, scan_reducible_members
from cubicsys.search import (WITNESS_TABLE, SearchConfig, census_count, extension_check,
                             random_search, table_system, verify_table_row)


def row_over(q_row, K):
    return LinearSystem(K, tuple(parse_form(s, K, degree=3) for s in WITNESS_TABLE[q_row]))


def test_table_rows_parse_with_prime_coefficients():
    for q in WITNESS_TABLE:
        S = table_system(q)
        p = S.base.p
        assert all(c < p for f in S.basis for c in f.coeffs)
        assert independence_rank(list(S.basis)) == 4


def test_negative_coefficients_reduce_mod_p():
    S = table_system(11)
    assert S.basis[0].coeffs[0] == 11 - 3  # -3x^3


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_table_row(q):
    r = verify_table_row(q)
    assert r.ok and r.scan.member_count == (q**4 - 1) // (q - 1)


def test_q8_row_has_f2_coefficients():
    assert all(c in (0, 1) for f in table_system(8).basis for c in f.coeffs)


def test_random_search_deterministic_and_verified():
    cfg = SearchConfig(2, seed=3)
    a, b = random_search(cfg), random_search(cfg)
    assert a.found and a.iterations == b.iterations
    assert a.system.basis == b.system.basis
    full = scan_reducible_members(a.system, make_tower(2))
    assert full.complete and not full.reducible
    # thread budget does not change the outcome
    c = random_search(SearchConfig(2, seed=3, threads=2))
    assert c.system.basis == a.system.basis


def test_random_search_budget():
    r = random_search(SearchConfig(3, seed=0, max_iters=2))
    assert not r.found and r.iterations == 2
    with pytest.raises(ValueError):
        SearchConfig(2, max_iters=0)


def test_witness_log(tmp_path):
    log = tmp_path / "w.ndjson"
    r = random_search(SearchConfig(2, seed=4), witness_log=str(log))
    rec = json.loads(log.read_text().splitlines()[0])
    assert rec["q"] == 2 and rec["seed"] == 4 and rec["iteration"] == r.iterations
    K = make_field(2)
    assert [parse_form(f["text"], K, degree=3) for f in rec["forms"]] == list(r.system.basis)


def test_extension_k1_and_k3_of_q8_row():
    S = row_over(8, make_field(2))
    assert extension_check(S, 1).ok
    assert extension_check(S, 3).ok


def test_q8_row_over_f4_has_rational_line():
    # F0 + g*F1 over F_4 (g the generator) contains the line x + (g+1) z.
    S = row_over(8, make_field(2))
    rep = extension_check(S, 2)
    assert not rep.ok and len(rep.scan.reducible) == 6
    K = make_field(2, 2)
    emb = find_embedding(make_field(2), K)
    F = LinearSystem(K, tuple(f.lift(emb) for f in S.basis)).member((1, 2, 0, 0))
    L = parse_form("x + (g+1)*z", K)
    # independent check: a cubic with more than 3 zeros on a line contains it
    on_line = [point(K, *c) for c in ((3, 0, 1), (3, 1, 1), (3, 2, 1), (3, 3, 1), (0, 1, 0))]
    assert all(evaluate(L, P) == 0 for P in on_line)
    assert all(evaluate(F, P) == 0 for P in on_line)
    assert has_linear_factor_over(F, K) == L


def test_linear_factor_persists_under_extension():
    F2 = make_field(2)
    S = LinearSystem(F2, [parse_form(s, F2) for s in ("x^3", "x*y^2", "y^3", "xyz")])
    for k in (1, 2, 3):
        assert not extension_check(S, k).ok


def test_extension_bound():
    with pytest.raises(FieldError):
        extension_check(row_over(8, make_field(2)), 7)


def test_census_count():
    c2, c3, c4 = census_count(2), census_count(3), census_count(4)
    assert c2.total == 1023
    assert c2.irreducible_fraction < c3.irreducible_fraction < c4.irreducible_fraction
    with pytest.raises(ValueError):
        census_count(7)
