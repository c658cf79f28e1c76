"""Acceptance criteria; each test prints one ``criterion N: PASS|FAIL`` line."""

import math
import time

import numpy as np
import pytest

from cubicsys.classify import census_reducible, normalized_cubics, reducible_mask
from cubicsys.construct import explicit_construction, galois_orbit_construction, lemma31_check
from cubicsys.forms import multiply
from cubicsys.gf import make_field, make_tower
from cubicsys.linsys import LinearSystem
from cubicsys.search import WITNESS_TABLE, census_count, extension_check, verify_witness_table
from cubicsys.forms import parse_form

PRIME_POWERS_TO_13 = [2, 3, 4, 5, 7, 8, 9, 11, 13]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return emit


def test_criterion_1_table_rows(report):
    t0 = time.perf_counter()
    small = verify_witness_table([2, 3, 4, 5])
    t_small = time.perf_counter() - t0
    large = verify_witness_table([7, 8, 9, 11], threads=4)
    total = time.perf_counter() - t0
    rows = small + large
    ok = all(r.ok for r in rows) and t_small < 5 and total < 180
    counts = ", ".join(f"q={r.q}:{r.scan.member_count - len(r.scan.reducible)}/{r.scan.member_count}"
                       for r in rows)
    assert report(1, ok, f"{counts}; q<=5 {t_small:.1f}s, total {total:.1f}s")
    assert {r.q for r in rows} == set(WITNESS_TABLE)


def test_criterion_2_explicit_construction(report):
    t0 = time.perf_counter()
    found = {}
    for q in PRIME_POWERS_TO_13:
        w = explicit_construction(q)
        (a, v), = w.scan.reducible
        found[q] = (w.system.member(a).lift(w.tower.base_to_cubic).same_curve(w.T)
                    and v.orbit and len(v.factors) == 3)
    elapsed = time.perf_counter() - t0
    ok = all(found.values()) and elapsed < 300
    assert report(2, ok, f"unique reducible member = T for q in {sorted(found)}; {elapsed:.1f}s")


def test_criterion_3_orbit_construction(report):
    t0 = time.perf_counter()
    details = []
    ok = True
    for q in (2, 3, 4, 5):
        w = galois_orbit_construction(q, seed=0, budget=10_000)
        (a, v), = w.scan.reducible
        member = w.system.member(a).lift(w.tower.base_to_top)
        ok &= (len(w.system.basis) == 4 and w.candidates_tried <= 10_000
               and not any(x.kind.value == "FqReducible" for _, x in w.scan.reducible)
               and member.same_curve(multiply(*w.opposite_lines)))
        details.append(f"q={q}:{w.candidates_tried} tried")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    assert report(3, ok, f"{', '.join(details)}; {elapsed:.1f}s")


def test_criterion_4_lemma(report):
    t0 = time.perf_counter()
    reps = [lemma31_check(q) for q in (2, 3, 4, 5, 7)]
    elapsed = time.perf_counter() - t0
    bad = sum(len(r.counterexamples) for r in reps)
    ok = bad == 0 and all(r.tuples_checked == r.q**4 - 1 for r in reps) and elapsed < 60
    assert report(4, ok, f"{sum(r.tuples_checked for r in reps)} tuples, {bad} counterexamples; {elapsed:.1f}s")


def test_criterion_5_oracle_equivalence(report):
    t0 = time.perf_counter()
    sizes = {}
    ok = True
    for q in (2, 3):
        T = make_tower(q)
        forms = list(normalized_cubics(T.base))
        mask = reducible_mask(forms, T)
        scan_set = {f for f, m in zip(forms, mask) if m}
        ok &= scan_set == census_reducible(T)
        sizes[q] = len(forms)
    elapsed = time.perf_counter() - t0
    ok &= sizes == {2: 1023, 3: 29524} and elapsed < 120
    assert report(5, ok, f"forms checked {sizes}; {elapsed:.1f}s")


def test_criterion_6_cubic_field_suffices(report):
    t0 = time.perf_counter()
    T = make_tower(2)
    forms = list(normalized_cubics(T.base))
    same = np.array_equal(reducible_mask(forms, T), reducible_mask(forms, T, K=T.top))
    elapsed = time.perf_counter() - t0
    assert report(6, same and len(forms) == 1023 and elapsed < 60,
                  f"F_64 vs F_8 line factors agree on {len(forms)} cubics; {elapsed:.1f}s")


@pytest.mark.xfail(strict=True, reason="the q=8 row has F_4-members with an F_4-rational line "
                                       "(F_4 is not a subfield of F_8); see tests/test_search.py")
def test_criterion_7_extension_remark(report):
    t0 = time.perf_counter()
    K = make_field(2)
    S = LinearSystem(K, tuple(parse_form(s, K, degree=3) for s in WITNESS_TABLE[8]))
    reps = {k: extension_check(S, k) for k in (1, 2, 3)}
    elapsed = time.perf_counter() - t0
    ok = all(r.ok for r in reps.values()) and elapsed < 60
    detail = ", ".join(f"k={k}:{'ok' if r.ok else f'{len(r.scan.reducible)} reducible'}"
                       for k, r in reps.items())
    assert report(7, ok, f"{detail}; {elapsed:.1f}s")


def test_criterion_8_census_growth(report):
    t0 = time.perf_counter()
    c = {q: census_count(q) for q in (2, 3, 4)}
    ratio = math.log(c[3].reducible / c[2].reducible) / math.log(3 / 2)
    fr = [c[q].irreducible_fraction for q in (2, 3, 4)]
    elapsed = time.perf_counter() - t0
    ok = 6 < ratio < 8 and fr[0] < fr[2] and elapsed < 120
    assert report(8, ok, f"reducible {[c[q].reducible for q in c]}, log-ratio {ratio:.3f}, "
                         f"irreducible fraction {fr[0]:.3f} -> {fr[2]:.3f}; {elapsed:.1f}s")
