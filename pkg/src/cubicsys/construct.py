"""Two constructions of a 3-dimensional system of cubics over F_q with exactly one
geometrically reducible F_q-member.

* explicit: a normal element alpha of F_{q^3} gives three conjugate lines
  l0, l1, l2; the system spanned by l0^2 l1, l1^2 l2, l2^2 l0 and l0 l1 l2 is
  Frobenius-stable, hence defined over F_q, and only l0 l1 l2 is reducible.
* orbit: the cubics through the Frobenius orbit of a degree-6 point that lies
  on no F_q-conic; the only reducible member is the union of the three lines
  joining opposite points of the orbit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .classify import Kind
from .forms import (ConicForm, CubicForm, LinearForm, ProjectivePoint, cross, form_to_json,
                    frobenius_form, multiply, substitute, vanishes_at)
from .gf import (FieldCtx, TowerCtx, find_embedding, find_normal_element, make_tower,
                 moore_determinant, prime_power)
from .linalg import det, rank
from .linescan import engine_for
from .linsys import (LinearSystem, ScanReport, cubics_through_points, frobenius_orbit,
                     member_indices, scan_reducible_members)

DEFAULT_BUDGET = 10_000
LEMMA_MAX_Q = 7


class ConstructionError(AssertionError):
    """A proven invariant failed; this means an arithmetic bug."""


class BudgetExhausted(RuntimeError):
    pass


def _require(cond, msg):
    if not cond:
        raise ConstructionError(msg)


# --- explicit normal-basis construction --------------------------------------------


MONOMIAL_SYSTEM = ((2, 1, 0), (0, 2, 1), (1, 0, 2), (1, 1, 1))  # x^2y, y^2z, z^2x, xyz


@dataclass
class ExplicitWitness:
    q: int
    tower: TowerCtx
    alpha: int
    lines: tuple  # l0, l1, l2 over F_{q^3}
    F: CubicForm
    G: CubicForm
    H: CubicForm
    T: CubicForm
    system: LinearSystem  # R0..R3 over F_q
    scan: ScanReport

    @property
    def reducible_member(self):
        (a, verdict), = self.scan.reducible
        return a, verdict

    def to_json(self) -> dict:
        K = self.tower.cubic
        return {
            "q": self.q,
            "base_field": self.tower.base.to_json(),
            "cubic_field": K.to_json(),
            "alpha": K.serialize(self.alpha),
            "lines": [form_to_json(L) for L in self.lines],
            "F": form_to_json(self.F), "G": form_to_json(self.G),
            "H": form_to_json(self.H), "T": form_to_json(self.T),
            "scan": self.scan.to_json(self.system),
        }


def coordinate_matrix(K: FieldCtx, conj) -> list:
    a0, a1, a2 = conj
    return [[a0, a1, a2], [a1, a2, a0], [a2, a0, a1]]


def explicit_construction(q: int, threads: int = 1) -> ExplicitWitness:
    tower = make_tower(q)
    K = tower.cubic
    alpha = find_normal_element(tower)
    conj = (alpha, K.pow(alpha, q), K.pow(alpha, q * q))
    M = coordinate_matrix(K, conj)
    l0, l1, l2 = (LinearForm(K, tuple(row)) for row in M)
    F, G, H = multiply(l0, l0, l1), multiply(l1, l1, l2), multiply(l2, l2, l0)
    T = multiply(l0, l1, l2)

    _require(moore_determinant(K, q, list(conj)) != 0, "alpha is not a normal element")
    _require(det(K, M) != 0, "coordinate change is singular")
    for mono, target in zip(MONOMIAL_SYSTEM, (F, G, H, T)):
        _require(substitute(CubicForm.monomial(K, mono), M) == target,
                 f"substitution does not send monomial {mono} to its target")
    sig = lambda X: frobenius_form(X, tower)  # noqa: E731
    _require(sig(F) == G and sig(G) == H and sig(H) == F, "Frobenius does not cycle F, G, H")
    _require(sig(T) == T, "Frobenius does not fix T")

    lifted = []
    for i in range(3):
        c = [conj[(i + j) % 3] for j in range(3)]
        lifted.append(F.scale(c[0]) + G.scale(c[1]) + H.scale(c[2]))
    lifted.append(T)
    for R in lifted:
        _require(sig(R) == R, "descent generator is not Frobenius-fixed")
    basis = [R.descend(tower.base_to_cubic) for R in lifted]
    stacked = [X.coeffs for X in (F, G, H, T)] + [R.coeffs for R in lifted]
    _require(rank(K, stacked) == 4, "descended span differs from span{F, G, H, T}")

    system = LinearSystem(tower.base, tuple(basis), label=f"explicit q={q}")
    report = scan_reducible_members(system, tower, threads=threads)
    _require(report.complete, "line scan incomplete")
    _require(len(report.reducible) == 1,
             f"expected one reducible member, found {len(report.reducible)}")
    (a, verdict), = report.reducible
    _require(system.member(a).lift(tower.base_to_cubic).same_curve(T),
             "the reducible member is not T")
    _require(verdict.kind is Kind.FQ_IRREDUCIBLE_GEOM_REDUCIBLE,
             f"T has verdict {verdict.kind.value}")
    return ExplicitWitness(q, tower, alpha, (l0, l1, l2), F, G, H, T, system, report)


# --- Galois-orbit construction ---------------------------------------------------


@dataclass
class OrbitWitness:
    q: int
    tower: TowerCtx
    point: ProjectivePoint
    orbit: list
    system: LinearSystem
    scan: ScanReport
    opposite_lines: tuple  # P0P3, P1P4, P2P5 over F_{q^6}
    candidates_tried: int

    @property
    def reducible_member(self):
        (a, verdict), = self.scan.reducible
        return a, verdict

    def to_json(self) -> dict:
        top = self.tower.top
        pt = lambda P: [top.serialize(c) for c in P.coords]  # noqa: E731
        return {
            "q": self.q,
            "top_field": top.to_json(),
            "point": pt(self.point),
            "orbit": [pt(P) for P in self.orbit],
            "candidates_tried": self.candidates_tried,
            "opposite_lines": [form_to_json(L) for L in self.opposite_lines],
            "scan": self.scan.to_json(self.system),
        }


def line_through(P: ProjectivePoint, Q: ProjectivePoint) -> LinearForm:
    if P.field != Q.field:
        raise ValueError("points over different fields")
    if P == Q:
        raise ValueError("a line needs two distinct points")
    return LinearForm(P.field, cross(P.field, P.coords, Q.coords)).normalize()


def conic_matrix(points) -> list:
    K = points[0].field
    rows = []
    for P in points:
        x, y, z = P.coords
        rows.append([K.mul(K.pow(x, a), K.mul(K.pow(y, b), K.pow(z, c)))
                     for (a, b, c) in ConicForm.MONOMIALS])
    return rows


def conic_free_orbit(P: ProjectivePoint, tower: TowerCtx):
    """The orbit of P if it has 6 points and lies on no conic, else None."""
    orbit = frobenius_orbit(P, tower)
    if len(orbit) != 6:
        return None
    if det(tower.top, conic_matrix(orbit)) == 0:
        return None
    return orbit


def _candidates(top: FieldCtx, seed: int, budget: int):
    """Random points first, then a deterministic sweep; `budget` candidates in total."""
    rng = np.random.Generator(np.random.Philox(seed))
    n_random = budget // 2
    for _ in range(n_random):
        c = [int(v) for v in rng.integers(0, top.size, size=3)]
        if any(c):
            yield ProjectivePoint(top, tuple(c))
    sweep = ((1, y, z) for y in range(top.size) for z in range(top.size))
    for c in itertools.islice(sweep, budget - n_random):
        yield ProjectivePoint(top, c)


def galois_orbit_construction(q: int, seed: int = 0, budget: int = DEFAULT_BUDGET,
                              threads: int = 1) -> OrbitWitness:
    tower = make_tower(q)
    top = tower.top
    tried = 0
    orbit = None
    for P in _candidates(top, seed, budget):
        tried += 1
        orbit = conic_free_orbit(P, tower)
        if orbit is not None:
            break
    if orbit is None:
        raise BudgetExhausted(f"no conic-free degree-6 orbit among {tried} candidates")

    system = cubics_through_points(orbit, tower, label=f"orbit q={q} seed={seed}")
    if len(system.basis) != 4:
        raise ConstructionError(f"cubics through the orbit form a space of dimension "
                                f"{len(system.basis)}, expected exactly 4")
    for R in system.basis:
        Rt = R.lift(tower.base_to_top)
        _require(all(vanishes_at(Rt, Pi) for Pi in orbit), "basis cubic misses an orbit point")

    report = scan_reducible_members(system, tower, threads=threads)
    _require(report.complete, "line scan incomplete")
    kinds = [v.kind for _, v in report.reducible]
    _require(Kind.FQ_REDUCIBLE not in kinds, "a member has an F_q-rational line")
    _require(len(report.reducible) == 1,
             f"expected one reducible member, found {len(report.reducible)}")

    lines = tuple(line_through(orbit[i], orbit[i + 3]) for i in range(3))
    for L in lines:
        _require(frobenius_form(L, tower, 3).normalize() == L, "opposite line not fixed by sigma^3")
    (a, _), = report.reducible
    product = multiply(*lines)
    _require(system.member(a).lift(tower.base_to_top).same_curve(product),
             "reducible member differs from the product of opposite lines")
    return OrbitWitness(q, tower, orbit[0], orbit, system, report, lines, tried)


# --- exhaustive check: reducible a x^2y + b y^2z + c z^2x + d xyz has abc = 0 ----


@dataclass
class LemmaReport:
    q: int
    tuples_checked: int
    counts: dict  # verdict kind -> number of nonzero tuples
    counterexamples: list

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {"q": self.q, "tuples_checked": self.tuples_checked,
                "counts": dict(self.counts), "counterexamples": [list(t) for t in self.counterexamples],
                "ok": self.ok}


def monomial_family(K: FieldCtx, a, b, c, d) -> CubicForm:
    return CubicForm.from_dict(K, dict(zip(MONOMIAL_SYSTEM, (a, b, c, d))))


def lemma31_check(q: int, max_q: int = LEMMA_MAX_Q) -> LemmaReport:
    """Every nonzero (a,b,c,d) in F_q^4: geometrically reducible implies abc = 0."""
    if q > max_q:
        raise ValueError(f"exhaustive check is limited to q <= {max_q}")
    prime_power(q)
    tower = make_tower(q)
    K = tower.base
    reps = list(member_indices(K, 4))
    forms = [monomial_family(K, *t) for t in reps]
    eng = engine_for(K, tower.cubic, tower.base_to_cubic)
    reducible = eng.divisible_mask(forms)
    rational = engine_for(K, K, find_embedding(K, K)).divisible_mask(forms)
    kind_of = {}
    for t, red, rat in zip(reps, reducible, rational):
        if not red:
            kind_of[t] = Kind.GEOM_IRREDUCIBLE
        elif rat:
            kind_of[t] = Kind.FQ_REDUCIBLE
        else:
            kind_of[t] = Kind.FQ_IRREDUCIBLE_GEOM_REDUCIBLE
    counts = {k.value: 0 for k in Kind if k is not Kind.ZERO}
    bad = []
    checked = 0
    for t in itertools.product(range(q), repeat=4):
        if not any(t):
            continue
        checked += 1
        lead = next(x for x in t if x)
        inv = K.inv(lead)
        kind = kind_of[tuple(K.mul(inv, x) for x in t)]
        counts[kind.value] += 1
        a, b, c, _ = t
        if kind is not Kind.GEOM_IRREDUCIBLE and K.mul(a, K.mul(b, c)) != 0:
            bad.append(t)
    return LemmaReport(q, checked, counts, bad)
