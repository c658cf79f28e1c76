"""Linear systems of cubics over F_q and the per-line reducible-member scan."""

from __future__ import annotations

import csv
import io
import itertools
import time
from dataclasses import dataclass, field

from .classify import has_linear_factor_over, verdict_from_lines
from .forms import CubicForm, ProjectivePoint, form_to_json, frobenius_point, line_from_index
from .gf import Embedding, FieldCtx, FieldMismatch, TowerCtx
from .linalg import nullspace_mod_p, rank, rref
from .linescan import engine_for, kernel_members


class DependentBasis(ValueError):
    pass


def independence_rank(forms) -> int:
    if not forms:
        return 0
    return rank(forms[0].field, [f.coeffs for f in forms])


def canonical_index(F: FieldCtx, a) -> tuple:
    lead = next((x for x in a if x), 0)
    if lead == 0:
        raise ValueError("member index must be nonzero")
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in a)


@dataclass(frozen=True)
class LinearSystem:
    base: FieldCtx
    basis: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        for f in self.basis:
            if f.field != self.base:
                raise FieldMismatch(f"basis form over {f.field!r}, system over {self.base!r}")
        if independence_rank(list(self.basis)) != len(self.basis):
            raise DependentBasis("basis forms are linearly dependent")

    @property
    def dimension(self) -> int:
        """Projective dimension."""
        return len(self.basis) - 1

    def member(self, a) -> CubicForm:
        K = self.base
        coeffs = [0] * 10
        for ai, f in zip(a, self.basis):
            if ai:
                coeffs = [K.add(x, K.mul(ai, y)) for x, y in zip(coeffs, f.coeffs)]
        return CubicForm(K, tuple(coeffs))

    def member_count(self) -> int:
        q = self.base.size
        return (q ** len(self.basis) - 1) // (q - 1)

    def to_json(self) -> dict:
        return {"label": self.label, "field": self.base.to_json(),
                "basis": [form_to_json(f) for f in self.basis]}


def member_indices(F: FieldCtx, n: int):
    """Canonical projective tuples of length n, in lexicographic code order."""
    q = F.size
    for lead in reversed(range(n)):
        for rest in itertools.product(range(q), repeat=n - 1 - lead):
            yield (0,) * lead + (1,) + rest


def enumerate_members(S: LinearSystem):
    for a in member_indices(S.base, len(S.basis)):
        yield a, S.member(a)


@dataclass
class ScanReport:
    label: str
    q: int
    member_count: int
    lines_total: int
    lines_scanned: int
    reducible: list = field(default_factory=list)  # (index, CubicVerdict) sorted by index
    lines_by_member: dict = field(default_factory=dict)
    elapsed: float = 0.0
    early_abort: bool = False

    @property
    def complete(self) -> bool:
        return self.lines_scanned == self.lines_total

    @property
    def reducible_indices(self) -> list:
        return [a for a, _ in self.reducible]

    def to_json(self, system: LinearSystem | None = None) -> dict:
        out = {
            "label": self.label,
            "q": self.q,
            "member_count": self.member_count,
            "lines_total": self.lines_total,
            "lines_scanned": self.lines_scanned,
            "early_abort": self.early_abort,
            "elapsed_s": round(self.elapsed, 3),
            "reducible": [{"member": list(a), "verdict": v.to_json() if v else None}
                          for a, v in self.reducible],
        }
        if system is not None:
            out["system"] = system.to_json()
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "q", "member", "kind", "lines"])
        for a, v in self.reducible:
            w.writerow([self.label, self.q, " ".join(map(str, a)), v.kind.value if v else "",
                        " ".join(map(str, self.lines_by_member.get(a, [])))])
        return buf.getvalue()


def scan_reducible_members(S: LinearSystem, tower: TowerCtx, early_abort: bool = False,
                           threads: int = 1, with_verdicts: bool = True) -> ScanReport:
    """Every geometrically reducible F_q-member of S, found line by line.

    For each line over F_{q^3} the members divisible by it form the F_q-kernel
    of a small matrix; the union of kernels is the reducible set.
    """
    if S.base != tower.base:
        raise FieldMismatch("system and tower have different base fields")
    t0 = time.perf_counter()
    eng = engine_for(tower.base, tower.cubic, tower.base_to_cubic)
    hits, scanned = eng.scan(list(S.basis), early_abort=early_abort, threads=threads)
    by_member: dict = {}
    for h in hits:
        for a in kernel_members(tower.base, h.kernel):
            by_member.setdefault(a, []).append(h.line)
    reducible = []
    for a in sorted(by_member):
        verdict = None
        if with_verdicts:
            lines = [line_from_index(tower.cubic, i) for i in by_member[a]]
            verdict = verdict_from_lines(S.member(a), lines, tower)
        reducible.append((a, verdict))
    return ScanReport(label=S.label, q=tower.q, member_count=S.member_count(),
                      lines_total=eng.num_lines, lines_scanned=scanned, reducible=reducible,
                      lines_by_member=by_member, elapsed=time.perf_counter() - t0,
                      early_abort=early_abort)


def naive_reducible_members(S: LinearSystem, tower: TowerCtx) -> list:
    """Member-by-member check with the plain per-line divisibility test."""
    return [a for a, F in enumerate_members(S)
            if has_linear_factor_over(F, tower.cubic) is not None]


# --- cubics through a Galois orbit ---------------------------------------------------


def fq_solution_space(base: FieldCtx, emb: Embedding, conditions) -> list:
    """F_q-basis (RREF) of {c in F_q^n : sum_m c_m w_m = 0 for each condition row w}.

    The w_m live in emb.dst; each condition is expanded into F_p digits.
    """
    K = emb.dst
    p, e = base.p, base.k
    n = len(conditions[0])
    thetas = [emb(p**d) for d in range(e)]
    rows = []
    for cond in conditions:
        cols = [K.digits(K.mul(th, w)) for w in cond for th in thetas]  # column (m, d)
        rows.extend([[col[i] for col in cols] for i in range(K.k)])
    kern = nullspace_mod_p(rows, p, ncols=n * e)
    vecs = [[base.from_digits(v[m * e:(m + 1) * e]) for m in range(n)] for v in kern]
    red, _ = rref(base, vecs) if vecs else ([], [])
    return red


def frobenius_orbit(P: ProjectivePoint, tower: TowerCtx) -> list:
    orbit = [P]
    while True:
        nxt = frobenius_point(orbit[-1], tower)
        if nxt == P:
            return orbit
        orbit.append(nxt)


def cubics_through_points(points, tower: TowerCtx, label: str = "") -> LinearSystem:
    """All F_q-cubics vanishing on a Frobenius-closed set of points over F_{q^6}."""
    points = list(points)
    if not points:
        raise ValueError("no points")
    for P in points:
        if P.field != tower.top:
            raise FieldMismatch("points must lie over the top of the tower")
    if set(frobenius_orbit(points[0], tower)) != set(points):
        raise ValueError("points are not a single Frobenius orbit")
    K = tower.top
    conditions = []
    x, y, z = points[0].coords  # the other points follow by Frobenius
    conditions.append([K.mul(K.pow(x, a), K.mul(K.pow(y, b), K.pow(z, c)))
                       for (a, b, c) in CubicForm.MONOMIALS])
    basis = fq_solution_space(tower.base, tower.base_to_top, conditions)
    if not basis:
        raise AssertionError("no cubic passes through the orbit: internal error")
    if len(basis) < 10 - len(points):
        raise AssertionError(f"solution space has dimension {len(basis)} < {10 - len(points)}")
    return LinearSystem(tower.base, tuple(CubicForm(tower.base, tuple(b)) for b in basis), label)
