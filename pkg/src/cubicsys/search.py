"""Randomized search for systems whose F_q-members are all geometrically irreducible,
the published witness table, and the F_{q^k}-extension check."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from .classify import CENSUS_MAX_Q, census_reducible, normalized_count
from .forms import CubicForm, form_to_json, parse_form
from .gf import TowerCtx, find_embedding, make_field, make_tower, prime_power
from .linsys import LinearSystem, ScanReport, independence_rank, scan_reducible_members

# Witness systems F0..F3 for each q, in the table's own syntax.
WITNESS_TABLE = {
    2: ("x^2 y+x^2 z+y^2 z",
        "x^3+yz^2",
        "x y^2+y^3+x y z+x z^2",
        "x^2 y+xy^2+x z^2+z^3"),
    3: ("y^3 + x^2z + y^2z + yz^2 + z^3",
        "x^3 - xy^2 + y^2 z - xz^2 + yz^2 - z^3",
        "x^3 - x^2 y - x y^2 + x z^2 - y z^2",
        "-x^3 - x^2 y + y^3 + x^2 z - xz^2"),
    4: ("x^2y + y^3 + x^2z + xyz + yz^2",
        "x^2y + xyz + y^2 z + z^3",
        "x^3 + xy^2 + y^2z + xz^2 + yz^2",
        "x^3 + yz^2"),
    5: ("2x^2y + xy^2 + y^3 + xz^2 + yz^2",
        "x^2y + 2xy^2 - 2y^3 - 2x^2z + 2y^2z - 2xz^2 - yz^2",
        "2x^3 + x^2y + xy^2 + y^3 - 2x^2z - xyz - y^2z + xz^2 + 2yz^2",
        "-2x^2y - 2xy^2 - x^2z - 2xyz + y^2z - xz^2 + 2z^3"),
    7: ("-x^3 - 3xy^2 + y^3 + 3y^2z + xz^2 - 2yz^2 + 3z^3",
        "3x^3 - 3x^2y - 3xy^2 - 3y^3 + xyz - 2y^2z - 2z^3",
        "x^3 - 2x^2y + y^3 - x^2z - 3xyz - 2y^2z + xz^2 - 3z^3",
        "-3x^3 - 2x^2y + 2xy^2 + 2y^3 - 2x^2z - 2y^2z - xz^2 + 3z^3"),
    8: ("x^2y + y^2z + xz^2 + yz^2",
        "x^2y + xy^2 + xz^2 + z^3",
        "x^3 + x^2y + y^2z + xz^2 + z^3",
        "x^2y + y^3 + x^2z + xyz + xz^2 + yz^2 + z^3"),
    9: ("-x^3 + x^2y + y^3 + x^2z + xyz - y^2z + xz^2 - yz^2",
        "xy^2 - x^2z - xyz - y^2z - z^3",
        "x^2y + xy^2 + x^2z + xz^2 + yz^2 + z^3",
        "xy^2 - y^3 - x^2z + y^2z - yz^2"),
    11: ("-3x^3 - 5xy^2 + 2x^2z + 4y^2z - 2xz^2 - 4z^3",
         "x^3 + xy^2 + 2y^3 + 3x^2z + 4xyz - y^2z - 3xz^2 + 2yz^2 - z^3",
         "5x^3 + 3x^2y + y^3 - 2x^2z - 5xyz - y^2z - 5xz^2 - 3yz^2 - 4z^3",
         "2x^3 - 3x^2y + 4xy^2 + 2y^3 - 5x^2z + y^2z - 2xz^2 - yz^2 + z^3"),
}


@dataclass(frozen=True)
class SearchConfig:
    q: int
    seed: int = 0
    max_iters: int = 20_000
    threads: int = 1
    early_abort: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        prime_power(self.q)


@dataclass
class SearchResult:
    config: SearchConfig
    system: LinearSystem | None
    iterations: int
    rejected_dependent: int
    elapsed: float

    @property
    def found(self) -> bool:
        return self.system is not None

    def to_json(self) -> dict:
        return {"q": self.config.q, "seed": self.config.seed, "max_iters": self.config.max_iters,
                "found": self.found, "iterations": self.iterations,
                "rejected_dependent": self.rejected_dependent,
                "elapsed_s": round(self.elapsed, 3),
                "system": self.system.to_json() if self.system else None}


def table_system(q: int) -> LinearSystem:
    """The published witness for q, parsed over the prime field and then embedded in F_q."""
    if q not in WITNESS_TABLE:
        raise KeyError(f"no table row for q={q}")
    p, _ = prime_power(q)
    tower = make_tower(q)
    Fp = make_field(p)
    forms = []
    for s in WITNESS_TABLE[q]:
        f = parse_form(s, Fp, degree=3)  # the table only uses integer coefficients
        forms.append(f if tower.base == Fp else f.lift(find_embedding(Fp, tower.base)))
    return LinearSystem(tower.base, tuple(forms), label=f"table q={q}")


def draw_form(rng: np.random.Generator, K) -> CubicForm:
    """c0..c9 drawn in order, each uniform over field codes."""
    return CubicForm(K, tuple(int(c) for c in rng.integers(0, K.size, size=10)))


def random_search(cfg: SearchConfig, witness_log: str | None = None) -> SearchResult:
    tower = make_tower(cfg.q)
    K = tower.base
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    t0 = time.perf_counter()
    rejected = 0
    for it in range(1, cfg.max_iters + 1):
        forms = [draw_form(rng, K) for _ in range(4)]
        while independence_rank(forms) < 4:
            rejected += 1
            forms = [draw_form(rng, K) for _ in range(4)]
        S = LinearSystem(K, tuple(forms), label=f"search q={cfg.q} seed={cfg.seed} iter={it}")
        rep = scan_reducible_members(S, tower, early_abort=cfg.early_abort, threads=cfg.threads,
                                     with_verdicts=False)
        if not rep.reducible:
            if witness_log:
                _append_witness(witness_log, cfg, it, S)
            return SearchResult(cfg, S, it, rejected, time.perf_counter() - t0)
    return SearchResult(cfg, None, cfg.max_iters, rejected, time.perf_counter() - t0)


def _append_witness(path: str, cfg: SearchConfig, it: int, S: LinearSystem):
    rec = {"q": cfg.q, "seed": cfg.seed, "iteration": it,
           "forms": [form_to_json(f) for f in S.basis]}
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(rec) + "\n")


@dataclass
class TableRowResult:
    q: int
    rank: int
    prime_field_coefficients: bool
    scan: ScanReport

    @property
    def ok(self) -> bool:
        return (self.rank == 4 and self.prime_field_coefficients and self.scan.complete
                and not self.scan.reducible)

    def to_json(self) -> dict:
        return {"q": self.q, "ok": self.ok, "rank": self.rank,
                "members": self.scan.member_count,
                "reducible": [list(a) for a in self.scan.reducible_indices],
                "lines_scanned": self.scan.lines_scanned,
                "elapsed_s": round(self.scan.elapsed, 3)}


def verify_table_row(q: int, threads: int = 1) -> TableRowResult:
    S = table_system(q)
    tower = make_tower(q)
    p, _ = prime_power(q)
    prime_ok = all(c < p for f in S.basis for c in f.coeffs)
    rep = scan_reducible_members(S, tower, threads=threads)
    return TableRowResult(q, independence_rank(list(S.basis)), prime_ok, rep)


def verify_witness_table(qs=None, threads: int = 1) -> list[TableRowResult]:
    return [verify_table_row(q, threads) for q in (qs or sorted(WITNESS_TABLE))]


@dataclass
class ExtensionReport:
    q: int
    k: int
    scan: ScanReport

    @property
    def ok(self) -> bool:
        return self.scan.complete and not self.scan.reducible

    def to_json(self) -> dict:
        return {"q": self.q, "k": self.k, "qk": self.q**self.k, "ok": self.ok,
                "members": self.scan.member_count,
                "reducible": [list(a) for a in self.scan.reducible_indices],
                "lines_scanned": self.scan.lines_scanned}


def extension_check(S: LinearSystem, k: int, threads: int = 1) -> ExtensionReport:
    """Scan the F_{q^k}-members of S, i.e. S with its coefficients viewed in F_{q^k}."""
    if k < 1:
        raise ValueError("k must be at least 1")
    q = S.base.size
    tower = make_tower(q**k)  # raises if q^(6k) is out of range
    emb = find_embedding(S.base, tower.base)
    lifted = LinearSystem(tower.base, tuple(f.lift(emb) for f in S.basis),
                          label=f"{S.label} over F_{q**k}")
    return ExtensionReport(q, k, scan_reducible_members(lifted, tower, threads=threads))


@dataclass
class CensusCount:
    q: int
    reducible: int
    total: int

    @property
    def fraction(self) -> float:
        return self.reducible / self.total

    @property
    def irreducible_fraction(self) -> float:
        return 1 - self.fraction

    def to_json(self) -> dict:
        return {"q": self.q, "reducible": self.reducible, "total": self.total,
                "reducible_fraction": self.fraction}


def census_count(q: int, max_q: int = CENSUS_MAX_Q) -> CensusCount:
    tower: TowerCtx = make_tower(q)
    return CensusCount(q, len(census_reducible(tower, max_q)), normalized_count(q))

