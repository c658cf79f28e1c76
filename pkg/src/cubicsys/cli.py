"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 budget exhausted.
Failures print one line ``error: <code-name>: <reason>`` on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .classify import classify
from .construct import (BudgetExhausted, ConstructionError, explicit_construction,
                        galois_orbit_construction, lemma31_check)
from .forms import form_to_json, parse_form
from .gf import FieldError, make_tower, prime_power
from .linsys import LinearSystem
from .search import (WITNESS_TABLE, SearchConfig, census_count, extension_check, random_search,
                     verify_witness_table)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _prime_power_arg(s: str) -> int:
    try:
        q = int(s)
        prime_power(q)
    except (ValueError, FieldError):
        raise argparse.ArgumentTypeError(f"{s!r} is not a prime power")
    return q


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")

    p = _Parser(prog="cubicsys", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify-table", parents=[common], help="scan the published witness systems")
    s.add_argument("--q", type=_prime_power_arg, action="append",
                   help="restrict to these rows (repeatable)")

    s = sub.add_parser("explicit", parents=[common], help="normal-basis construction")
    s.add_argument("--q", type=_prime_power_arg, required=True)

    s = sub.add_parser("orbit", parents=[common], help="construction from a degree-6 orbit")
    s.add_argument("--q", type=_prime_power_arg, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iters", type=int, default=10_000, help="candidate point budget")

    s = sub.add_parser("lemma31", parents=[common], help="exhaustive abc=0 check")
    s.add_argument("--q", type=_prime_power_arg, required=True)

    s = sub.add_parser("search", parents=[common], help="random witness search")
    s.add_argument("--q", type=_prime_power_arg, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iters", type=int, default=20_000)
    s.add_argument("--witness-log", help="append found witnesses as JSON lines")
    s.add_argument("--no-early-abort", action="store_true")

    s = sub.add_parser("extend", parents=[common], help="scan F_{q^k}-members of a system over F_q")
    s.add_argument("--q", type=_prime_power_arg, required=True)
    s.add_argument("--k", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--row", type=int, choices=sorted(WITNESS_TABLE),
                   help="use this table row, coefficients read in F_q")
    g.add_argument("--system", help="four forms separated by ';'")

    s = sub.add_parser("census", parents=[common], help="count reducible cubics (q <= 5)")
    s.add_argument("--q", type=_prime_power_arg, required=True)

    s = sub.add_parser("classify", parents=[common], help="classify one cubic")
    s.add_argument("--q", type=_prime_power_arg, required=True)
    s.add_argument("--form", required=True)
    return p


# --- subcommands: each returns (report dict, table rows) -----------------------------


def _verify_table(a):
    rows = verify_witness_table(a.q, threads=a.threads)
    report = {"rows": [r.to_json() for r in rows], "ok": all(r.ok for r in rows)}
    table = [{"q": r.q, "ok": r.ok, "members": r.scan.member_count,
              "reducible": len(r.scan.reducible)} for r in rows]
    if not report["ok"]:
        bad = [f"q={r.q} member={list(r.scan.reducible_indices[:1])}" for r in rows if not r.ok]
        raise VerificationFailed("table rows failed: " + ", ".join(bad), report, table)
    return report, table


def _explicit(a):
    w = explicit_construction(a.q, threads=a.threads)
    rep = w.to_json()
    idx, verdict = w.reducible_member
    return rep, [{"q": a.q, "member": " ".join(map(str, idx)), "kind": verdict.kind.value,
                  "members": w.scan.member_count}]


def _orbit(a):
    w = galois_orbit_construction(a.q, seed=a.seed, budget=a.max_iters, threads=a.threads)
    rep = w.to_json()
    rep["seed"] = a.seed
    idx, verdict = w.reducible_member
    return rep, [{"q": a.q, "seed": a.seed, "candidates": w.candidates_tried,
                  "member": " ".join(map(str, idx)), "kind": verdict.kind.value}]


def _lemma31(a):
    r = lemma31_check(a.q)
    rep = r.to_json()
    if not r.ok:
        raise VerificationFailed(f"counterexample {r.counterexamples[0]}", rep, [])
    return rep, [{"q": a.q, "kind": k, "count": n} for k, n in r.counts.items()]


def _search(a):
    cfg = SearchConfig(a.q, seed=a.seed, max_iters=a.max_iters, threads=a.threads,
                       early_abort=not a.no_early_abort)
    res = random_search(cfg, witness_log=a.witness_log)
    rep = res.to_json()
    table = [{"q": a.q, "seed": a.seed, "found": res.found, "iterations": res.iterations}]
    if not res.found:
        raise BudgetExhausted(f"no witness in {a.max_iters} iterations", rep, table)
    return rep, table


def _extend(a):
    base = make_tower(a.q).base
    texts = WITNESS_TABLE[a.row] if a.row else [t for t in a.system.split(";") if t.strip()]
    forms = tuple(parse_form(t, base, degree=3) for t in texts)
    S = LinearSystem(base, forms, label=f"row q={a.row}" if a.row else "user system")
    r = extension_check(S, a.k, threads=a.threads)
    rep = r.to_json()
    table = [{"q": a.q, "k": a.k, "ok": r.ok, "members": r.scan.member_count,
              "reducible": len(r.scan.reducible)}]
    if not r.ok:
        raise VerificationFailed(
            f"{len(r.scan.reducible)} reducible F_{a.q ** a.k}-members, first {list(r.scan.reducible_indices[0])}",
            rep, table)
    return rep, table


def _census(a):
    c = census_count(a.q)
    return c.to_json(), [c.to_json()]


def _classify(a):
    tower = make_tower(a.q)
    F = parse_form(a.form, tower.base, degree=3)
    v = classify(F, tower)
    rep = {"q": a.q, "form": form_to_json(F), **v.to_json()}
    return rep, [{"q": a.q, "form": form_to_json(F)["text"], "kind": v.kind.value}]


COMMANDS = {"verify-table": _verify_table, "explicit": _explicit, "orbit": _orbit,
            "lemma31": _lemma31, "search": _search, "extend": _extend, "census": _census,
            "classify": _classify}


# --- output -------------------------------------------------------------------------


def render(report, table, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        if table:
            w = csv.DictWriter(buf, fieldnames=list(table[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(table)
        return buf.getvalue()
    return "".join("  ".join(f"{k}={v}" for k, v in row.items()) + "\n" for row in table)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(code: int, name: str, reason: str) -> int:
    reason = " ".join(str(reason).split())
    sys.stderr.write(f"error: {name}: {reason}\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be positive")
        if getattr(args, "k", 1) is not None and getattr(args, "k", 1) < 1:
            raise UsageError("--k must be positive")
        if getattr(args, "max_iters", 1) < 1:
            raise UsageError("--max-iters must be positive")
        report, table = COMMANDS[args.command](args)
    except UsageError as e:
        return _fail(EXIT_USAGE, "usage", e)
    except VerificationFailed as e:
        msg, report, table = e.args
        _emit(render(report, table, args.format), args.out)
        return _fail(EXIT_VERIFY, "verification", msg)
    except BudgetExhausted as e:
        if len(e.args) == 3:
            msg, report, table = e.args
            _emit(render(report, table, args.format), args.out)
        else:
            msg = e.args[0]
        return _fail(EXIT_BUDGET, "budget", msg)
    except ConstructionError as e:
        return _fail(EXIT_VERIFY, "verification", e)
    except (ValueError, KeyError) as e:
        return _fail(EXIT_USAGE, "usage", e)
    _emit(render(report, table, args.format), args.out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
