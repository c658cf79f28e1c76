"""Run both constructions for a range of q and report the unique reducible member."""

import argparse
import time

from cubicsys.construct import explicit_construction, galois_orbit_construction

parser = argparse.ArgumentParser()
parser.add_argument("--explicit", type=int, nargs="*", default=[2, 3, 4, 5, 7, 8, 9, 11, 13])
parser.add_argument("--orbit", type=int, nargs="*", default=[2, 3, 4, 5])
parser.add_argument("--seed", type=int, default=0)
args = parser.parse_args()

for q in args.explicit:
    t = time.perf_counter()
    w = explicit_construction(q)
    a, v = w.reducible_member
    print(f"explicit q={q:>2} alpha={w.tower.cubic.serialize(w.alpha)} member={a} "
          f"{v.kind.value} ({time.perf_counter() - t:.1f}s)")

for q in args.orbit:
    t = time.perf_counter()
    w = galois_orbit_construction(q, seed=args.seed)
    a, v = w.reducible_member
    print(f"orbit    q={q:>2} candidates={w.candidates_tried} member={a} "
          f"{v.kind.value} ({time.perf_counter() - t:.1f}s)")
