"""Random witness search over several seeds; records iteration counts."""

import argparse

from cubicsys.search import SearchConfig, random_search

parser = argparse.ArgumentParser()
parser.add_argument("--q", type=int, default=2)
parser.add_argument("--seeds", type=int, default=5)
parser.add_argument("--max-iters", type=int, default=20_000)
parser.add_argument("--witness-log")
args = parser.parse_args()

for seed in range(args.seeds):
    r = random_search(SearchConfig(args.q, seed=seed, max_iters=args.max_iters), args.witness_log)
    print(f"q={args.q} seed={seed} found={r.found} iterations={r.iterations} "
          f"rejected={r.rejected_dependent} {r.elapsed:.1f}s")
