"""Reducible-cubic counts for q = 2..4 and the growth exponent between consecutive q."""

import math

from cubicsys.search import census_count

prev = None
for q in (2, 3, 4, 5):
    c = census_count(q)
    line = f"q={q} reducible={c.reducible} total={c.total} irreducible_fraction={c.irreducible_fraction:.4f}"
    if prev:
        line += f" exponent_vs_q={prev.q}: {math.log(c.reducible / prev.reducible) / math.log(q / prev.q):.3f}"
    print(line)
    prev = c
