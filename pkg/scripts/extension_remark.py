"""The q=8 table row read over F_2, scanned over F_{2^k} for k = 1..3."""

from cubicsys.forms import format_form, parse_form
from cubicsys.gf import make_field
from cubicsys.linsys import LinearSystem
from cubicsys.search import WITNESS_TABLE, extension_check

K = make_field(2)
S = LinearSystem(K, tuple(parse_form(s, K, degree=3) for s in WITNESS_TABLE[8]), label="row q=8")
for k in (1, 2, 3):
    rep = extension_check(S, k)
    print(f"k={k} F_{2**k}: {rep.scan.member_count} members, {len(rep.scan.reducible)} reducible")
    for a, v in rep.scan.reducible:
        w = v.factors[0].line
        print(f"    member {a}: {v.kind.value}, line {format_form(w)}")
