"""Exact Gaussian elimination over a FieldCtx (int-coded elements)."""

from __future__ import annotations

from .gf import FieldCtx, make_field


def rref(ctx: FieldCtx, rows):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ctx.inv(m[r][c])
        m[r] = [ctx.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(ctx: FieldCtx, rows) -> int:
    return len(rref(ctx, rows)[1])


def nullspace(ctx: FieldCtx, rows, ncols: int | None = None):
    """Basis of {v : rows . v = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(ctx, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = ctx.neg(row[f])
        basis.append(v)
    return basis


def det(ctx: FieldCtx, mat) -> int:
    m = [list(r) for r in mat]
    n = len(m)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = ctx.neg(d)
        d = ctx.mul(d, m[c][c])
        inv = ctx.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = ctx.mul(m[i][c], inv)
                m[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(m[i], m[c])]
    return d


def solve(ctx: FieldCtx, rows, rhs):
    """One solution x of rows . x = rhs, or None if inconsistent."""
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(ctx, aug)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def rank_mod_p(rows, p: int) -> int:
    return rank(make_field(p), [[x % p for x in r] for r in rows])


def nullspace_mod_p(rows, p: int, ncols: int | None = None):
    return nullspace(make_field(p), [[x % p for x in r] for r in rows], ncols)
