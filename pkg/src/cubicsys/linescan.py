"""Vectorized restriction of cubics to every line of P^2(K).

For the line x + b*y + c*z = 0, parametrized by x = -(b s + c t), y = s,
z = t, the monomial x^a y^u z^v restricts to

    (-1)^a sum_i C(a, i) b^i c^(a-i) s^(i+u) t^(a-i+v),

so every binary-cubic coefficient of every monomial is an F_p-multiple of
one of the ten products b^i c^j (i + j <= 3).  Working with F_p digit
vectors, the restriction of a whole family of F_q-forms to a batch of lines
is one matrix product; a nonzero left-kernel vector over F_p is then a
member divisible by that line.

Lines [0:1:c] and [0:0:1] are handled by cyclically permuting x, y, z so
that they become [1:c:0] and [1:0:0].
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
import itertools
from math import comb

import numpy as np

from .forms import CUBIC_MONOMIALS, CubicForm, line_count
from .gf import Embedding, FieldCtx, FieldMismatch, make_field
from .linalg import nullspace, rref

PAIRS = [(i, s - i) for s in range(4) for i in range(s + 1)]
_PAIR_INDEX = {pq: n for n, pq in enumerate(PAIRS)}

# (a,b,c) -> index of the monomial that (a,b,c) becomes under each relabeling
_MONO_INDEX = {m: n for n, m in enumerate(CUBIC_MONOMIALS)}
_PERMS = {
    1: list(range(10)),
    # F'(x,y,z) = F(z,x,y): lines y + c z = 0 become x + c y = 0
    2: [_MONO_INDEX[(b, c, a)] for (a, b, c) in CUBIC_MONOMIALS],
    # F''(x,y,z) = F(y,z,x): the line z = 0 becomes x = 0
    3: [_MONO_INDEX[(c, a, b)] for (a, b, c) in CUBIC_MONOMIALS],
}

DEFAULT_CHUNK = 1 << 15


@dataclass
class LineHit:
    line: int  # index in enumerate_lines order
    kernel: list  # F_p basis of the left kernel (rows of digits)


class LineEngine:
    """Restriction machinery for F_q-forms against all lines over K."""

    def __init__(self, base: FieldCtx, K: FieldCtx, emb: Embedding):
        if emb.src != base or emb.dst != K:
            raise FieldMismatch("embedding does not match base/line fields")
        self.base, self.K, self.emb = base, K, emb
        self.p, self.n, self.e = K.p, K.k, base.k
        exp, log, _ = K.tables
        self._exp, self._log = exp, log
        self._digits = K.digit_table
        size = K.size
        codes = np.arange(size)
        pw = np.zeros((size, 4), dtype=np.int64)
        pw[:, 0] = 1
        for i in range(1, 4):
            pw[:, i] = _vmul(exp, log, pw[:, i - 1], codes)
        self._powers = pw
        self._W = {t: self._restriction_tensor(t) for t in (1, 2, 3)}

    # -- setup -------------------------------------------------------------------
    def _restriction_tensor(self, line_type):
        """W[(pair, j), (m, d), (u, i)] over F_p: digit i of theta_d * T[m, u]."""
        p, n, e = self.p, self.n, self.e
        thetas = [self.emb(p**d) for d in range(e)]
        mats = [self.K.mul_matrix(th) for th in thetas]
        W = np.zeros((10, n, 10, e, 4, n), dtype=np.int64)
        perm = _PERMS[line_type]
        for m_src, m in enumerate(perm):
            a, b, c = CUBIC_MONOMIALS[m]
            for i in range(a + 1):
                coef = ((-1) ** a * comb(a, i)) % p
                if not coef:
                    continue
                s_exp = i + b
                u = 3 - s_exp
                pair = _PAIR_INDEX[(i, a - i)]
                for d, M in enumerate(mats):
                    # digits(theta_d * coef * w) = coef * M @ digits(w)
                    W[pair, :, m_src, d, u, :] += coef * M.T
        return W.reshape(10 * n, 10 * e * 4 * n) % p

    def basis_matrix(self, forms) -> np.ndarray:
        """B[(f, d'), (m, d)]: F_p digit d of theta_d' * c_{f,m}."""
        F = self.base
        e = self.e
        rows = []
        for form in forms:
            if form.field != F:
                raise FieldMismatch(f"form over {form.field!r}, engine base {F!r}")
            for dp in range(e):
                th = self.p**dp  # code of t^dp
                row = []
                for c in form.coeffs:
                    row.extend(F.digits(F.mul(th, c)))
                rows.append(row)
        return np.array(rows, dtype=np.int64).reshape(len(rows), 10 * e)

    @property
    def coord_degree(self) -> int:
        """[K : F_q]."""
        return self.n // self.e

    def _coordinate_matrix(self):
        """F_p matrix taking K-digits to digits of F_q-coordinates in the basis 1, t, t^2, ...

        Output digit (j, d) is digit d of the j-th F_q-coordinate.
        """
        K, p, e = self.K, self.p, self.e
        thetas = [self.emb(p**d) for d in range(e)]
        cols = []
        for j in range(self.coord_degree):
            tj = K.pow(p if K.k > 1 else 1, j)
            for d in range(e):
                cols.append(K.digits(K.mul(thetas[d], tj)))
        basis = np.array(cols, dtype=np.int64).T  # digits <- coords
        return _inverse_mod_p(basis, p)

    def system_tensor(self, forms, cols=None):
        """Per line type, the map from power digits to F_q-coordinate digits.

        Shape (10n, R * len(cols) * e) where cols selects F_q-coordinate
        columns of the (R, 4r) line matrix; default all of them.
        """
        B = self.basis_matrix(forms)[:: self.e]
        R = B.shape[0]
        r4 = 4 * self.coord_degree
        cols = list(range(r4)) if cols is None else list(cols)
        coords = self._coordinate_matrix()
        out = {}
        for t, W in self._W.items():
            W3 = W.reshape(10 * self.n, 10 * self.e, 4, self.n)
            S = np.einsum("rk,akui->arui", B, W3) % self.p
            S = np.einsum("arui,ji->aruj", S, coords) % self.p
            S = S.reshape(10 * self.n, R, r4, self.e)[:, :, cols, :]
            out[t] = S.reshape(10 * self.n, -1).astype(np.float64)
        return out

    # -- per-chunk computation -------------------------------------------------
    def line_params(self, start: int, stop: int):
        """(b, c, type) arrays for line indices [start, stop)."""
        size = self.K.size
        idx = np.arange(start, stop, dtype=np.int64)
        b = np.zeros_like(idx)
        c = np.zeros_like(idx)
        t = np.ones_like(idx)
        first = idx < size * size
        b[first] = idx[first] // size
        c[first] = idx[first] % size
        second = (~first) & (idx < size * size + size)
        b[second] = idx[second] - size * size  # [0:1:c] -> [1:c:0]
        t[second] = 2
        t[idx == size * size + size] = 3
        return b, c, t

    @cached_property
    def _mul_table(self):
        K = self.K
        if K.size > 4096:
            return None
        exp, log = self._exp, self._log
        a = np.arange(K.size)
        return _vmul(exp, log, a[:, None], a[None, :]).astype(np.int32)

    def power_digits(self, b, c) -> np.ndarray:
        """(L, 10n) digits of b^i c^j for the ten pairs."""
        pb = self._powers[b]
        pc = self._powers[c]
        out = np.empty((len(b), 10, self.n), dtype=np.float64)
        table = self._mul_table
        for k, (i, j) in enumerate(PAIRS):
            if table is not None:
                prod = table[pb[:, i], pc[:, j]]
            else:
                prod = _vmul(self._exp, self._log, pb[:, i], pc[:, j])
            out[:, k, :] = self._digits[prod]
        return out.reshape(len(b), 10 * self.n)

    def _apply(self, P, types, S, R):
        """F_q code matrices (L, R, cols) from power digits P and a system tensor."""
        L = len(P)
        width = next(iter(S.values())).shape[1]
        out = np.empty((L, width), dtype=np.int32)
        p = self.p
        for ty in (1, 2, 3):
            sel = types == ty
            if not sel.any():
                continue
            X = P[sel] @ S[ty]
            # exact: X holds small integers; the +0.5 keeps floor away from rounding
            X -= p * np.floor((X + 0.5) * (1.0 / p))
            out[sel] = X
        if self.e == 1:
            return out.reshape(L, R, -1)
        weights = p ** np.arange(self.e, dtype=np.int32)
        return out.reshape(L, R, -1, self.e) @ weights

    def system_matrices(self, S: dict, R: int, start: int, stop: int) -> np.ndarray:
        """(L, R, 4r) matrices over F_q (codes), r = [K:F_q].

        Row f holds the F_q-coordinates of basis form f restricted to the line.
        """
        b, c, t = self.line_params(start, stop)
        return self._apply(self.power_digits(b, c), t, S, R)

    def operators(self, start: int, stop: int) -> np.ndarray:
        """(L, 10e, 4n) restriction operators acting on form coefficient digits."""
        b, c, t = self.line_params(start, stop)
        L = stop - start
        out = np.empty((L, 10 * self.e * 4 * self.n), dtype=np.int64)
        for ty in (1, 2, 3):
            sel = t == ty
            if not sel.any():
                continue
            P = self.power_digits(b[sel], c[sel])
            out[sel] = np.rint(P @ self._W[ty].astype(np.float64)).astype(np.int64) % self.p
        return out.reshape(L, 10 * self.e, 4 * self.n)

    # -- drivers -------------------------------------------------------------------
    @property
    def num_lines(self) -> int:
        return line_count(self.K)

    def _chunks(self, chunk):
        total = self.num_lines
        return [(s, min(s + chunk, total)) for s in range(0, total, chunk)]

    def scan(self, forms, early_abort=False, chunk=None, threads=1):
        """Lines on which some nonzero F_q-combination of ``forms`` vanishes.

        Returns (hits, lines_scanned); each hit carries an F_q basis of the
        left kernel.  With early_abort the scan stops after the first chunk
        containing a hit.
        """
        R = len(forms)
        r4 = 4 * self.coord_degree
        S_full = self.system_tensor(forms)
        S_pre = self.system_tensor(forms, cols=range(R)) if R < r4 else None
        chunk = chunk or max(1024, DEFAULT_CHUNK * 4 // max(4, R))
        ops = _fq_ops(self.base)

        def work(rng):
            start, stop = rng
            b, c, t = self.line_params(start, stop)
            P = self.power_digits(b, c)
            if S_pre is not None:
                # a nonsingular leading R x R block proves full rank
                cand = np.flatnonzero(_eliminate(self._apply(P, t, S_pre, R), ops))
            else:
                cand = np.arange(len(P))
            if not len(cand):
                return []
            A = self._apply(P[cand], t[cand], S_full, R)
            bad = np.flatnonzero(_eliminate(A, ops))
            return [LineHit(start + int(cand[i]), nullspace(self.base, A[i].T.tolist(), ncols=R))
                    for i in bad]

        hits, scanned = [], 0
        ranges = self._chunks(chunk)
        if threads > 1 and not early_abort:
            with ThreadPoolExecutor(threads) as ex:
                for res in ex.map(work, ranges):
                    hits.extend(res)
            return hits, self.num_lines
        for rng in ranges:
            res = work(rng)
            scanned += rng[1] - rng[0]
            hits.extend(res)
            if early_abort and res:
                break
        return hits, scanned

    def divisible_mask(self, forms, chunk=None) -> np.ndarray:
        """For each form, whether some line over K divides it."""
        C = self.basis_matrix(forms)[:: self.e].astype(np.float64)  # theta_0 = 1 rows
        chunk = chunk or max(16, (1 << 22) // (len(forms) * 4 * self.n))
        mask = np.zeros(len(forms), dtype=bool)
        for start, stop in self._chunks(chunk):
            Op = self.operators(start, stop)  # (L, 10e, 4n)
            L = stop - start
            flat = Op.transpose(1, 0, 2).reshape(10 * self.e, L * 4 * self.n).astype(np.float64)
            res = np.rint(C @ flat).astype(np.int64) % self.p
            zero = ~res.reshape(len(forms), L, 4 * self.n).any(axis=2)
            mask |= zero.any(axis=1)
        return mask


def _vmul(exp, log, a, b):
    """Elementwise product of code arrays via exp/log tables."""
    la, lb = log[a], log[b]
    out = exp[(la + lb) % len(exp)]
    return np.where((a == 0) | (b == 0), 0, out)


def _inverse_mod_p(M, p):
    n = M.shape[0]
    aug = [list(map(int, row)) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    red, piv = rref(make_field(p), aug)
    if piv[:n] != list(range(n)):
        raise ValueError("coordinate basis is singular")  # pragma: no cover
    return np.array([row[n:] for row in red], dtype=np.int64)


class _FqOps:
    """Elementwise F_q arithmetic on code arrays (mod p for prime fields)."""

    def __init__(self, F: FieldCtx):
        self.p, self.prime = F.p, F.k == 1
        q = F.size
        self.inv = np.array([0] + [F.inv(a) for a in range(1, q)], dtype=np.int32)
        if not self.prime:
            self.mul = np.array([[F.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)
            self.sub = np.array([[F.sub(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)

    def times(self, a, b):
        return a * b % self.p if self.prime else self.mul[a, b]

    def minus(self, a, b):
        return (a - b) % self.p if self.prime else self.sub[a, b]


_OPS: dict = {}


def _fq_ops(F: FieldCtx) -> _FqOps:
    if F not in _OPS:
        _OPS[F] = _FqOps(F)
    return _OPS[F]


def rank_deficient(A: np.ndarray, ops) -> np.ndarray:
    """Batched test rank(A[l]) < rows(A[l]) over F_q (entries are codes).

    A nonsingular leading square block already proves full row rank, which
    settles all but roughly a 1/q fraction of inputs; only the rest go
    through elimination on all columns.
    """
    if isinstance(ops, int):
        ops = _fq_ops(make_field(ops))
    L, R, C = A.shape
    if C <= R:
        return _eliminate(A, ops)
    bad = np.zeros(L, dtype=bool)
    undecided = np.flatnonzero(_eliminate(A[:, :, :R], ops))
    if len(undecided):
        bad[undecided] = _eliminate(A[undecided], ops)
    return bad


def _eliminate(A, ops):
    A = A.astype(np.int32, copy=True)
    L, R, C = A.shape
    bad = np.zeros(L, dtype=bool)
    idx = np.arange(L)
    for r in range(R):
        row = A[:, r, :]
        nz = row != 0
        bad |= ~nz.any(axis=1)
        if r + 1 == R:
            break
        piv = nz.argmax(axis=1)
        prow = ops.times(row, ops.inv[row[idx, piv]][:, None])
        col = np.take_along_axis(A[:, r + 1:, :], piv[:, None, None], axis=2)
        A[:, r + 1:, :] = ops.minus(A[:, r + 1:, :], ops.times(col, prow[:, None, :]))
    return bad


def kernel_members(base: FieldCtx, kernel):
    """Canonical F_q-tuples spanned by an F_q kernel basis."""
    red, _ = rref(base, kernel)
    return enumerate_projective(base, red)


def enumerate_projective(base: FieldCtx, basis):
    """All canonical (first nonzero = 1) combinations of an F_q basis."""
    if not basis:
        return []
    r = len(basis)
    q = base.size
    out = set()
    for coeffs in itertools.product(range(q), repeat=r):
        if not any(coeffs):
            continue
        if next(c for c in coeffs if c) != 1:
            continue
        v = [0] * len(basis[0])
        for c, row in zip(coeffs, basis):
            if c:
                v = [base.add(x, base.mul(c, y)) for x, y in zip(v, row)]
        lead = next(x for x in v if x)
        inv = base.inv(lead)
        out.add(tuple(base.mul(inv, x) for x in v))
    return sorted(out)


def engine_for(base: FieldCtx, K: FieldCtx, emb: Embedding) -> LineEngine:
    key = (base, K, emb.root)
    eng = _ENGINES.get(key)
    if eng is None:
        eng = _ENGINES[key] = LineEngine(base, K, emb)
    return eng


_ENGINES: dict = {}


def restrict_digits(engine: LineEngine, form: CubicForm, line: int) -> list[int]:
    """Digits of the restriction of one form to one line (for testing)."""
    Op = engine.operators(line, line + 1)[0]
    C = engine.basis_matrix([form])[0]
    return ((C @ Op) % engine.p).tolist()
