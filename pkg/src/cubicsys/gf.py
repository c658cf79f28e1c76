"""Exact arithmetic in F_{p^k} and the tower F_q < F_{q^2}, F_{q^3} < F_{q^6}.

Elements are plain ints: the code of c_0 + c_1 t + ... + c_{k-1} t^{k-1} is
sum(c_i * p**i).  Counting codes upward is the element enumeration order used
everywhere (least-significant coefficient varies fastest).

Fields up to ``TABLE_MAX`` elements get exp/log/Zech tables, built lazily with
numpy on first use.  Larger fields fall back to schoolbook polynomial
arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
import sympy

SCALAR_MAX = 2**40
TABLE_MAX = 2**20

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class FieldError(ValueError):
    pass


class FieldMismatch(FieldError):
    pass


# --- polynomials over F_p as coefficient lists, least significant first -----


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a, b, p):
    """Remainder of a modulo monic-or-not b over F_p (lists, LS first)."""
    a = _trim(list(a))
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def monic_polys(p, d):
    """All monic degree-d polynomials over F_p, lower coefficients in code order."""
    for low in itertools.product(range(p), repeat=d):
        yield list(reversed(low)) + [1]


def is_irreducible(poly, p):
    """Trial division by every monic polynomial of degree 1..deg/2."""
    k = len(poly) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    if poly[0] == 0:
        return False
    for d in range(1, k // 2 + 1):
        for div in monic_polys(p, d):
            if not _poly_rem(poly, div, p):
                return False
    return True


def smallest_irreducible(p, k):
    """Monic irreducible of degree k whose lower coefficients have the smallest code."""
    if k == 1:
        return (0, 1)
    for code in range(p**k):
        low = [(code // p**i) % p for i in range(k)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


class FieldCtx:
    """A concrete finite field F_{p^k}.

    Use :func:`make_field` rather than constructing directly; it caches
    instances so that identical fields are the same object.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...], table_max: int = TABLE_MAX):
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if k > 1 and not is_irreducible(list(modulus), p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.modulus = tuple(modulus)
        self.size = p**k
        self.table_mode = self.size <= table_max
        self._low = [(-c) % p for c in modulus[:-1]]  # t^k = sum _low[i] t^i
        self._pow_p = [p**i for i in range(k)]

    # identity -----------------------------------------------------------------
    def _key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FieldCtx(p={self.p}, k={self.k}, modulus={self.modulus_str()})"

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def modulus_str(self) -> str:
        terms = []
        for i in reversed(range(self.k + 1)):
            c = self.modulus[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    # codec --------------------------------------------------------------------
    def digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def from_digits(self, ds) -> int:
        return sum((d % self.p) * w for d, w in zip(ds, self._pow_p))

    def elements(self):
        return range(self.size)

    def serialize(self, a: int) -> str:
        if self.p > len(_DIGITS):
            return ",".join(str(d) for d in self.digits(a))
        return "".join(_DIGITS[d] for d in self.digits(a))

    def deserialize(self, s: str) -> int:
        if "," in s or self.p > len(_DIGITS):
            ds = [int(x) for x in s.split(",")]
        else:
            ds = [_DIGITS.index(ch) for ch in s]
        if len(ds) != self.k or any(not 0 <= d < self.p for d in ds):
            raise FieldError(f"bad element string {s!r} for {self!r}")
        return self.from_digits(ds)

    def to_json(self) -> dict:
        digs = "".join(_DIGITS[d] for d in self.modulus) if self.p <= len(_DIGITS) else list(self.modulus)
        return {"p": self.p, "k": self.k, "modulus": digs}

    def elem(self, a: int) -> "FieldElem":
        if not 0 <= a < self.size:
            raise FieldError(f"code {a} out of range for {self!r}")
        return FieldElem(self, a)

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    # polynomial-mode arithmetic -------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self.table_mode:
            if a == 0:
                return b
            if b == 0:
                return a
            lg = self._log_list
            la, lb = lg[a], lg[b]
            z = self._zech_list[(lb - la) % (self.size - 1)]
            if z < 0:
                return 0
            return self._exp_list[(la + z) % (self.size - 1)]
        p = self.p
        out, w = 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * w
            w *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return self.from_digits([-d for d in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def poly_mul(self, a: int, b: int) -> int:
        """Multiplication by schoolbook convolution and reduction (no tables)."""
        p, k = self.p, self.k
        if k == 1:
            return a * b % p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] += x * y
        low = self._low
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg] % p
            if c:
                base = deg - k
                for i, m in enumerate(low):
                    if m:
                        prod[base + i] += c * m
        return self.from_digits(prod[:k])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        if self.table_mode:
            lg = self._log_list
            return self._exp_list[(lg[a] + lg[b]) % (self.size - 1)]
        return self.poly_mul(a, b)

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        if a == 0:
            return 1 if n == 0 else 0
        if self.k == 1:
            return pow(a, n, self.p)
        if self.table_mode:
            return self._exp_list[(self._log_list[a] * n) % (self.size - 1)]
        return self._poly_pow(a, n)

    def _poly_pow(self, a, n):
        result = 1
        while n:
            if n & 1:
                result = self.poly_mul(result, a)
            a = self.poly_mul(a, a)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        if self.table_mode:
            return self._exp_list[(-self._log_list[a]) % (self.size - 1)]
        return self._poly_pow(a, self.size - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # multiplicative structure ------------------------------------------------------
    @cached_property
    def generator(self) -> int:
        """Smallest-code primitive element."""
        n = self.size - 1
        if n == 1:
            return 1
        exps = [n // r for r in sympy.factorint(n)]
        for g in range(2, self.size):
            if all(self._poly_pow(g, e) != 1 for e in exps):
                return g
        raise FieldError("no primitive element found")  # pragma: no cover

    @cached_property
    def tables(self):
        """(exp, log, zech) numpy arrays; log[0] = zech[...] = -1 marks zero."""
        if not self.table_mode:
            raise FieldError(f"{self!r} is too large for table mode")
        n = self.size - 1
        p, k = self.p, self.k
        block = 1
        while block * block < n:
            block *= 2
        # first block sequentially, then whole blocks by one batched multiply
        first = np.zeros((block, k), dtype=np.int64)
        cur = 1
        for i in range(block):
            first[i] = self.digits(cur)
            cur = self.poly_mul(cur, self.generator)
        step = self.digits(cur)  # g^block
        rows = [first]
        while sum(len(r) for r in rows) < n:
            rows.append(_batch_mul(rows[-1], step, self.modulus, p))
        exp_digits = np.concatenate(rows)[:n]
        weights = np.array(self._pow_p, dtype=np.int64)
        exp = exp_digits @ weights
        log = np.full(self.size, -1, dtype=np.int64)
        log[exp] = np.arange(n)
        if len(set(exp.tolist())) != n:
            raise FieldError("generator is not primitive")  # pragma: no cover
        plus_one = exp_digits.copy()
        plus_one[:, 0] = (plus_one[:, 0] + 1) % p
        zech = log[plus_one @ weights]
        return exp, log, zech

    @cached_property
    def _exp_list(self):
        return self.tables[0].tolist()

    @cached_property
    def _log_list(self):
        return self.tables[1].tolist()

    @cached_property
    def _zech_list(self):
        return self.tables[2].tolist()

    @cached_property
    def digit_table(self) -> np.ndarray:
        """(size, k) array of coefficient vectors, only for table-sized fields."""
        codes = np.arange(self.size, dtype=np.int64)
        return np.stack([(codes // w) % self.p for w in self._pow_p], axis=1)

    def mul_matrix(self, c: int) -> np.ndarray:
        """k x k matrix over F_p of z -> c*z acting on digit column vectors."""
        cols = [self.digits(self.mul(c, self.from_digits([int(i == j) for i in range(self.k)])))
                for j in range(self.k)]
        return np.array(cols, dtype=np.int64).T


def _batch_mul(D, c, modulus, p):
    """Multiply each row of D (digit vectors) by the fixed element with digits c."""
    B, k = D.shape
    prod = np.zeros((B, 2 * k - 1), dtype=np.int64)
    for j, cj in enumerate(c):
        if cj:
            prod[:, j:j + k] += D * cj
    prod %= p
    low = [(-m) % p for m in modulus[:-1]]
    for deg in range(2 * k - 2, k - 1, -1):
        col = prod[:, deg]
        for i, m in enumerate(low):
            if m:
                prod[:, deg - k + i] += col * m
        prod[:, deg - k:deg] %= p
    return prod[:, :k] % p


@dataclass(frozen=True)
class FieldElem:
    """An element bound to its field; supports the usual operators."""

    field: FieldCtx
    value: int

    def _check(self, other):
        if not isinstance(other, FieldElem):
            return FieldElem(self.field, self.field.from_int(other))
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        o = self._check(other)
        return FieldElem(self.field, self.field.add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return FieldElem(self.field, self.field.sub(self.value, o.value))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        o = self._check(other)
        return FieldElem(self.field, self.field.mul(self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        return FieldElem(self.field, self.field.div(self.value, o.value))

    def __pow__(self, n: int):
        return FieldElem(self.field, self.field.pow(self.value, n))

    def inverse(self):
        return FieldElem(self.field, self.field.inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.serialize(self.value)


def field_arith(a: FieldElem, b: FieldElem | None, op: str) -> FieldElem:
    """Dispatch one of add/sub/mul/div/pow/inv; for pow, b is an int exponent."""
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    if isinstance(b, FieldElem) and b.field != a.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    return ops[op](b)


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1, max_size: int = SCALAR_MAX, table_max: int = TABLE_MAX) -> FieldCtx:
    if not sympy.isprime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if p**k > max_size:
        raise FieldError(f"F_{p}^{k} exceeds the configured maximum {max_size}")
    return FieldCtx(p, k, smallest_irreducible(p, k), table_max=table_max)


def prime_power(q: int) -> tuple[int, int]:
    """(p, e) with q = p**e, or FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, e),) = fac.items()
    return p, e


# --- embeddings ---------------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """The field map src -> dst sending src's t to ``root``."""

    src: FieldCtx
    dst: FieldCtx
    root: int
    table: tuple = field(repr=False)

    def __call__(self, a: int) -> int:
        return self.table[a]

    @cached_property
    def _inverse(self):
        return {b: a for a, b in enumerate(self.table)}

    def preimage(self, b: int):
        """The src element mapping to b, or None when b is outside the image."""
        return self._inverse.get(b)

    def contains(self, b: int) -> bool:
        return b in self._inverse


def _eval_prime_poly(ctx: FieldCtx, poly, x: int) -> int:
    acc = 0
    for c in reversed(poly):
        acc = ctx.add(ctx.mul(acc, x), c % ctx.p)
    return acc


def subfield_elements(dst: FieldCtx, d: int):
    """Elements of the unique subfield of dst of degree d over F_p (as codes)."""
    if dst.k % d:
        raise FieldError(f"F_p^{d} is not a subfield of {dst!r}")
    sub_size = dst.p**d
    h = dst.pow(dst.generator, (dst.size - 1) // (sub_size - 1))
    out = [0]
    cur = 1
    for _ in range(sub_size - 1):
        out.append(cur)
        cur = dst.mul(cur, h)
    return out


@lru_cache(maxsize=None)
def find_embedding(src: FieldCtx, dst: FieldCtx) -> Embedding:
    if src.p != dst.p or dst.k % src.k:
        raise FieldError(f"{src!r} does not embed in {dst!r}")
    if src.k == 1:
        root = 0
        table = tuple(range(src.p))
        return Embedding(src, dst, root, table)
    roots = sorted(x for x in subfield_elements(dst, src.k)
                   if _eval_prime_poly(dst, src.modulus, x) == 0)
    if not roots:
        raise FieldError("modulus has no root in the target field")  # pragma: no cover
    root = roots[0]
    powers = [1]
    for _ in range(src.k - 1):
        powers.append(dst.mul(powers[-1], root))
    basis = [powers[i] for i in range(src.k)]
    table = []
    for a in range(src.size):
        acc = 0
        for d, b in zip(src.digits(a), basis):
            if d:
                acc = dst.add(acc, dst.mul(d, b))
        table.append(acc)
    return Embedding(src, dst, root, tuple(table))


# --- the tower ----------------------------------------------------------------


class TowerCtx:
    """F_q inside F_{q^2}, F_{q^3} inside F_{q^6}, all with concrete embeddings.

    ``cubic`` is the standalone F_{q^3} used by the line scan; ``top`` is
    F_{q^6}.  Embeddings go base->quad/cubic/top and quad/cubic->top and are
    chosen so that the triangle base->cubic->top commutes.
    """

    def __init__(self, q: int):
        p, e = prime_power(q)
        self.q, self.p, self.e = q, p, e
        self.base = make_field(p, e)
        self.quad = make_field(p, 2 * e)
        self.cubic = make_field(p, 3 * e)
        self.top = make_field(p, 6 * e)
        self.base_to_cubic = find_embedding(self.base, self.cubic)
        self.base_to_quad = find_embedding(self.base, self.quad)
        self.cubic_to_top = find_embedding(self.cubic, self.top)
        self.quad_to_top = _compatible_embedding(self.quad, self.top, self.base_to_quad,
                                                 self.cubic_to_top, self.base_to_cubic)
        self.base_to_top = Embedding(self.base, self.top, self.cubic_to_top(self.base_to_cubic.root),
                                     tuple(self.cubic_to_top(self.base_to_cubic(a))
                                           for a in range(self.base.size)))

    def __repr__(self):
        return f"TowerCtx(q={self.q})"

    def embedding(self, src: FieldCtx, dst: FieldCtx) -> Embedding:
        table = {
            (self.base, self.cubic): self.base_to_cubic,
            (self.base, self.quad): self.base_to_quad,
            (self.base, self.top): self.base_to_top,
            (self.cubic, self.top): self.cubic_to_top,
            (self.quad, self.top): self.quad_to_top,
        }
        if src == dst:
            return Embedding(src, dst, 0, tuple(range(src.size)))
        try:
            return table[(src, dst)]
        except KeyError:
            raise FieldMismatch(f"no tower embedding {src!r} -> {dst!r}") from None

    def subfield_degree(self, ctx: FieldCtx) -> int:
        return ctx.k // self.e


def _compatible_embedding(quad, top, base_to_quad, cubic_to_top, base_to_cubic):
    """Embed F_{q^2} into F_{q^6} so that it agrees with base->cubic->top on F_q."""
    base = base_to_quad.src
    roots = sorted(x for x in subfield_elements(top, quad.k)
                   if _eval_prime_poly(top, quad.modulus, x) == 0)
    want = [cubic_to_top(base_to_cubic(a)) for a in range(base.size)]
    for r in roots:
        emb = _embedding_with_root(quad, top, r)
        if all(emb(base_to_quad(a)) == want[a] for a in range(base.size)):
            return emb
    raise FieldError("no compatible quadratic embedding")  # pragma: no cover


def _embedding_with_root(src, dst, root):
    powers = [1]
    for _ in range(src.k - 1):
        powers.append(dst.mul(powers[-1], root))
    table = []
    for a in range(src.size):
        acc = 0
        for d, b in zip(src.digits(a), powers):
            if d:
                acc = dst.add(acc, dst.mul(d, b))
        table.append(acc)
    return Embedding(src, dst, root, tuple(table))


@lru_cache(maxsize=None)
def make_tower(q: int) -> TowerCtx:
    return TowerCtx(q)


def frobenius(z: int, tower: TowerCtx, i: int = 1, ctx: FieldCtx | None = None) -> int:
    """z -> z^(q^i); ``ctx`` defaults to the top of the tower."""
    ctx = ctx or tower.top
    if i < 0:
        raise ValueError("iterate count must be >= 0")
    n = ctx.k // tower.e
    i %= n
    for _ in range(i):
        z = ctx.pow(z, tower.q)
    return z


def subfield_test(z: int, tower: TowerCtx, d: int) -> bool:
    """True iff z (in top) lies in F_{q^d}."""
    if d not in (1, 2, 3, 6):
        raise ValueError(f"{d} does not divide 6")
    return frobenius(z, tower, d) == z


def fp_coords_rank(ctx: FieldCtx, base_emb: Embedding, elems) -> int:
    """F_q-rank of elems in ctx, computed as (F_p-rank of {theta_d * x}) / e."""
    from .linalg import rank_mod_p

    e = base_emb.src.k
    thetas = [base_emb(base_emb.src.from_digits([int(i == d) for i in range(e)])) for d in range(e)]
    rows = [ctx.digits(ctx.mul(th, x)) for x in elems for th in thetas]
    return rank_mod_p(rows, ctx.p) // e


def moore_determinant(ctx: FieldCtx, q: int, elems) -> int:
    """det[x_i^(q^j)] over ctx; nonzero iff elems are F_q-independent."""
    from .linalg import det

    n = len(elems)
    mat = [[ctx.pow(x, q**j) for j in range(n)] for x in elems]
    return det(ctx, mat)


def find_normal_element(tower: TowerCtx) -> int:
    """First element of F_{q^3} (code order) whose conjugates form an F_q-basis."""
    K = tower.cubic
    for a in K.elements():
        conj = [a, K.pow(a, tower.q), K.pow(a, tower.q**2)]
        if fp_coords_rank(K, tower.base_to_cubic, conj) == 3:
            return a
    raise FieldError("no normal element in F_{q^3}: arithmetic is broken")  # pragma: no cover
