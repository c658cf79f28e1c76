"""Ternary forms of degree 1-3, projective points, and line restriction.

Monomial order for cubics is

    c0 x^3 + c1 y^3 + c2 z^3 + c3 x^2y + c4 xy^2 + c5 y^2z + c6 yz^2
    + c7 z^2x + c8 zx^2 + c9 xyz

and for conics b0 x^2 + b1 y^2 + b2 z^2 + b3 xy + b4 yz + b5 zx.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import ClassVar

from .gf import Embedding, FieldCtx, FieldError, FieldMismatch, TowerCtx
from .linalg import det

LINEAR_MONOMIALS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
CONIC_MONOMIALS = ((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (0, 1, 1), (1, 0, 1))
CUBIC_MONOMIALS = ((3, 0, 0), (0, 3, 0), (0, 0, 3), (2, 1, 0), (1, 2, 0),
                   (0, 2, 1), (0, 1, 2), (1, 0, 2), (2, 0, 1), (1, 1, 1))

BinaryCubic = tuple  # coefficients of s^3, s^2 t, s t^2, t^3


@dataclass(frozen=True)
class Form:
    field: FieldCtx
    coeffs: tuple

    MONOMIALS: ClassVar[tuple] = ()
    DEGREE: ClassVar[int] = 0

    def __post_init__(self):
        if len(self.coeffs) != len(self.MONOMIALS):
            raise ValueError(f"{type(self).__name__} needs {len(self.MONOMIALS)} coefficients")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def from_dict(cls, field: FieldCtx, terms: dict) -> "Form":
        extra = set(terms) - set(cls.MONOMIALS)
        if any(terms[m] for m in extra):
            raise ValueError(f"monomials {sorted(extra)} do not belong to degree {cls.DEGREE}")
        return cls(field, tuple(terms.get(m, 0) for m in cls.MONOMIALS))

    @classmethod
    def zero(cls, field: FieldCtx) -> "Form":
        return cls(field, (0,) * len(cls.MONOMIALS))

    @classmethod
    def monomial(cls, field: FieldCtx, exps) -> "Form":
        return cls.from_dict(field, {tuple(exps): 1})

    def as_dict(self) -> dict:
        return {m: c for m, c in zip(self.MONOMIALS, self.coeffs) if c}

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def leading(self) -> int:
        return next((c for c in self.coeffs if c), 0)

    def scale(self, c: int) -> "Form":
        K = self.field
        return type(self)(K, tuple(K.mul(c, x) for x in self.coeffs))

    def normalize(self) -> "Form":
        """Scale so that the first nonzero coefficient is 1 (zero form unchanged)."""
        lead = self.leading()
        if lead in (0, 1):
            return self
        return self.scale(self.field.inv(lead))

    def same_curve(self, other: "Form") -> bool:
        return type(self) is type(other) and self.normalize() == other.normalize()

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError("forms of different degree")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other):
        self._check(other)
        K = self.field
        return type(self)(K, tuple(K.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        K = self.field
        return type(self)(K, tuple(K.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        return multiply(self, other)

    def map_coeffs(self, fn, field: FieldCtx) -> "Form":
        return type(self)(field, tuple(fn(c) for c in self.coeffs))

    def lift(self, emb: Embedding) -> "Form":
        if emb.src != self.field:
            raise FieldMismatch(f"embedding source {emb.src!r} is not {self.field!r}")
        return self.map_coeffs(emb, emb.dst)

    def descend(self, emb: Embedding) -> "Form":
        """Inverse of lift; raises if some coefficient lies outside the subfield."""
        if emb.dst != self.field:
            raise FieldMismatch(f"embedding target {emb.dst!r} is not {self.field!r}")
        out = []
        for c in self.coeffs:
            a = emb.preimage(c)
            if a is None:
                raise FieldError("form is not defined over the subfield")
            out.append(a)
        return type(self)(emb.src, tuple(out))

    def __str__(self):
        return format_form(self)


class LinearForm(Form):
    MONOMIALS = LINEAR_MONOMIALS
    DEGREE = 1


class ConicForm(Form):
    MONOMIALS = CONIC_MONOMIALS
    DEGREE = 2


class CubicForm(Form):
    MONOMIALS = CUBIC_MONOMIALS
    DEGREE = 3


_BY_DEGREE = {1: LinearForm, 2: ConicForm, 3: CubicForm}


def form_class(degree: int):
    try:
        return _BY_DEGREE[degree]
    except KeyError:
        raise ValueError(f"only degrees 1..3 are supported, got {degree}") from None


def _poly_mul(K, a: dict, b: dict) -> dict:
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = (ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2])
            out[m] = K.add(out.get(m, 0), K.mul(ca, cb))
    return out


def multiply(*factors: Form) -> Form:
    """Product of forms with total degree <= 3 (line*conic, line*line*line, ...)."""
    K = factors[0].field
    for f in factors:
        if f.field != K:
            raise FieldMismatch(f"{f.field!r} vs {K!r}")
    terms = {(0, 0, 0): 1}
    for f in factors:
        terms = _poly_mul(K, terms, f.as_dict())
    degree = sum(f.DEGREE for f in factors)
    return form_class(degree).from_dict(K, terms)


def cubic(field: FieldCtx, coeffs) -> CubicForm:
    return CubicForm(field, tuple(coeffs))


# --- points -------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^2 stored with first nonzero coordinate equal to 1."""

    field: FieldCtx
    coords: tuple

    def __post_init__(self):
        K = self.field
        coords = tuple(self.coords)
        if len(coords) != 3 or not any(coords):
            raise ValueError("a projective point needs three coordinates, not all zero")
        lead = next(c for c in coords if c)
        if lead != 1:
            inv = K.inv(lead)
            coords = tuple(K.mul(inv, c) for c in coords)
        object.__setattr__(self, "coords", coords)

    def lift(self, emb: Embedding) -> "ProjectivePoint":
        return ProjectivePoint(emb.dst, tuple(emb(c) for c in self.coords))


def point(field: FieldCtx, *coords) -> ProjectivePoint:
    return ProjectivePoint(field, coords)


def evaluate(F: Form, P: ProjectivePoint) -> int:
    """F at the canonical representative of P.  Only zero/nonzero is intrinsic."""
    if F.field != P.field:
        raise FieldMismatch(f"form over {F.field!r}, point over {P.field!r}; lift one first")
    K = F.field
    x, y, z = P.coords
    total = 0
    for (a, b, c), coef in zip(F.MONOMIALS, F.coeffs):
        if coef:
            v = K.mul(coef, K.mul(K.pow(x, a), K.mul(K.pow(y, b), K.pow(z, c))))
            total = K.add(total, v)
    return total


def vanishes_at(F: Form, P: ProjectivePoint) -> bool:
    return evaluate(F, P) == 0


# --- substitution -----------------------------------------------------------------


def substitute(F: Form, M) -> Form:
    """F(M v): x, y, z are replaced by the linear forms given by the rows of M."""
    K = F.field
    if det(K, M) == 0:
        raise ValueError("substitution matrix is singular")
    rows = [{e: c for e, c in zip(LINEAR_MONOMIALS, row) if c} for row in M]
    out = {}
    for (a, b, c), coef in zip(F.MONOMIALS, F.coeffs):
        if not coef:
            continue
        term = {(0, 0, 0): coef}
        for row, n in zip(rows, (a, b, c)):
            for _ in range(n):
                term = _poly_mul(K, term, row)
        for m, v in term.items():
            out[m] = K.add(out.get(m, 0), v)
    return type(F).from_dict(K, out)


def mat_mul(K: FieldCtx, A, B):
    return [[_dot(K, row, [B[k][j] for k in range(len(B))]) for j in range(len(B[0]))] for row in A]


def _dot(K, u, v):
    acc = 0
    for a, b in zip(u, v):
        if a and b:
            acc = K.add(acc, K.mul(a, b))
    return acc


# --- lines ------------------------------------------------------------------------


def line_points(L: LinearForm):
    """Two points spanning the line L = 0, chosen from L's canonical shape."""
    K = L.field
    a0, a1, a2 = L.normalize().coeffs
    if a0:
        return (K.neg(a1), 1, 0), (K.neg(a2), 0, 1)
    if a1:
        return (1, 0, 0), (0, K.neg(a2), 1)
    if a2:
        return (1, 0, 0), (0, 1, 0)
    raise ValueError("zero linear form")


def restrict_to_line(F: Form, L: LinearForm) -> BinaryCubic:
    """Coefficients of F(sA + tB) for the spanning points (A, B) of L."""
    if F.field != L.field:
        raise FieldMismatch(f"{F.field!r} vs {L.field!r}")
    K = F.field
    A, B = line_points(L)
    # each coordinate as a binary linear form {(i, j): coeff} for s^i t^j
    lin = [{(1, 0): a, (0, 1): b} for a, b in zip(A, B)]
    out = [0] * (F.DEGREE + 1)
    powers = []
    for ell in lin:
        pw = [{(0, 0): 1}]
        for _ in range(F.DEGREE):
            pw.append(_bin_mul(K, pw[-1], ell))
        powers.append(pw)
    for (a, b, c), coef in zip(F.MONOMIALS, F.coeffs):
        if not coef:
            continue
        term = _bin_mul(K, _bin_mul(K, powers[0][a], powers[1][b]), powers[2][c])
        for (i, _j), v in term.items():
            out[F.DEGREE - i] = K.add(out[F.DEGREE - i], K.mul(coef, v))
    return tuple(out)


def _bin_mul(K, a, b):
    out = {}
    for (i, j), x in a.items():
        if not x:
            continue
        for (k, m), y in b.items():
            if y:
                key = (i + k, j + m)
                out[key] = K.add(out.get(key, 0), K.mul(x, y))
    return out


def divides(L: LinearForm, F: Form) -> bool:
    return not any(restrict_to_line(F, L))


def enumerate_lines(ctx: FieldCtx):
    """Every line of P^2(ctx) once: [1:b:c], then [0:1:c], then [0:0:1]."""
    n = ctx.size
    for b in range(n):
        for c in range(n):
            yield LinearForm(ctx, (1, b, c))
    for c in range(n):
        yield LinearForm(ctx, (0, 1, c))
    yield LinearForm(ctx, (0, 0, 1))


def line_count(ctx: FieldCtx) -> int:
    n = ctx.size
    return n * n + n + 1


def line_from_index(ctx: FieldCtx, idx: int) -> LinearForm:
    n = ctx.size
    if idx < n * n:
        return LinearForm(ctx, (1, idx // n, idx % n))
    if idx < n * n + n:
        return LinearForm(ctx, (0, 1, idx - n * n))
    if idx == n * n + n:
        return LinearForm(ctx, (0, 0, 1))
    raise IndexError(idx)


def line_index(L: LinearForm) -> int:
    a0, a1, a2 = L.normalize().coeffs
    n = L.field.size
    if a0:
        return a1 * n + a2
    if a1:
        return n * n + a2
    return n * n + n


def cross(K: FieldCtx, u, v):
    x1, y1, z1 = u
    x2, y2, z2 = v
    return (K.sub(K.mul(y1, z2), K.mul(z1, y2)),
            K.sub(K.mul(z1, x2), K.mul(x1, z2)),
            K.sub(K.mul(x1, y2), K.mul(y1, x2)))


# --- Frobenius ------------------------------------------------------------------


def frobenius_form(F: Form, tower: TowerCtx, i: int = 1) -> Form:
    """Raise every coefficient to the q^i-th power."""
    K = F.field
    n = tower.q**i
    return F.map_coeffs(lambda c: K.pow(c, n), K)


def frobenius_point(P: ProjectivePoint, tower: TowerCtx, i: int = 1) -> ProjectivePoint:
    K = P.field
    n = tower.q**i
    return ProjectivePoint(K, tuple(K.pow(c, n) for c in P.coords))


def definition_degree(F: Form, tower: TowerCtx) -> int:
    """Smallest d with F^(sigma^d) = F up to scalar (F over a tower field)."""
    n = F.field.k // tower.e
    G = F.normalize()
    for d in range(1, n + 1):
        if n % d == 0 and frobenius_form(G, tower, d) == G:
            return d
    return n  # pragma: no cover


# --- text and positional codecs ------------------------------------------------

_VARS = "xyz"


def format_coeff(K: FieldCtx, c: int) -> str:
    if K.k == 1 or c < K.p:
        return str(c)
    terms = []
    for i, d in reversed(list(enumerate(K.digits(c)))):
        if not d:
            continue
        mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
        if not mono:
            terms.append(str(d))
        elif d == 1:
            terms.append(mono)
        else:
            terms.append(f"{d}*{mono}")
    return "(" + "+".join(terms) + ")"


def format_monomial(exps) -> str:
    parts = []
    for v, n in zip(_VARS, exps):
        if n == 1:
            parts.append(v)
        elif n > 1:
            parts.append(f"{v}^{n}")
    return "*".join(parts)


def format_form(F: Form) -> str:
    terms = []
    for m, c in zip(F.MONOMIALS, F.coeffs):
        if not c:
            continue
        mono = format_monomial(m)
        if c == 1:
            terms.append(mono)
        else:
            terms.append(f"{format_coeff(F.field, c)}*{mono}")
    return " + ".join(terms) if terms else "0"


_TERM = re.compile(r"^(?P<coef>\d+|\([^()]*\))?\*?(?P<mono>(?:[xyz](?:\^\d+)?\*?)*)$")


def _parse_coeff(K: FieldCtx, s: str) -> int:
    if s.startswith("("):
        digits = [0] * K.k
        body = s[1:-1].replace(" ", "")
        for sign, term in _split_terms(body):
            m = re.fullmatch(r"(\d+)?\*?(g(?:\^(\d+))?)?", term)
            if not m or not (m.group(1) or m.group(2)):
                raise ValueError(f"bad coefficient term {term!r}")
            coef = int(m.group(1)) if m.group(1) else 1
            power = 0 if not m.group(2) else int(m.group(3) or 1)
            if power >= K.k:
                raise ValueError(f"generator power {power} too large for {K!r}")
            digits[power] += sign * coef
        return K.from_digits(digits)
    return K.from_int(int(s))


def _split_terms(s: str):
    """Split 'a+b-c' at top-level signs into (sign, term) pairs."""
    out = []
    depth = 0
    cur = ""
    sign = 1
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0:
            if cur:
                out.append((sign, cur))
            elif ch == "-":
                sign = -sign
                continue
            sign = 1 if ch == "+" else -1
            cur = ""
            continue
        cur += ch
    if cur:
        out.append((sign, cur))
    return out


def parse_form(s: str, field: FieldCtx, degree: int | None = None) -> Form:
    """Parse the table syntax, e.g. ``"x^2 y + x^2*z - 2y^2z"`` or ``"(g+1)*x^3"``.

    Integer coefficients are reduced into the prime field.  When ``degree``
    is omitted it is read off the first monomial.
    """
    body = re.sub(r"\s+", "", s)
    if body in ("", "0"):
        if degree is None:
            raise ValueError("cannot infer the degree of the zero form")
        return form_class(degree).zero(field)
    terms = {}
    for sign, term in _split_terms(body):
        m = _TERM.match(term)
        if not m or not m.group("mono"):
            raise ValueError(f"cannot parse term {term!r}")
        exps = [0, 0, 0]
        for v, n in re.findall(r"([xyz])(?:\^(\d+))?", m.group("mono")):
            exps[_VARS.index(v)] += int(n) if n else 1
        exps = tuple(exps)
        d = sum(exps)
        if degree is None:
            degree = d
        if d != degree:
            raise ValueError(f"term {term!r} has degree {d}, expected {degree}")
        coef = _parse_coeff(field, m.group("coef")) if m.group("coef") else 1
        if sign < 0:
            coef = field.neg(coef)
        terms[exps] = field.add(terms.get(exps, 0), coef)
    return form_class(degree).from_dict(field, terms)


def to_positional(F: Form) -> list[str]:
    return [F.field.serialize(c) for c in F.coeffs]


def from_positional(items, field: FieldCtx, degree: int = 3) -> Form:
    return form_class(degree)(field, tuple(field.deserialize(s) for s in items))


def form_to_json(F: Form) -> dict:
    return {"text": format_form(F), "positional": to_positional(F)}
