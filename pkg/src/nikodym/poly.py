"""Sparse multivariate polynomials over a finite field.

Monomials are exponent tuples; a polynomial maps exponent tuples to nonzero
coefficients (canonical form, so dict equality is polynomial equality).
Hasse derivatives take the place of ordinary derivatives: they are the
coefficients of f(x+y) as a polynomial in y, which is the notion that
behaves correctly in small characteristic.  The per-coordinate binomial
coefficients are reduced mod p with Lucas' theorem; a naive factorial
formula would be wrong whenever p divides an intermediate factorial.

Multiplicity of f at a point is the least total order of a Hasse
derivative that does not vanish there (infinity for the zero polynomial,
kept as a distinguished non-integer value).  Restriction substitutes a
flat's parameterization; multiplicity along a line is multiplicity of the
univariate restriction at the parameter of the point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from . import linalg
from .field import FieldCtx, FieldElem

INFINITY = float("inf")

Exp = tuple[int, ...]
Point = tuple[FieldElem, ...]


def exp_degree(e: Exp) -> int:
    return sum(e)


def grlex_key(e: Exp):
    return (sum(e), e)


def compositions(total: int, parts: int) -> Iterator[Exp]:
    """All exponent tuples of the given length summing to total."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p via Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    r = 1
    while k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        r = r * math.comb(nd, kd) % p
        n //= p
        k //= p
    return r


class MultiPoly:
    """Immutable sparse polynomial in `nvars` variables over a FieldCtx."""

    __slots__ = ("ctx", "nvars", "terms", "_hash")

    def __init__(self, ctx: FieldCtx, nvars: int, terms: Mapping[Exp, FieldElem] | None = None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        clean: dict[Exp, FieldElem] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent tuple {e} for {nvars} variables")
            if not isinstance(c, FieldElem) or c.ctx != ctx:
                raise ValueError("coefficient from a different field context")
            if not c.is_zero():
                clean[e] = c
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # constructors
    @classmethod
    def zero(cls, ctx: FieldCtx, nvars: int) -> "MultiPoly":
        return cls(ctx, nvars)

    @classmethod
    def constant(cls, ctx: FieldCtx, nvars: int, c: FieldElem) -> "MultiPoly":
        return cls(ctx, nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, ctx: FieldCtx, nvars: int, exps: Exp, c: FieldElem) -> "MultiPoly":
        return cls(ctx, nvars, {tuple(exps): c})

    @classmethod
    def variable(cls, ctx: FieldCtx, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise ValueError("variable index out of range")
        e = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(ctx, nvars, {e: ctx.one})

    @classmethod
    def _from_acc(cls, ctx, nvars, acc: dict[Exp, FieldElem]) -> "MultiPoly":
        return cls(ctx, nvars, acc)

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coeff(self, exps: Exp) -> FieldElem:
        return self.terms.get(tuple(exps), self.ctx.zero)

    def _check(self, other: "MultiPoly") -> None:
        if not isinstance(other, MultiPoly):
            raise TypeError("expected MultiPoly")
        if other.ctx != self.ctx or other.nvars != self.nvars:
            raise ValueError("polynomials from different rings")

    # ring operations
    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            s = acc.get(e)
            acc[e] = c if s is None else s + c
        return MultiPoly(self.ctx, self.nvars, acc)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.ctx, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ValueError("scalar from a different field context")
            return MultiPoly(self.ctx, self.nvars,
                             {e: c * other for e, c in self.terms.items()})
        self._check(other)
        acc: dict[Exp, FieldElem] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = acc.get(e)
                acc[e] = c if s is None else s + c
        return MultiPoly(self.ctx, self.nvars, acc)

    def __rmul__(self, other):
        if isinstance(other, FieldElem):
            return self * other
        return NotImplemented

    def __pow__(self, e: int) -> "MultiPoly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative int")
        result = MultiPoly.constant(self.ctx, self.nvars, self.ctx.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, MultiPoly) and self.ctx == other.ctx
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self) -> int:
        if self._hash is None:
            h = hash((self.ctx, self.nvars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly({self.ctx!r}, {format_poly(self)!r})"

    def eval(self, point: Point) -> FieldElem:
        if len(point) != self.nvars:
            raise ValueError(f"expected a point of dimension {self.nvars}")
        for c in point:
            if not isinstance(c, FieldElem) or c.ctx != self.ctx:
                raise ValueError("point coordinate from a different field context")
        acc = self.ctx.zero
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x**k
            acc = acc + t
        return acc

    def substitute(self, args: Sequence["MultiPoly"]) -> "MultiPoly":
        """Compose: plug args[i] in for variable i.  Args share a target ring."""
        if len(args) != self.nvars:
            raise ValueError("need one replacement polynomial per variable")
        ctx, out_nvars = args[0].ctx, args[0].nvars
        for g in args:
            if g.ctx != ctx or g.nvars != out_nvars:
                raise ValueError("replacement polynomials from different rings")
        if ctx != self.ctx:
            raise ValueError("replacement ring has a different field context")
        powers: list[list[MultiPoly]] = [[MultiPoly.constant(ctx, out_nvars, ctx.one)]
                                         for _ in args]

        def power(i: int, k: int) -> MultiPoly:
            lst = powers[i]
            while len(lst) <= k:
                lst.append(lst[-1] * args[i])
            return lst[k]

        out = MultiPoly.zero(ctx, out_nvars)
        for e, c in sorted(self.terms.items(), key=lambda t: grlex_key(t[0])):
            t = MultiPoly.constant(ctx, out_nvars, c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            out = out + t
        return out


# -- Hasse derivatives and multiplicities --

def hasse(f: MultiPoly, alpha: Exp) -> MultiPoly:
    """The Hasse derivative of order alpha: the y^alpha coefficient of f(x+y)."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != f.nvars or any(a < 0 for a in alpha):
        raise ValueError("derivative order must be a non-negative exponent tuple")
    p = f.ctx.p
    acc: dict[Exp, FieldElem] = {}
    for e, c in f.terms.items():
        if any(b < a for b, a in zip(e, alpha)):
            continue
        m = 1
        for b, a in zip(e, alpha):
            m = m * binom_mod(b, a, p) % p
            if m == 0:
                break
        if m == 0:
            continue
        acc[tuple(b - a for b, a in zip(e, alpha))] = c * f.ctx.scalar(m)
    return MultiPoly(f.ctx, f.nvars, acc)


def _hasse_eval(f: MultiPoly, alpha: Exp, point: Point) -> FieldElem:
    # value of (hasse derivative of order alpha) at point, without building the poly
    ctx = f.ctx
    p = ctx.p
    acc = ctx.zero
    for e, c in f.terms.items():
        if any(b < a for b, a in zip(e, alpha)):
            continue
        m = 1
        for b, a in zip(e, alpha):
            m = m * binom_mod(b, a, p) % p
            if m == 0:
                break
        if m == 0:
            continue
        t = c * ctx.scalar(m)
        for x, b, a in zip(point, e, alpha):
            if b - a:
                t = t * x ** (b - a)
        acc = acc + t
    return acc


def mult_at(f: MultiPoly, point: Point):
    """Multiplicity of f at a point: least order of a non-vanishing Hasse
    derivative.  INFINITY exactly for the zero polynomial."""
    if len(point) != f.nvars:
        raise ValueError(f"expected a point of dimension {f.nvars}")
    if f.is_zero():
        return INFINITY
    for s in range(f.degree() + 1):
        for alpha in compositions(s, f.nvars):
            if not _hasse_eval(f, alpha, point).is_zero():
                return s
    raise AssertionError("nonzero polynomial with all derivatives vanishing")


# -- flats, lines, affine maps --

@dataclass(frozen=True)
class Flat:
    """An affine subspace a + span(b_1, ..., b_r), dirs linearly independent."""

    ctx: FieldCtx
    d: int
    base: Point
    dirs: tuple[Point, ...]

    def __post_init__(self):
        if len(self.base) != self.d:
            raise ValueError("base point has wrong dimension")
        if not self.dirs or len(self.dirs) > self.d:
            raise ValueError("need between 1 and d direction vectors")
        for v in self.dirs:
            if len(v) != self.d:
                raise ValueError("direction vector has wrong dimension")
        for coord in self.base + tuple(c for v in self.dirs for c in v):
            if coord.ctx != self.ctx:
                raise ValueError("coordinate from a different field context")
        if not linalg.is_independent(self.ctx, [list(v) for v in self.dirs]):
            raise ValueError("direction vectors are linearly dependent")

    @property
    def r(self) -> int:
        return len(self.dirs)

    def point_at(self, ts: Point) -> Point:
        if len(ts) != self.r:
            raise ValueError("wrong number of parameters")
        out = list(self.base)
        for t, v in zip(ts, self.dirs):
            out = [a + t * b for a, b in zip(out, v)]
        return tuple(out)


@dataclass(frozen=True)
class Line:
    """A line in canonical form.

    The direction's first nonzero coordinate is 1, and the base is the
    lexicographically least point on the line (equivalently: its pivot
    coordinate is zero).  Two Line values describe the same point set iff
    they are equal, which makes dedup and counting exact.
    """

    ctx: FieldCtx
    d: int
    base: Point
    direction: Point

    def __post_init__(self):
        if len(self.base) != self.d or len(self.direction) != self.d:
            raise ValueError("base or direction has wrong dimension")
        for c in self.base + self.direction:
            if c.ctx != self.ctx:
                raise ValueError("coordinate from a different field context")
        piv = self._pivot()
        if self.direction[piv] != self.ctx.one:
            raise ValueError("direction not in canonical form (pivot must be 1)")
        if not self.base[piv].is_zero():
            raise ValueError("base not in canonical form (pivot coordinate must be 0)")

    def _pivot(self) -> int:
        for i, c in enumerate(self.direction):
            if not c.is_zero():
                return i
        raise ValueError("direction is zero")

    @property
    def pivot(self) -> int:
        return self._pivot()

    @classmethod
    def make(cls, ctx: FieldCtx, point: Point, direction: Point) -> "Line":
        """Canonicalize the line through `point` with direction `direction`."""
        point, direction = tuple(point), tuple(direction)
        piv = None
        for i, c in enumerate(direction):
            if not c.is_zero():
                piv = i
                break
        if piv is None:
            raise ValueError("direction is zero")
        inv = direction[piv].inverse()
        direction = tuple(c * inv for c in direction)
        t = -point[piv]
        base = tuple(a + t * b for a, b in zip(point, direction))
        return cls(ctx, len(point), base, direction)

    @classmethod
    def through(cls, ctx: FieldCtx, p: Point, q: Point) -> "Line":
        direction = tuple(b - a for a, b in zip(p, q))
        return cls.make(ctx, p, direction)

    def point_at(self, t: FieldElem) -> Point:
        return tuple(a + t * b for a, b in zip(self.base, self.direction))

    def param_of(self, p: Point) -> FieldElem | None:
        """Parameter t with base + t*direction = p, or None if p is off the line."""
        if len(p) != self.d:
            return None
        t = p[self.pivot]
        return t if self.point_at(t) == tuple(p) else None

    def contains(self, p: Point) -> bool:
        return self.param_of(p) is not None

    def points(self) -> Iterator[Point]:
        for t in self.ctx.elements():
            yield self.point_at(t)

    def as_flat(self) -> Flat:
        return Flat(self.ctx, self.d, self.base, (self.direction,))

    def sort_key(self):
        return (tuple(c.coeffs for c in self.base),
                tuple(c.coeffs for c in self.direction))


@dataclass(frozen=True)
class AffineMap:
    """x -> A x + b with A invertible; singular matrices are rejected."""

    ctx: FieldCtx
    matrix: tuple[Point, ...]
    offset: Point

    def __post_init__(self):
        d = len(self.offset)
        if len(self.matrix) != d or any(len(r) != d for r in self.matrix):
            raise ValueError("matrix shape does not match offset dimension")
        if linalg.rank(self.ctx, [list(r) for r in self.matrix], d) != d:
            raise ValueError("affine map is singular")

    @property
    def d(self) -> int:
        return len(self.offset)

    @classmethod
    def identity(cls, ctx: FieldCtx, d: int) -> "AffineMap":
        rows = tuple(tuple(ctx.one if i == j else ctx.zero for j in range(d))
                     for i in range(d))
        return cls(ctx, rows, (ctx.zero,) * d)

    @classmethod
    def translation(cls, ctx: FieldCtx, offset: Point) -> "AffineMap":
        ident = cls.identity(ctx, len(offset))
        return cls(ctx, ident.matrix, tuple(offset))

    def apply(self, p: Point) -> Point:
        return tuple(b + sum_dot(row, p) for row, b in zip(self.matrix, self.offset))

    def inverse(self) -> "AffineMap":
        inv = linalg.inverse(self.ctx, [list(r) for r in self.matrix])
        inv_rows = tuple(tuple(r) for r in inv)
        neg_off = tuple(-c for c in sum_rows(inv_rows, self.offset))
        return AffineMap(self.ctx, inv_rows, neg_off)


def sum_dot(row: Point, p: Point) -> FieldElem:
    acc = None
    for a, b in zip(row, p):
        t = a * b
        acc = t if acc is None else acc + t
    return acc


def sum_rows(rows: tuple[Point, ...], v: Point) -> Point:
    return tuple(sum_dot(r, v) for r in rows)


def restrict(f: MultiPoly, flat: Flat) -> MultiPoly:
    """f composed with the flat's parameterization, in r parameter variables."""
    if flat.ctx != f.ctx or flat.d != f.nvars:
        raise ValueError("flat does not match the polynomial's ambient space")
    r = flat.r
    args = []
    for i in range(f.nvars):
        terms: dict[Exp, FieldElem] = {(0,) * r: flat.base[i]}
        for j in range(r):
            e = tuple(1 if jj == j else 0 for jj in range(r))
            terms[e] = flat.dirs[j][i]
        args.append(MultiPoly(f.ctx, r, terms))
    return f.substitute(args)


def mult_on_line(f: MultiPoly, line: Line, p: Point):
    """Multiplicity of the univariate restriction of f to the line at p."""
    t = line.param_of(p)
    if t is None:
        raise ValueError("point is not on the line")
    g = restrict(f, line.as_flat())
    return mult_at(g, (t,))


def apply_affine(f: MultiPoly, T: AffineMap) -> MultiPoly:
    """The composite f(T(x)); degree and multiplicities transport along T."""
    if T.ctx != f.ctx or T.d != f.nvars:
        raise ValueError("map does not match the polynomial's ambient space")
    d = f.nvars
    args = []
    for i in range(d):
        terms: dict[Exp, FieldElem] = {(0,) * d: T.offset[i]}
        for j in range(d):
            e = tuple(1 if jj == j else 0 for jj in range(d))
            terms[e] = T.matrix[i][j]
        args.append(MultiPoly(f.ctx, d, terms))
    return f.substitute(args)


# -- text format: terms "c*x1^e1*...*xd^ed" joined by '+', coefficients
#    rendered by the field context; the zero polynomial prints as "0" --

_FACTOR_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def format_poly(f: MultiPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e in sorted(f.terms, key=grlex_key, reverse=True):
        c = f.terms[e]
        factors = [f.ctx.render(c)]
        for i, k in enumerate(e):
            if k == 1:
                factors.append(f"x{i + 1}")
            elif k > 1:
                factors.append(f"x{i + 1}^{k}")
        parts.append("*".join(factors))
    return "+".join(parts)


def parse_poly(s: str, ctx: FieldCtx, nvars: int) -> MultiPoly:
    s = s.strip().replace(" ", "")
    if s == "0":
        return MultiPoly.zero(ctx, nvars)
    if not s:
        raise ValueError("empty polynomial string")
    acc: dict[Exp, FieldElem] = {}
    for part in s.split("+"):
        tokens = part.split("*")
        coeff = ctx.parse(tokens[0])
        exps = [0] * nvars
        for tok in tokens[1:]:
            m = _FACTOR_RE.match(tok)
            if not m:
                raise ValueError(f"malformed factor {tok!r}")
            i = int(m.group(1)) - 1
            if not 0 <= i < nvars:
                raise ValueError(f"variable index out of range in {tok!r}")
            exps[i] += int(m.group(2) or 1)
        e = tuple(exps)
        prev = acc.get(e)
        acc[e] = coeff if prev is None else prev + coeff
    return MultiPoly(ctx, nvars, acc)
