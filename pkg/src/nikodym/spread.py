"""Rank certificates of algebraic spreadness for point sets and line families.

A point set on an r-flat is probed at a multiplicity parameter n and a
degree bound D by the evaluation matrix whose columns are the monomials of
total degree below D (in flat-local coordinates) and whose rows are pairs
(derivative order below n, point): the entry is that Hasse derivative of
the column's monomial evaluated at the row's point.  Full column rank says
exactly that no nonzero polynomial of degree below D has multiplicity at
least n at every point; when rank falls short, a kernel vector rebuilds a
concrete counterexample polynomial that can be re-verified independently.

Certificates are statements about one fixed (n, D) only.  The asymptotic
notion (ratios D/n approaching k^(1/r)) is not decidable by a finite
computation, so searches report the exact maximal D per n and leave the
trend to the caller.
"""

from __future__ import annotations

import itertools
import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import CapExceededError, SearchBudgetError
from .field import DEFAULT_MAX_ORDER, FieldCtx, FieldElem, embed, make_field
from .intervals import RatInterval, nth_root
from .poly import Exp, Flat, Line, MultiPoly, Point, binom_mod, grlex_key

DEFAULT_MATRIX_CAP = 4_000_000


@dataclass(frozen=True)
class SpreadInstance:
    """Distinct points in flat-local coordinates on an r-dimensional flat."""

    ctx: FieldCtx
    r: int
    points: tuple[Point, ...]
    flat: Flat | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("flat dimension must be at least 1")
        if not self.points:
            raise ValueError("need at least one point")
        for p in self.points:
            if len(p) != self.r:
                raise ValueError("point has wrong dimension")
            for c in p:
                if c.ctx != self.ctx:
                    raise ValueError("coordinate from a different field context")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be pairwise distinct")

    @property
    def k(self) -> int:
        return len(self.points)

    def embedded(self, m: int, max_order: int = DEFAULT_MAX_ORDER) -> "SpreadInstance":
        """The same points coordinate-wise embedded into GF(q^m)."""
        pts = tuple(tuple(embed(c, m, max_order) for c in p) for p in self.points)
        ctx = pts[0][0].ctx if self.r else self.ctx
        return SpreadInstance(ctx, self.r, pts, None, self.seed)


@dataclass(frozen=True)
class SpreadCertificate:
    """Exact rank facts for one (n, D) probe; never an asymptotic claim."""

    k: int
    r: int
    n: int
    D: int
    rank: int
    rows: int
    cols: int
    full_column_rank: bool
    ratio: Fraction
    seed: int | None = None

    def to_dict(self) -> dict:
        out = {
            "k": self.k, "r": self.r, "n": self.n, "D": self.D,
            "rank": self.rank, "rows": self.rows, "columns": self.cols,
            "full_column_rank": self.full_column_rank,
            "ratio_num": self.ratio.numerator, "ratio_den": self.ratio.denominator,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def monomials_below(D: int, r: int) -> list[Exp]:
    """Exponent tuples in r variables of total degree < D, graded lex order."""
    out: list[Exp] = []
    for s in range(max(0, D)):
        out.extend(_compositions(s, r))
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def count_monomials_below(D: int, r: int) -> int:
    return math.comb(D + r - 1, r) if D > 0 else 0


def build_Mn(instance: SpreadInstance, n: int, D: int,
             matrix_cap: int = DEFAULT_MATRIX_CAP) -> list[list[FieldElem]]:
    """Rows: (derivative order below n, point); columns: monomials below D."""
    if n < 1 or D < 1:
        raise ValueError("need n >= 1 and D >= 1")
    ctx = instance.ctx
    cols = monomials_below(D, instance.r)
    orders = monomials_below(n, instance.r)
    nrows = len(orders) * instance.k
    if nrows * len(cols) > matrix_cap:
        raise CapExceededError(
            f"matrix would have {nrows}x{len(cols)} entries, over cap {matrix_cap}")
    p = ctx.p
    rows: list[list[FieldElem]] = []
    for pt in instance.points:
        for beta in orders:
            row = []
            for alpha in cols:
                if any(a < b for a, b in zip(alpha, beta)):
                    row.append(ctx.zero)
                    continue
                m = 1
                for a, b in zip(alpha, beta):
                    m = m * binom_mod(a, b, p) % p
                    if m == 0:
                        break
                if m == 0:
                    row.append(ctx.zero)
                    continue
                v = ctx.scalar(m)
                for x, a, b in zip(pt, alpha, beta):
                    if a - b:
                        v = v * x ** (a - b)
                row.append(v)
            rows.append(row)
    return rows


def is_spread_at(instance: SpreadInstance, n: int, D: int,
                 matrix_cap: int = DEFAULT_MATRIX_CAP) -> SpreadCertificate:
    """Exact-rank certificate at fixed (n, D)."""
    rows = build_Mn(instance, n, D, matrix_cap)
    cols = count_monomials_below(D, instance.r)
    rk = linalg.rank(instance.ctx, rows, cols)
    return SpreadCertificate(
        k=instance.k, r=instance.r, n=n, D=D, rank=rk,
        rows=len(rows), cols=cols, full_column_rank=(rk == cols),
        ratio=Fraction(D, n), seed=instance.seed)


def kernel_witness(instance: SpreadInstance, n: int, D: int,
                   matrix_cap: int = DEFAULT_MATRIX_CAP) -> MultiPoly | None:
    """A nonzero polynomial of degree < D with multiplicity >= n at every
    point, reconstructed from the matrix kernel; None iff full column rank."""
    rows = build_Mn(instance, n, D, matrix_cap)
    cols = monomials_below(D, instance.r)
    basis = linalg.kernel_basis(instance.ctx, rows, len(cols))
    if not basis:
        return None
    v = basis[0]
    return MultiPoly(instance.ctx, instance.r,
                     {e: c for e, c in zip(cols, v) if not c.is_zero()})


@dataclass(frozen=True)
class DegreeSearch:
    """The largest D with full column rank at this n, plus the exact ratio."""

    n: int
    d_star: int
    ratio: Fraction
    k_root: RatInterval

    def to_dict(self) -> dict:
        return {
            "n": self.n, "d_star": self.d_star,
            "ratio_num": self.ratio.numerator, "ratio_den": self.ratio.denominator,
            "k_root_lo": {"num": self.k_root.lo.numerator, "den": self.k_root.lo.denominator},
            "k_root_hi": {"num": self.k_root.hi.numerator, "den": self.k_root.hi.denominator},
        }


def max_forced_degree(instance: SpreadInstance, n: int,
                      matrix_cap: int = DEFAULT_MATRIX_CAP) -> DegreeSearch:
    """Binary search for the largest D with full column rank.

    Monotone: the monomials below D-1 are a subset of those below D, so a
    dependency at D-1 persists at D; full rank at D therefore implies full
    rank at every smaller bound, which makes the rank test a valid binary
    search predicate.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    nrows = instance.k * count_monomials_below(n, instance.r)
    hi = 1
    while count_monomials_below(hi + 1, instance.r) <= nrows:
        hi += 1
    lo = 1
    if not is_spread_at(instance, n, 1, matrix_cap).full_column_rank:
        raise AssertionError("the constant-only probe can never fail")
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if is_spread_at(instance, n, mid, matrix_cap).full_column_rank:
            lo = mid
        else:
            hi = mid - 1
    return DegreeSearch(n=n, d_star=lo, ratio=Fraction(lo, n),
                        k_root=nth_root(instance.k, instance.r))


def grid_instance(ctx: FieldCtx, axes: list[list[FieldElem]],
                  flat: Flat | None = None) -> SpreadInstance:
    """The product point set A_1 x ... x A_r; all axes must share one size."""
    if not axes:
        raise ValueError("need at least one axis")
    sizes = {len(a) for a in axes}
    if len(sizes) != 1 or 0 in sizes:
        raise ValueError("axes must be non-empty and of equal size")
    for a in axes:
        if len(set(a)) != len(a):
            raise ValueError("axis elements must be distinct")
        for c in a:
            if c.ctx != ctx:
                raise ValueError("axis element from a different field context")
    pts = tuple(itertools.product(*axes))
    return SpreadInstance(ctx, len(axes), pts, flat)


def canonical_grid(ctx: FieldCtx, a: int, r: int) -> SpreadInstance:
    """The grid on the first a field elements in canonical order, r times."""
    if a < 1 or a > ctx.order:
        raise ValueError("axis size out of range for this field")
    axis = [ctx.element_at(i) for i in range(a)]
    return grid_instance(ctx, [list(axis) for _ in range(r)])


def random_instance(ctx: FieldCtx, k: int, r: int, seed: int) -> SpreadInstance:
    """k distinct seeded-random points in r local coordinates.

    Heuristic evidence only: a sample says nothing certifiable about
    generic point sets, and downstream output marks it as seeded sampling.
    """
    if k < 1 or r < 1:
        raise ValueError("need k >= 1 and r >= 1")
    space = ctx.order**r
    if k > space:
        raise ValueError(f"cannot place {k} distinct points in a space of {space}")
    if 2 * k > space:
        warnings.warn(f"field is small relative to k={k}; sample is cramped")
    rng = random.Random(seed)
    pts: list[Point] = []
    seen = set()
    attempts = 0
    while len(pts) < k:
        attempts += 1
        if attempts > 1000 * k:
            raise SearchBudgetError("could not draw enough distinct points")
        p = tuple(ctx.element_at(rng.randrange(ctx.order)) for _ in range(r))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    return SpreadInstance(ctx, r, tuple(pts), None, seed)


# -- hyperplanes and line families --

@dataclass(frozen=True)
class Hyperplane:
    """The set {x : normal . x = const} with a nonzero normal vector."""

    ctx: FieldCtx
    normal: Point
    const: FieldElem

    def __post_init__(self):
        if all(c.is_zero() for c in self.normal):
            raise ValueError("hyperplane normal is zero")
        for c in self.normal + (self.const,):
            if c.ctx != self.ctx:
                raise ValueError("coordinate from a different field context")

    @property
    def d(self) -> int:
        return len(self.normal)

    @property
    def pivot(self) -> int:
        for i, c in enumerate(self.normal):
            if not c.is_zero():
                return i
        raise AssertionError

    def contains(self, p: Point) -> bool:
        acc = self.ctx.zero
        for a, x in zip(self.normal, p):
            acc = acc + a * x
        return acc == self.const

    def as_flat(self) -> Flat:
        """Canonical parameterization with one direction per non-pivot axis."""
        j = self.pivot
        inv = self.normal[j].inverse()
        base = tuple(self.const * inv if i == j else self.ctx.zero
                     for i in range(self.d))
        dirs = []
        for i in range(self.d):
            if i == j:
                continue
            v = [self.ctx.zero] * self.d
            v[i] = self.ctx.one
            v[j] = -self.normal[i] * inv
            dirs.append(tuple(v))
        return Flat(self.ctx, self.d, base, tuple(dirs))

    def local_coords(self, p: Point) -> Point:
        """Coordinates of a point of the hyperplane in the canonical flat."""
        if not self.contains(p):
            raise ValueError("point is not on the hyperplane")
        j = self.pivot
        return tuple(c for i, c in enumerate(p) if i != j)


@dataclass(frozen=True)
class LineFamily:
    """Distinct canonical lines, optionally with a witness hyperplane that
    meets them in pairwise distinct points."""

    ctx: FieldCtx
    d: int
    lines: tuple[Line, ...]
    hyperplane: Hyperplane | None = None

    def __post_init__(self):
        for ln in self.lines:
            if ln.ctx != self.ctx or ln.d != self.d:
                raise ValueError("line from a different space")
        if len(set(self.lines)) != len(self.lines):
            raise ValueError("lines must be pairwise distinct")
        if self.hyperplane is not None and self.lines:
            lines_to_points(self, self.hyperplane)  # raises if invalid

    def __len__(self) -> int:
        return len(self.lines)

    def embedded(self, m: int, max_order: int = DEFAULT_MAX_ORDER) -> "LineFamily":
        lines = tuple(embed_line(ln, m, max_order) for ln in self.lines)
        ctx = lines[0].ctx if lines else make_field(self.ctx.p, self.ctx.k * m, max_order)
        return LineFamily(ctx, self.d, lines)


def embed_line(line: Line, m: int, max_order: int = DEFAULT_MAX_ORDER) -> Line:
    """The extension-field line with the embedded base and direction."""
    base = tuple(embed(c, m, max_order) for c in line.base)
    direction = tuple(embed(c, m, max_order) for c in line.direction)
    ctx = base[0].ctx
    return Line.make(ctx, base, direction)


def lines_to_points(family: LineFamily, H: Hyperplane,
                    max_order: int = DEFAULT_MAX_ORDER) -> SpreadInstance:
    """Intersection points of the family with H, in H-local coordinates.

    Raises if some line is parallel to H or two lines meet H at one point.
    If H lives over an extension of the family's field, the lines are
    embedded first.
    """
    if not family.lines:
        raise ValueError("family has no lines to intersect")
    lines = family.lines
    if H.ctx != family.ctx:
        if H.ctx.p != family.ctx.p or H.ctx.k % family.ctx.k != 0:
            raise ValueError("hyperplane field is not an extension of the family field")
        m = H.ctx.k // family.ctx.k
        lines = tuple(embed_line(ln, m, max_order) for ln in lines)
    ctx = H.ctx
    pts: list[Point] = []
    for ln in lines:
        a_dot_dir = ctx.zero
        a_dot_base = ctx.zero
        for a, b, v in zip(H.normal, ln.base, ln.direction):
            a_dot_dir = a_dot_dir + a * v
            a_dot_base = a_dot_base + a * b
        if a_dot_dir.is_zero():
            raise ValueError("a line is parallel to the hyperplane")
        t = (H.const - a_dot_base) / a_dot_dir
        pts.append(H.local_coords(ln.point_at(t)))
    if len(set(pts)) != len(pts):
        raise ValueError("two lines meet the hyperplane at the same point")
    return SpreadInstance(ctx, H.d - 1, tuple(pts), H.as_flat())


def find_avoiding_hyperplane(family: LineFamily, m: int, seed: int = 0,
                             budget: int = 1000,
                             max_order: int = DEFAULT_MAX_ORDER) -> Hyperplane:
    """Seeded random search for a hyperplane over GF(q^m) that misses every
    point of the base space and meets all family lines at distinct points.

    Raises SearchBudgetError when the budget runs out (raise m and retry);
    a failure is reported, never papered over.
    """
    if m < 1:
        raise ValueError("extension degree must be at least 1")
    base_ctx = family.ctx
    ext = make_field(base_ctx.p, base_ctx.k * m, max_order)
    d = family.d
    if base_ctx.order**d > max_order:
        raise CapExceededError("base point enumeration exceeds the cap")
    base_points = [tuple(embed(c, m, max_order) for c in pt)
                   for pt in itertools.product(base_ctx.elements(), repeat=d)]
    lines = tuple(embed_line(ln, m, max_order) for ln in family.lines) if m > 1 else family.lines
    ext_family = LineFamily(ext, d, lines) if m > 1 else family
    rng = random.Random(seed)
    for _ in range(budget):
        normal = tuple(ext.element_at(rng.randrange(ext.order)) for _ in range(d))
        if all(c.is_zero() for c in normal):
            continue
        const = ext.element_at(rng.randrange(ext.order))
        H = Hyperplane(ext, normal, const)
        if any(H.contains(pt) for pt in base_points):
            continue
        if ext_family.lines:
            try:
                lines_to_points(ext_family, H, max_order)
            except ValueError:
                continue
        return H
    raise SearchBudgetError(
        f"no avoiding hyperplane found over GF({base_ctx.order}^{m}) in {budget} tries")
