"""Nikodym, weak Nikodym and Kakeya predicates over F_q^d, plus extremal search.

Points of the space are indexed mixed-radix over the field's canonical
element order (first coordinate most significant), so the index order is
the lexicographic order on points and a PointSet is one big bitmask.
Every predicate here is exhaustive and exact; search beyond the tiny
all-subsets regime only ever reports upper bounds and says so.

A weak Nikodym verdict carries, for each point x outside the set, one line
through x whose other q-1 points all lie inside.  Several lines can
qualify; the tie-break is a pluggable policy (canonically least line, or
seeded random) because downstream consumers of the line family may care
which one was picked.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import CapExceededError
from .field import FieldCtx, FieldElem, field_from_order
from .poly import Line, Point

DEFAULT_POINT_CAP = 10**7


def space_size(ctx: FieldCtx, d: int, cap: int = DEFAULT_POINT_CAP) -> int:
    n = ctx.order**d
    if n > cap:
        raise CapExceededError(f"space has {n} points, over cap {cap}")
    return n


def point_index(ctx: FieldCtx, p: Point) -> int:
    idx = 0
    for c in p:
        idx = idx * ctx.order + ctx.index_of(c)
    return idx


def point_at(ctx: FieldCtx, d: int, index: int) -> Point:
    coords = []
    for _ in range(d):
        coords.append(ctx.element_at(index % ctx.order))
        index //= ctx.order
    return tuple(reversed(coords))


@dataclass(frozen=True)
class PointSet:
    """An immutable subset of F_q^d as a bitmask over canonical point indices."""

    ctx: FieldCtx
    d: int
    mask: int

    @classmethod
    def empty(cls, ctx: FieldCtx, d: int, cap: int = DEFAULT_POINT_CAP) -> "PointSet":
        space_size(ctx, d, cap)
        return cls(ctx, d, 0)

    @classmethod
    def full(cls, ctx: FieldCtx, d: int, cap: int = DEFAULT_POINT_CAP) -> "PointSet":
        n = space_size(ctx, d, cap)
        return cls(ctx, d, (1 << n) - 1)

    @classmethod
    def from_points(cls, ctx: FieldCtx, d: int, pts,
                    cap: int = DEFAULT_POINT_CAP) -> "PointSet":
        space_size(ctx, d, cap)
        mask = 0
        for p in pts:
            mask |= 1 << point_index(ctx, p)
        return cls(ctx, d, mask)

    @classmethod
    def from_indices(cls, ctx: FieldCtx, d: int, idxs,
                     cap: int = DEFAULT_POINT_CAP) -> "PointSet":
        space_size(ctx, d, cap)
        mask = 0
        for i in idxs:
            mask |= 1 << i
        return cls(ctx, d, mask)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def space(self) -> int:
        return self.ctx.order**self.d

    def contains_index(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def contains(self, p: Point) -> bool:
        return self.contains_index(point_index(self.ctx, p))

    def indices(self) -> Iterator[int]:
        m = self.mask
        i = 0
        while m:
            if m & 1:
                yield i
            m >>= 1
            i += 1

    def points(self) -> Iterator[Point]:
        for i in self.indices():
            yield point_at(self.ctx, self.d, i)

    def complement(self) -> "PointSet":
        full = (1 << self.space) - 1
        return PointSet(self.ctx, self.d, full ^ self.mask)

    def without_index(self, i: int) -> "PointSet":
        return PointSet(self.ctx, self.d, self.mask & ~(1 << i))

    def with_index(self, i: int) -> "PointSet":
        return PointSet(self.ctx, self.d, self.mask | 1 << i)

    def issubset(self, other: "PointSet") -> bool:
        return self.mask & ~other.mask == 0


# -- line enumeration --

def canonical_directions(ctx: FieldCtx, d: int) -> list[Point]:
    """One representative per direction: first nonzero coordinate is 1."""
    elems = list(ctx.elements())
    out: list[Point] = []
    for j in range(d):
        head = (ctx.zero,) * j + (ctx.one,)
        for tail in itertools.product(elems, repeat=d - 1 - j):
            out.append(head + tail)
    return out


def all_lines(ctx: FieldCtx, d: int, cap: int = DEFAULT_POINT_CAP) -> list[Line]:
    """Every line of F_q^d exactly once, in canonical form."""
    space_size(ctx, d, cap)
    elems = list(ctx.elements())
    out: list[Line] = []
    for j in range(d):
        head = (ctx.zero,) * j + (ctx.one,)
        for tail in itertools.product(elems, repeat=d - 1 - j):
            direction = head + tail
            for rest in itertools.product(elems, repeat=d - 1):
                base = rest[:j] + (ctx.zero,) + rest[j:]
                out.append(Line(ctx, d, base, direction))
    return out


def lines_through(ctx: FieldCtx, d: int, p: Point) -> list[Line]:
    """All (q^d - 1) / (q - 1) lines through a point, canonical forms."""
    return [Line.make(ctx, p, direction) for direction in canonical_directions(ctx, d)]


def _line_indices(ctx: FieldCtx, line: Line) -> list[int]:
    return [point_index(ctx, pt) for pt in line.points()]


# -- Nikodym predicates --

@dataclass(frozen=True)
class NikodymInstance:
    """A weak Nikodym witness: for each x outside N, a line through x whose
    other q-1 points all lie in N (directly re-checkable)."""

    points: PointSet
    assoc: tuple[tuple[int, Line], ...]

    def verify(self) -> bool:
        ctx, d = self.points.ctx, self.points.d
        outside = set(self.points.complement().indices())
        if {x for x, _ in self.assoc} != outside:
            return False
        for x, line in self.assoc:
            idxs = _line_indices(ctx, line)
            if x not in idxs:
                return False
            if any(i != x and not self.points.contains_index(i) for i in idxs):
                return False
        return True

    def line_family(self) -> list[Line]:
        return [line for _, line in self.assoc]


@dataclass(frozen=True)
class WeakNikodymResult:
    ok: bool
    instance: NikodymInstance | None
    refutation: Point | None


@dataclass(frozen=True)
class NikodymResult:
    ok: bool
    witness: tuple[tuple[int, Line], ...] | None
    refutation: Point | None


@dataclass(frozen=True)
class KakeyaResult:
    ok: bool
    witness: tuple[tuple[Point, Line], ...] | None
    missing_direction: Point | None


def _pick_line(candidates: list[Line], policy: str, rng: random.Random | None) -> Line:
    if policy == "canonical":
        return min(candidates, key=lambda ln: ln.sort_key())
    if policy == "random":
        ordered = sorted(candidates, key=lambda ln: ln.sort_key())
        return ordered[rng.randrange(len(ordered))]
    raise ValueError(f"unknown tie-break policy {policy!r}")


def _valid_lines_through(S: PointSet, x_idx: int, x_pt: Point) -> list[Line]:
    ctx, d = S.ctx, S.d
    out = []
    for line in lines_through(ctx, d, x_pt):
        idxs = _line_indices(ctx, line)
        if all(i == x_idx or S.contains_index(i) for i in idxs):
            out.append(line)
    return out


def is_weak_nikodym(S: PointSet, policy: str = "canonical",
                    seed: int = 0) -> WeakNikodymResult:
    """Does every point outside S see a punctured line inside S?

    Returns a full instance (one line per outside point, chosen by the
    tie-break policy) or the first outside point with no valid line.
    """
    rng = random.Random(seed) if policy == "random" else None
    assoc = []
    for x_idx in S.complement().indices():
        x_pt = point_at(S.ctx, S.d, x_idx)
        candidates = _valid_lines_through(S, x_idx, x_pt)
        if not candidates:
            return WeakNikodymResult(False, None, x_pt)
        assoc.append((x_idx, _pick_line(candidates, policy, rng)))
    return WeakNikodymResult(True, NikodymInstance(S, tuple(assoc)), None)


def is_nikodym(S: PointSet, policy: str = "canonical", seed: int = 0) -> NikodymResult:
    """The stronger predicate: every point of the space, inside or outside S,
    sees a punctured line inside S."""
    rng = random.Random(seed) if policy == "random" else None
    witness = []
    for x_idx in range(S.space):
        x_pt = point_at(S.ctx, S.d, x_idx)
        candidates = _valid_lines_through(S, x_idx, x_pt)
        if not candidates:
            return NikodymResult(False, None, x_pt)
        witness.append((x_idx, _pick_line(candidates, policy, rng)))
    return NikodymResult(True, tuple(witness), None)


def is_kakeya(S: PointSet) -> KakeyaResult:
    """Does S contain a full line in every direction?"""
    ctx, d = S.ctx, S.d
    space_size(ctx, d)
    elems = list(ctx.elements())
    witness = []
    for direction in canonical_directions(ctx, d):
        j = next(i for i, c in enumerate(direction) if not c.is_zero())
        found = None
        for rest in itertools.product(elems, repeat=d - 1):
            base = rest[:j] + (ctx.zero,) + rest[j:]
            line = Line(ctx, d, base, direction)
            if all(S.contains_index(i) for i in _line_indices(ctx, line)):
                found = line
                break
        if found is None:
            return KakeyaResult(False, None, direction)
        witness.append((direction, found))
    return KakeyaResult(True, tuple(witness), None)


def instance_mp(inst: NikodymInstance) -> dict[int, int]:
    """For each point index of N, how many associated punctured lines hit it.

    Summing the values gives (q-1) times the number of associated lines,
    since each punctured line contributes exactly its q-1 points.
    """
    counts = {i: 0 for i in inst.points.indices()}
    ctx = inst.points.ctx
    for x, line in inst.assoc:
        for i in _line_indices(ctx, line):
            if i != x:
                counts[i] += 1
    return counts


# -- extremal search --

@dataclass(frozen=True)
class MinSearchResult:
    """Search outcome; `exact` is True only when the whole subset space was
    covered, otherwise the size is an upper bound and is labeled as such."""

    size: int
    points: PointSet
    exact: bool
    evaluations: int
    method: str


PREDICATES: dict[str, Callable[[PointSet], bool]] = {
    "weak": lambda S: is_weak_nikodym(S).ok,
    "nikodym": lambda S: is_nikodym(S).ok,
    "kakeya": lambda S: is_kakeya(S).ok,
}


def min_weak_nikodym(ctx: FieldCtx, d: int, budget: int | None = None,
                     exhaustive_limit: int = 16,
                     mode: str = "weak") -> MinSearchResult:
    """Smallest set passing the predicate, exact for tiny spaces.

    Spaces with at most `exhaustive_limit` points are searched by size
    (first hit is the exact minimum with the lexicographically least
    witness).  Larger spaces, or runs that exhaust their budget, fall back
    to greedy removal from the full space and report an upper bound.
    """
    predicate = PREDICATES[mode]
    n = space_size(ctx, d)
    evals = 0

    def spend() -> bool:
        nonlocal evals
        evals += 1
        return budget is None or evals <= budget

    if n <= exhaustive_limit:
        for size in range(n + 1):
            for combo in itertools.combinations(range(n), size):
                S = PointSet.from_indices(ctx, d, combo)
                if not spend():
                    return _greedy_upper_bound(ctx, d, predicate, evals, budget)
                if predicate(S):
                    return MinSearchResult(size, S, True, evals, "exhaustive")
        raise AssertionError("the full space always passes; unreachable")
    return _greedy_upper_bound(ctx, d, predicate, evals, budget)


def _greedy_upper_bound(ctx: FieldCtx, d: int, predicate, evals: int,
                        budget: int | None) -> MinSearchResult:
    S = PointSet.full(ctx, d)
    improved = True
    while improved:
        improved = False
        for i in list(S.indices()):
            if budget is not None and evals >= budget:
                return MinSearchResult(S.size, S, False, evals, "greedy")
            evals += 1
            T = S.without_index(i)
            if predicate(T):
                S = T
                improved = True
    return MinSearchResult(S.size, S, False, evals, "greedy")


# -- point set file format: header "q d", then one point per line as
#    comma-separated canonical element strings --

def dump_point_set(S: PointSet) -> str:
    lines = [f"{S.ctx.order} {S.d}"]
    for pt in S.points():
        lines.append(",".join(S.ctx.render(c) for c in pt))
    return "\n".join(lines) + "\n"


def parse_point_set(text: str, cap: int = DEFAULT_POINT_CAP) -> PointSet:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise ValueError("empty point set file")
    head = rows[0].split()
    if len(head) != 2:
        raise ValueError("header must be 'q d'")
    try:
        q, d = int(head[0]), int(head[1])
    except ValueError:
        raise ValueError("header must be 'q d' with integers") from None
    if d < 1:
        raise ValueError("dimension must be positive")
    ctx = field_from_order(q)
    space_size(ctx, d, cap)
    pts = []
    for row in rows[1:]:
        coords = row.split(",")
        if len(coords) != d:
            raise ValueError(f"point {row!r} has {len(coords)} coordinates, want {d}")
        pts.append(tuple(ctx.parse(c) for c in coords))
    return PointSet.from_points(ctx, d, pts, cap)


def save_point_set(S: PointSet, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_point_set(S))


def load_point_set(path, cap: int = DEFAULT_POINT_CAP) -> PointSet:
    with open(path) as fh:
        return parse_point_set(fh.read(), cap)
