"""Rational interval arithmetic for exact inequality verdicts.

Endpoints are Fractions, so every operation is exact; roots of rationals
are the only irrational quantities and they are enclosed by bisection down
to a requested width (perfect powers collapse to width zero).  Comparisons
return a tri-state: True / False when the intervals separate, None when
they overlap, which callers surface as an UNDECIDED verdict instead of
silently trusting floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_WIDTH = Fraction(1, 10**12)

Rat = Fraction | int


@dataclass(frozen=True)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    @classmethod
    def exact(cls, x: Rat) -> "RatInterval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Rat) -> bool:
        return self.lo <= x <= self.hi

    def _coerce(self, other) -> "RatInterval":
        if isinstance(other, RatInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return RatInterval.exact(other)
        raise TypeError(f"cannot mix RatInterval with {type(other).__name__}")

    def __add__(self, other) -> "RatInterval":
        o = self._coerce(other)
        return RatInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other) -> "RatInterval":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatInterval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatInterval":
        o = self._coerce(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RatInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatInterval":
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("dividing by an interval containing zero")
        recips = (1 / o.lo, 1 / o.hi)
        return self * RatInterval(min(recips), max(recips))

    def powi(self, n: int) -> "RatInterval":
        """Integer power; exact endpoint analysis (even powers near zero included)."""
        if n < 0:
            raise ValueError("negative powers via division, please")
        if n == 0:
            return RatInterval.exact(1)
        cands = (self.lo**n, self.hi**n)
        lo, hi = min(cands), max(cands)
        if n % 2 == 0 and self.lo < 0 < self.hi:
            lo = Fraction(0)
        return RatInterval(lo, hi)

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def cmp_le(a: RatInterval, b: RatInterval) -> bool | None:
    """Is a <= b?  True/False when certain, None when undecided at this width."""
    if a.hi <= b.lo:
        return True
    if a.lo > b.hi:
        return False
    return None


def _int_nth_root(m: int, n: int) -> int:
    """floor(m ** (1/n)) for m >= 0, exactly."""
    if m < 0:
        raise ValueError("negative radicand")
    if m in (0, 1) or n == 1:
        return m
    if n == 2:
        return math.isqrt(m)
    x = 1 << (-(-m.bit_length() // n) + 1)  # certainly above the root
    while True:
        y = ((n - 1) * x + m // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x**n > m:
        x -= 1
    return x


def nth_root(x: Rat, n: int, width: Fraction = DEFAULT_WIDTH) -> RatInterval:
    """Enclosure of x**(1/n) for x >= 0; exact when x is a perfect n-th power."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("nth_root needs a non-negative radicand")
    if n < 1:
        raise ValueError("root index must be a positive integer")
    if n == 1 or x == 0:
        return RatInterval.exact(x)
    # root(num/den) = root(num * den^(n-1)) / den with an integer radicand
    den = x.denominator
    m = x.numerator * den ** (n - 1)
    r = _int_nth_root(m, n)
    if r**n == m:
        return RatInterval.exact(Fraction(r, den))
    lo, hi = Fraction(r), Fraction(r + 1)
    target = width * den
    while hi - lo > target:
        mid = (lo + hi) / 2
        if mid**n <= m:
            lo = mid
        else:
            hi = mid
    return RatInterval(lo / den, hi / den)


def pow_frac(x: Rat, num: int, den: int, width: Fraction = DEFAULT_WIDTH) -> RatInterval:
    """Enclosure of x**(num/den) for x >= 0 and num, den >= 1."""
    if num < 0 or den < 1:
        raise ValueError("pow_frac handles non-negative rational exponents only")
    return nth_root(Fraction(x) ** num, den, width)


def interval_max(a: RatInterval, b: RatInterval) -> RatInterval:
    """Enclosure of max of the two enclosed values."""
    return RatInterval(max(a.lo, b.lo), max(a.hi, b.hi))
