"""Exact arithmetic in prime fields GF(p) and extensions GF(p^k).

Elements are dense coefficient vectors over GF(p), least significant
coefficient first, reduced modulo a monic irreducible of degree k.  For a
given (p, k) the modulus is always the lexicographically least monic
irreducible (constant coefficient compared first), found by deterministic
search, so independently built contexts agree coefficient for coefficient.

No log tables and no floats: everything is plain integer arithmetic on
small tuples, which keeps results bit-for-bit reproducible.  Contexts cap
their order so exhaustive routines downstream refuse instead of thrashing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Iterator

from .errors import CapExceededError

DEFAULT_MAX_ORDER = 10**7

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact far beyond desk scale."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# -- dense univariate polynomials over GF(p), little endian int lists --

def _p_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _p_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    return _p_trim(out)


def _p_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _p_trim(out)


def _p_mod(a: list[int], f: list[int], p: int) -> list[int]:
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        c = a[-1]
        shift = len(a) - 1 - df
        if c:
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fi) % p
        a.pop()
        _p_trim(a)
    return a


def _p_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _p_mod(a, f, p)
    while e:
        if e & 1:
            result = _p_mod(_p_mul(result, base, p), f, p)
        base = _p_mod(_p_mul(base, base, p), f, p)
        e >>= 1
    return result


def _p_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        inv = pow(b[-1], -1, p)
        bm = [(c * inv) % p for c in b]
        a, b = b, _p_mod(a, bm, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    # chain[j] = x^(p^j) mod f
    chain = [_p_mod(x, f, p)]
    for _ in range(k):
        chain.append(_p_powmod(chain[-1], p, f, p))
    if _p_sub(chain[k], x, p) and _p_mod(_p_sub(chain[k], x, p), f, p):
        return False
    for t in _prime_divisors(k):
        g = _p_gcd(_p_sub(chain[k // t], x, p), f, p)
        if len(g) - 1 >= 1:
            return False
    return True


def _least_irreducible(p: int, k: int) -> tuple[int, ...]:
    if k == 1:
        return (0, 1)
    # lex order on (c_0, ..., c_{k-1}), constant coefficient most significant;
    # c_0 = 0 would mean a root at 0, so that whole block is skipped
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=k - 1):
            f = [c0, *rest, 1]
            if _is_irreducible(f, p):
                return tuple(f)
    raise AssertionError("no irreducible found; unreachable for prime p")


@dataclass(frozen=True)
class FieldCtx:
    """A finite field GF(p^k) with a fixed monic irreducible modulus."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p**self.k

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, (0,) * self.k)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, (1,) + (0,) * (self.k - 1))

    def scalar(self, c: int) -> "FieldElem":
        """The constant c mod p as a field element."""
        return FieldElem(self, (c % self.p,) + (0,) * (self.k - 1))

    def elem(self, coeffs) -> "FieldElem":
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        if any(c < 0 or c >= self.p for c in coeffs):
            raise ValueError(f"coefficients must lie in [0, {self.p})")
        return FieldElem(self, coeffs)

    def element_at(self, index: int) -> "FieldElem":
        """Element at a position in the canonical enumeration (zero first)."""
        if index < 0 or index >= self.order:
            raise ValueError("element index out of range")
        digits = []
        for _ in range(self.k):
            digits.append(index % self.p)
            index //= self.p
        return FieldElem(self, tuple(reversed(digits)))

    def index_of(self, a: "FieldElem") -> int:
        if a.ctx != self:
            raise ValueError("element from a different field context")
        idx = 0
        for c in a.coeffs:
            idx = idx * self.p + c
        return idx

    def elements(self) -> Iterator["FieldElem"]:
        """All p^k elements in coefficient-lexicographic order, zero first."""
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield FieldElem(self, coeffs)

    # rendering: fixed-width digits per coefficient, least significant first
    @property
    def _digit_width(self) -> int:
        return len(str(self.p - 1))

    def render(self, a: "FieldElem") -> str:
        if a.ctx != self:
            raise ValueError("element from a different field context")
        w = self._digit_width
        return "".join(str(c).zfill(w) for c in a.coeffs)

    def parse(self, s: str) -> "FieldElem":
        w = self._digit_width
        if len(s) != self.k * w or not s.isdigit():
            raise ValueError(f"malformed element string {s!r} for {self}")
        coeffs = tuple(int(s[i * w:(i + 1) * w]) for i in range(self.k))
        if any(c >= self.p for c in coeffs):
            raise ValueError(f"coefficient out of range in {s!r}")
        return FieldElem(self, coeffs)

    def __repr__(self) -> str:
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    # coefficient-tuple arithmetic helpers
    def _add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def _neg(self, a):
        return tuple((-x) % self.p for x in a)

    def _mul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return (a[0] * b[0] % p,)
        conv = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] = (conv[i + j] + ai * bj) % p
        # reduce by the monic modulus
        for i in range(2 * k - 2, k - 1, -1):
            c = conv[i]
            if c:
                conv[i] = 0
                shift = i - k
                for j in range(k):
                    conv[shift + j] = (conv[shift + j] - c * self.modulus[j]) % p
        return tuple(conv[:k])


@total_ordering
@dataclass(frozen=True)
class FieldElem:
    """An element of a FieldCtx; a value type, safe to hash and compare."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other: "FieldElem") -> None:
        if not isinstance(other, FieldElem):
            raise TypeError(f"expected FieldElem, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ValueError("elements from different field contexts")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.ctx, self.ctx._add(self.coeffs, other.coeffs))

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.ctx, self.ctx._add(self.coeffs, self.ctx._neg(other.coeffs)))

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx._neg(self.coeffs))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.ctx, self.ctx._mul(self.coeffs, other.coeffs))

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.ctx.order - 2)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElem":
        if not isinstance(e, int):
            raise TypeError("exponent must be an int")
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __lt__(self, other: "FieldElem") -> bool:
        self._check(other)
        return self.coeffs < other.coeffs

    def __str__(self) -> str:
        return self.ctx.render(self)


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> FieldCtx:
    """Build GF(p^k) with the deterministic least irreducible modulus."""
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not isinstance(k, int) or k < 1:
        raise ValueError("extension degree must be a positive integer")
    if p**k > max_order:
        raise CapExceededError(f"field order {p}^{k} exceeds cap {max_order}")
    return FieldCtx(p, k, _least_irreducible(p, k))


@lru_cache(maxsize=None)
def _embedding_powers(src: FieldCtx, dst: FieldCtx) -> tuple[FieldElem, ...]:
    # least root of src.modulus in dst, in canonical element order
    for i in range(dst.order):
        cand = dst.element_at(i)
        acc = dst.zero
        for c in reversed(src.modulus):
            acc = acc * cand + dst.scalar(c)
        if acc.is_zero():
            powers = [dst.one]
            for _ in range(src.k - 1):
                powers.append(powers[-1] * cand)
            return tuple(powers)
    raise AssertionError("modulus has no root in the extension; degrees do not divide?")


def embed(a: FieldElem, m: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldElem:
    """Embed GF(p^k) into GF(p^(k*m)) along a fixed field homomorphism.

    The image of the source generator is the canonically least root of the
    source modulus in the target, so the map is deterministic.  For m = 1
    this is the identity.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("extension multiplier must be a positive integer")
    if m == 1:
        return a
    src = a.ctx
    dst = make_field(src.p, src.k * m, max_order)
    powers = _embedding_powers(src, dst)
    acc = dst.zero
    for c, rho_i in zip(a.coeffs, powers):
        if c:
            acc = acc + dst.scalar(c) * rho_i
    return acc


def parse_field_spec(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> FieldCtx:
    """Parse a field spec string like "5" or "3^2" into a context."""
    spec = spec.strip()
    if "^" in spec:
        ps, ks = spec.split("^", 1)
    else:
        ps, ks = spec, "1"
    try:
        p, k = int(ps), int(ks)
    except ValueError:
        raise ValueError(f"malformed field spec {spec!r}") from None
    return make_field(p, k, max_order)


def field_from_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldCtx:
    """The unique (p, k) with p^k = q, or a ValueError if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        p = q
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return make_field(p, k, max_order)
