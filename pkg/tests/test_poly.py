import itertools
import random
from fractions import Fraction

import pytest

from nikodym.field import make_field
from nikodym.poly import (INFINITY, AffineMap, Flat, Line, MultiPoly, apply_affine,
                          binom_mod, compositions, format_poly, hasse, mult_at,
                          mult_on_line, parse_poly, restrict)


def rand_poly(rng, ctx, nvars, maxdeg, density=0.6):
    terms = {}
    for e in itertools.product(range(maxdeg + 1), repeat=nvars):
        if sum(e) <= maxdeg and rng.random() < density:
            terms[e] = ctx.scalar(rng.randrange(ctx.p))
    return MultiPoly(ctx, nvars, terms)


def rand_point(rng, ctx, d):
    return tuple(ctx.element_at(rng.randrange(ctx.order)) for _ in range(d))


def rand_invertible(rng, ctx, d):
    while True:
        rows = tuple(tuple(ctx.scalar(rng.randrange(ctx.p)) for _ in range(d))
                     for _ in range(d))
        offset = tuple(ctx.scalar(rng.randrange(ctx.p)) for _ in range(d))
        try:
            return AffineMap(ctx, rows, offset)
        except ValueError:
            continue


def test_canonical_form_drops_zeros(gf5):
    f = MultiPoly(gf5, 2, {(1, 0): gf5.zero, (0, 1): gf5.one})
    assert (1, 0) not in f.terms
    assert f == MultiPoly(gf5, 2, {(0, 1): gf5.one})


def test_zero_degree(gf5):
    assert MultiPoly.zero(gf5, 2).degree() == -1
    assert MultiPoly.constant(gf5, 2, gf5.one).degree() == 0


def test_ring_axioms_random(gf5):
    rng = random.Random(11)
    zero = MultiPoly.zero(gf5, 2)
    for _ in range(20):
        f = rand_poly(rng, gf5, 2, 3)
        g = rand_poly(rng, gf5, 2, 3)
        h = rand_poly(rng, gf5, 2, 2)
        assert f + g == g + f
        assert f * g == g * f
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f - f == zero
        assert f * zero == zero


def test_pow(gf5):
    x = MultiPoly.variable(gf5, 1, 0)
    one = MultiPoly.constant(gf5, 1, gf5.one)
    assert (x + one) ** 5 == x**5 + one  # characteristic 5


def test_eval_examples(gf7):
    assert MultiPoly.zero(gf7, 2).eval((gf7.one, gf7.one)).is_zero()
    f = MultiPoly.monomial(gf7, 2, (1, 1), gf7.one)
    assert f.eval((gf7.scalar(2), gf7.scalar(3))) == gf7.scalar(6)
    g = MultiPoly.monomial(gf7, 1, (3,), gf7.one)
    assert g.eval((gf7.one,)) == gf7.one
    with pytest.raises(ValueError):
        f.eval((gf7.one,))


def test_binom_mod_lucas():
    # C(5,2) = 10 = 1 mod 3; Lucas: digits 5=12_3, 2=02_3 -> C(1,0)C(2,2)=1
    assert binom_mod(5, 2, 3) == 1
    assert binom_mod(3, 1, 3) == 0
    assert binom_mod(4, 2, 2) == 0
    for n in range(12):
        for k in range(12):
            import math
            want = math.comb(n, k) % 5 if k <= n else 0
            assert binom_mod(n, k, 5) == want


def test_hasse_order_zero_is_identity(gf5):
    rng = random.Random(1)
    for _ in range(10):
        f = rand_poly(rng, gf5, 2, 4)
        assert hasse(f, (0, 0)) == f


def test_hasse_char3_cube():
    g3 = make_field(3)
    f = MultiPoly.monomial(g3, 1, (3,), g3.one)
    assert hasse(f, (1,)).is_zero()  # (x+y)^3 = x^3 + y^3 in char 3


def test_hasse_frozen_example(gf5):
    f = MultiPoly.monomial(gf5, 1, (3,), gf5.one)
    assert format_poly(hasse(f, (2,))) == "3*x1"


def expand_shift(f):
    """f(x + y) as a polynomial in 2*nvars variables (x first, then y)."""
    d = f.nvars
    ctx = f.ctx
    args = [MultiPoly.variable(ctx, 2 * d, i) + MultiPoly.variable(ctx, 2 * d, d + i)
            for i in range(d)]
    return f.substitute(args)


def taylor_matches(f):
    d = f.nvars
    expanded = expand_shift(f)
    maxdeg = f.degree()
    for s in range(maxdeg + 2):
        for alpha in compositions(s, d):
            h = hasse(f, alpha)
            coeffs = {}
            for e, c in expanded.terms.items():
                if e[d:] == alpha:
                    coeffs[e[:d]] = c
            if h != MultiPoly(f.ctx, d, coeffs):
                return False
    return True


def test_taylor_expansion_oracle():
    rng = random.Random(7)
    for q, d, deg in ((5, 2, 4), (7, 2, 5), (7, 3, 3), (3, 2, 4), (2, 3, 3)):
        ctx = make_field(q)
        for _ in range(4):
            f = rand_poly(rng, ctx, d, deg)
            assert taylor_matches(f)


def test_hasse_composition(gf5):
    rng = random.Random(3)
    for _ in range(15):
        f = rand_poly(rng, gf5, 2, 4)
        a = (rng.randrange(3), rng.randrange(3))
        b = (rng.randrange(3), rng.randrange(3))
        lhs = hasse(hasse(f, b), a)
        coef = 1
        for ai, bi in zip(a, b):
            coef = coef * binom_mod(ai + bi, ai, 5) % 5
        rhs = hasse(f, tuple(x + y for x, y in zip(a, b))) * gf5.scalar(coef)
        assert lhs == rhs


def test_hasse_linearity(gf7):
    rng = random.Random(9)
    for _ in range(15):
        f = rand_poly(rng, gf7, 2, 4)
        g = rand_poly(rng, gf7, 2, 4)
        a, b = gf7.scalar(rng.randrange(7)), gf7.scalar(rng.randrange(7))
        alpha = (rng.randrange(3), rng.randrange(3))
        assert hasse(f * a + g * b, alpha) == hasse(f, alpha) * a + hasse(g, alpha) * b


def test_mult_at_examples(gf7):
    origin = (gf7.zero, gf7.zero)
    assert mult_at(MultiPoly.zero(gf7, 2), origin) == INFINITY
    f = MultiPoly.monomial(gf7, 2, (2, 1), gf7.one)
    assert mult_at(f, origin) == 3
    g = f + MultiPoly.constant(gf7, 2, gf7.one)
    assert mult_at(g, origin) == 0  # nonzero value iff multiplicity 0
    rng = random.Random(2)
    for _ in range(20):
        h = rand_poly(rng, gf7, 2, 4)
        p = rand_point(rng, gf7, 2)
        assert (mult_at(h, p) == 0) == (not h.eval(p).is_zero() if not h.is_zero() else False)


def univariate_mult_oracle(f, t0):
    """Count factors (x - t0) by repeated synthetic division."""
    if f.is_zero():
        return INFINITY
    ctx = f.ctx
    deg = f.degree()
    coeffs = [f.coeff((i,)) for i in range(deg + 1)]
    count = 0
    while True:
        # evaluate and divide by (x - t0) if the value is zero
        acc = ctx.zero
        for c in reversed(coeffs):
            acc = acc * t0 + c
        if not acc.is_zero():
            return count
        new = [ctx.zero] * (len(coeffs) - 1)
        carry = ctx.zero
        for i in range(len(coeffs) - 1, 0, -1):
            carry = coeffs[i] + carry * t0 if i < len(coeffs) - 1 else coeffs[i]
            new[i - 1] = carry
        coeffs = new
        count += 1
        if not coeffs:
            return count


def test_mult_at_univariate_oracle(gf7):
    rng = random.Random(13)
    for _ in range(40):
        # build with planted roots so multiplicities > 0 actually occur
        f = MultiPoly.constant(gf7, 1, gf7.scalar(rng.randrange(1, 7)))
        x = MultiPoly.variable(gf7, 1, 0)
        for _ in range(rng.randrange(4)):
            root = MultiPoly.constant(gf7, 1, gf7.scalar(rng.randrange(7)))
            f = f * (x - root)
        t0 = gf7.scalar(rng.randrange(7))
        assert mult_at(f, (t0,)) == univariate_mult_oracle(f, t0)


def test_restrict_examples(gf7):
    c = MultiPoly.constant(gf7, 2, gf7.scalar(4))
    diag = Line.make(gf7, (gf7.zero, gf7.zero), (gf7.one, gf7.one))
    r = restrict(c, diag.as_flat())
    assert r == MultiPoly.constant(gf7, 1, gf7.scalar(4))
    x2 = MultiPoly.variable(gf7, 2, 1)
    assert restrict(x2, diag.as_flat()) == MultiPoly.variable(gf7, 1, 0)
    assert restrict(x2, diag.as_flat()).degree() <= x2.degree()


def test_restrict_double_eval(gf7):
    rng = random.Random(21)
    for _ in range(50):
        f = rand_poly(rng, gf7, 3, 3)
        base = rand_point(rng, gf7, 3)
        while True:
            d1 = rand_point(rng, gf7, 3)
            d2 = rand_point(rng, gf7, 3)
            try:
                flat = Flat(gf7, 3, base, (d1, d2))
                break
            except ValueError:
                continue
        g = restrict(f, flat)
        ts = rand_point(rng, gf7, 2)
        assert g.eval(ts) == f.eval(flat.point_at(ts))


def test_mult_on_line_zero_restriction(gf7):
    x2 = MultiPoly.variable(gf7, 2, 1)
    xaxis = Line.make(gf7, (gf7.zero, gf7.zero), (gf7.one, gf7.zero))
    assert mult_on_line(x2, xaxis, (gf7.zero, gf7.zero)) == INFINITY
    with pytest.raises(ValueError):
        mult_on_line(x2, xaxis, (gf7.zero, gf7.one))


def test_mult_on_line_dominates_mult_at(gf7):
    rng = random.Random(31)
    checked = 0
    while checked < 50:
        f = rand_poly(rng, gf7, 2, 4)
        p = rand_point(rng, gf7, 2)
        direction = rand_point(rng, gf7, 2)
        if all(c.is_zero() for c in direction):
            continue
        line = Line.make(gf7, p, direction)
        assert mult_on_line(f, line, p) >= mult_at(f, p)
        if not f.is_zero() and f.eval(p).is_zero():
            assert mult_on_line(f, line, p) >= 1
        checked += 1


def line_annihilator(rng, ctx, line):
    """A random affine form vanishing identically on the line."""
    d = line.d
    while True:
        coeffs = [ctx.scalar(rng.randrange(ctx.p)) for _ in range(d)]
        dot = ctx.zero
        for c, v in zip(coeffs, line.direction):
            dot = dot + c * v
        if not dot.is_zero() or all(c.is_zero() for c in coeffs):
            continue
        const = ctx.zero
        for c, b in zip(coeffs, line.base):
            const = const + c * b
        terms = {tuple(1 if j == i else 0 for j in range(d)): c
                 for i, c in enumerate(coeffs) if not c.is_zero()}
        terms[(0,) * d] = -const
        return MultiPoly(ctx, d, terms)


def test_total_multiplicity_forces_zero_restriction(gf7):
    # engineered: f in the line's ideal, so line multiplicities sum past deg f
    rng = random.Random(17)
    for _ in range(50):
        p0 = rand_point(rng, gf7, 2)
        direction = rand_point(rng, gf7, 2)
        if all(c.is_zero() for c in direction):
            direction = (gf7.one, gf7.zero)
        line = Line.make(gf7, p0, direction)
        phi = line_annihilator(rng, gf7, line)
        g = rand_poly(rng, gf7, 2, 3)
        if g.is_zero():
            g = MultiPoly.constant(gf7, 2, gf7.one)
        f = phi * g
        pts = [line.point_at(gf7.element_at(i)) for i in range(3)]
        total = sum(mult_on_line(f, line, p) for p in pts)
        assert total > f.degree()
        assert restrict(f, line.as_flat()).is_zero()


def test_total_multiplicity_contrapositive(gf7):
    # random f with nonzero restriction: total multiplicity stays <= deg f
    rng = random.Random(19)
    checked = 0
    while checked < 50:
        f = rand_poly(rng, gf7, 2, 4)
        line = Line.make(gf7, rand_point(rng, gf7, 2), (gf7.one, gf7.scalar(rng.randrange(7))))
        if restrict(f, line.as_flat()).is_zero():
            continue
        total = sum(mult_on_line(f, line, p) for p in line.points())
        assert total <= f.degree()
        checked += 1


def test_apply_affine_identity(gf7):
    rng = random.Random(23)
    T = AffineMap.identity(gf7, 2)
    for _ in range(5):
        f = rand_poly(rng, gf7, 2, 4)
        assert apply_affine(f, T) == f


def test_apply_affine_translation_multiplicity(gf7):
    rng = random.Random(29)
    for _ in range(50):
        f = rand_poly(rng, gf7, 2, 4)
        off = rand_point(rng, gf7, 2)
        T = AffineMap.translation(gf7, off)
        p = rand_point(rng, gf7, 2)
        g = apply_affine(f, T)
        assert mult_at(g, T.inverse().apply(p)) == mult_at(f, p)


def test_apply_affine_general_invariance(gf7):
    rng = random.Random(37)
    for _ in range(50):
        f = rand_poly(rng, gf7, 2, 4)
        T = rand_invertible(rng, gf7, 2)
        p = rand_point(rng, gf7, 2)
        g = apply_affine(f, T)
        assert mult_at(g, T.inverse().apply(p)) == mult_at(f, p)
        assert g.degree() == f.degree()


def test_singular_map_rejected(gf7):
    rows = ((gf7.one, gf7.one), (gf7.one, gf7.one))
    with pytest.raises(ValueError):
        AffineMap(gf7, rows, (gf7.zero, gf7.zero))


def test_flat_dependent_dirs_rejected(gf7):
    with pytest.raises(ValueError):
        Flat(gf7, 2, (gf7.zero, gf7.zero),
             ((gf7.one, gf7.one), (gf7.scalar(2), gf7.scalar(2))))


def test_line_canonical_equality(gf7):
    rng = random.Random(41)
    for _ in range(50):
        p = rand_point(rng, gf7, 3)
        direction = rand_point(rng, gf7, 3)
        if all(c.is_zero() for c in direction):
            continue
        line = Line.make(gf7, p, direction)
        # same point set from any other point and scaled direction
        t = gf7.element_at(rng.randrange(1, 7))
        other = Line.make(gf7, line.point_at(gf7.scalar(3)),
                          tuple(c * t for c in direction))
        assert other == line
        assert set(other.points()) == set(line.points())
        assert len(set(line.points())) == 7


def test_line_noncanonical_construction_rejected(gf7):
    with pytest.raises(ValueError):
        Line(gf7, 2, (gf7.one, gf7.zero), (gf7.one, gf7.zero))  # base pivot not 0
    with pytest.raises(ValueError):
        Line(gf7, 2, (gf7.zero, gf7.zero), (gf7.scalar(2), gf7.zero))  # pivot not 1
    with pytest.raises(ValueError):
        Line.make(gf7, (gf7.zero, gf7.zero), (gf7.zero, gf7.zero))


def test_line_through_and_param(gf7):
    p = (gf7.one, gf7.scalar(2))
    q = (gf7.scalar(3), gf7.scalar(4))
    line = Line.through(gf7, p, q)
    assert line.contains(p) and line.contains(q)
    assert line.param_of((gf7.zero, gf7.scalar(5))) is None or True  # param_of total


def test_format_parse_roundtrip(gf7):
    rng = random.Random(43)
    for _ in range(30):
        f = rand_poly(rng, gf7, 3, 4)
        assert parse_poly(format_poly(f), gf7, 3) == f


def test_format_parse_extension_field(gf4):
    x = MultiPoly.variable(gf4, 2, 0)
    gen = MultiPoly.constant(gf4, 2, gf4.elem((0, 1)))
    f = x * x * gen + MultiPoly.constant(gf4, 2, gf4.elem((1, 1)))
    s = format_poly(f)
    assert parse_poly(s, gf4, 2) == f


def test_parse_rejects_malformed(gf7):
    for bad in ("x1", "2*y1", "2*x0", "2*x1^", "2**x1"):
        with pytest.raises(ValueError):
            parse_poly(bad, gf7, 2)
