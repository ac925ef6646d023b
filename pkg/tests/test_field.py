import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nikodym.errors import CapExceededError
from nikodym.field import (_is_irreducible, embed, field_from_order, is_prime,
                           make_field, parse_field_spec)

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (13, 1), (2, 4)]


def all_monic(p, k):
    for tail in itertools.product(range(p), repeat=k):
        yield list(tail) + [1]


def has_factor_bruteforce(f, p):
    """Trial division by every monic polynomial of degree 1..k//2."""
    k = len(f) - 1
    for deg in range(1, k // 2 + 1):
        for g in all_monic(p, deg):
            q = list(f)
            while len(q) - 1 >= deg:
                c = q[-1]
                shift = len(q) - 1 - deg
                for i, gi in enumerate(g):
                    q[shift + i] = (q[shift + i] - c * gi) % p
                q.pop()
                while q and q[-1] == 0:
                    q.pop()
            if not q:
                return True
    return False


def test_modulus_examples():
    assert make_field(2).modulus == (0, 1)
    assert make_field(2, 2).modulus == (1, 1, 1)  # x^2+x+1
    assert make_field(3, 2).modulus == (1, 0, 1)  # x^2+1
    assert make_field(2, 3).modulus == (1, 0, 1, 1)  # x^3+x^2+1, least in our order


def test_gf4_modulus_is_unique_irreducible():
    irreducibles = [tuple(f) for f in all_monic(2, 2)
                    if not has_factor_bruteforce(f, 2)]
    assert irreducibles == [(1, 1, 1)]


@pytest.mark.parametrize("p,k", [(2, 3), (2, 4), (3, 2), (5, 2), (7, 2)])
def test_rabin_agrees_with_bruteforce(p, k):
    for f in all_monic(p, k):
        assert _is_irreducible(f, p) == (not has_factor_bruteforce(f, p))


def test_modulus_is_lex_least():
    # no smaller coefficient tail is irreducible
    ctx = make_field(2, 3)
    tail = ctx.modulus[:-1]
    for cand in itertools.product(range(2), repeat=3):
        if cand >= tail:
            break
        assert has_factor_bruteforce(list(cand) + [1], 2)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        make_field(4)
    with pytest.raises(ValueError):
        make_field(1)
    with pytest.raises(ValueError):
        make_field(5, 0)


def test_order_cap():
    with pytest.raises(CapExceededError):
        make_field(2, 30)
    make_field(2, 30, max_order=2**31)  # raised cap works


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 101, 7919}
    for n in range(-2, 110):
        assert is_prime(n) == (n in primes or (n > 1 and all(n % d for d in range(2, n))))


def test_inverse_example(gf5):
    assert gf5.scalar(2).inverse() == gf5.scalar(3)


def test_gf4_generator_square(gf4):
    x = gf4.elem((0, 1))
    assert (x * x).coeffs == (1, 1)  # x^2 = x + 1


def test_inverse_of_zero(gf5):
    with pytest.raises(ZeroDivisionError):
        gf5.zero.inverse()


def test_context_mismatch(gf5, gf7):
    with pytest.raises(ValueError):
        gf5.one + gf7.one


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_enumeration(p, k):
    ctx = make_field(p, k)
    elems = list(ctx.elements())
    assert len(elems) == p**k == len(set(elems))
    assert elems[0] == ctx.zero
    assert elems == sorted(elems)
    for i, e in enumerate(elems):
        assert ctx.index_of(e) == i
        assert ctx.element_at(i) == e


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 4), (3, 2)])
def test_field_axioms_exhaustive(p, k):
    ctx = make_field(p, k)
    elems = list(ctx.elements())
    one, zero = ctx.one, ctx.zero
    for a in elems:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if not a.is_zero():
            assert a * a.inverse() == one
            assert a ** (ctx.order - 1) == one
    for a, b in itertools.product(elems, repeat=2):
        assert a + b == b + a and a * b == b * a
        assert (a + b) ** p == a**p + b**p  # Frobenius
    for a, b, c in itertools.product(elems[: min(len(elems), 8)], repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 48), st.integers(0, 48), st.integers(0, 48))
def test_field_axioms_random_extension(i, j, l):
    ctx = make_field(7, 2)
    a, b, c = ctx.element_at(i), ctx.element_at(j), ctx.element_at(l)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) ** 7 == a**7 + b**7


@pytest.mark.parametrize("p,k,m", [(2, 1, 2), (3, 1, 2), (2, 2, 2), (3, 2, 2), (2, 1, 3)])
def test_embed_is_field_homomorphism(p, k, m):
    src = make_field(p, k)
    images = {}
    for a in src.elements():
        images[a] = embed(a, m)
    assert embed(src.zero, m).is_zero()
    dst = embed(src.one, m).ctx
    assert embed(src.one, m) == dst.one
    assert len(set(images.values())) == src.order  # injective
    for a, b in itertools.product(src.elements(), repeat=2):
        assert embed(a + b, m) == images[a] + images[b]
        assert embed(a * b, m) == images[a] * images[b]


def test_embed_identity_for_m1(gf9):
    for a in gf9.elements():
        assert embed(a, 1) is a


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_render_parse_roundtrip(p, k):
    ctx = make_field(p, k)
    for e in ctx.elements():
        assert ctx.parse(ctx.render(e)) == e


def test_render_wide_prime():
    ctx = make_field(101)
    assert ctx.render(ctx.scalar(7)) == "007"
    assert ctx.parse("042") == ctx.scalar(42)
    ctx2 = make_field(11, 2)
    e = ctx2.elem((10, 3))
    assert ctx2.render(e) == "1003"
    assert ctx2.parse("1003") == e


def test_parse_rejects_garbage(gf9):
    for bad in ("", "5", "123", "ab", "3 1"):
        with pytest.raises(ValueError):
            gf9.parse(bad)


def test_field_spec():
    assert parse_field_spec("5").order == 5
    assert parse_field_spec("3^2") == make_field(3, 2)
    with pytest.raises(ValueError):
        parse_field_spec("six")
    with pytest.raises(ValueError):
        parse_field_spec("4^2")


def test_field_from_order():
    assert field_from_order(8) == make_field(2, 3)
    assert field_from_order(49) == make_field(7, 2)
    for bad in (6, 12, 1, 100):
        with pytest.raises(ValueError):
            field_from_order(bad)


def test_same_params_same_field():
    assert make_field(3, 2) == make_field(3, 2)
    assert make_field(3, 2).modulus == parse_field_spec("3^2").modulus
