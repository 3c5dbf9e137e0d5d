import random

import pytest
from hypothesis import given, strategies as st

from czsplit.gf import FieldElement, FieldError, make_field
from czsplit.poly import (
    NEG_INF,
    Polynomial,
    PolyParseError,
    derivative,
    evaluate,
    format_poly,
    gcd,
    is_irreducible,
    is_squarefree,
    parse_poly,
    powmod,
    product_from_roots,
    random_monic,
    roots_in_field,
)

GF2, GF3, GF7 = make_field(2), make_field(3), make_field(7)
GF16, GF256 = make_field(2, 4), make_field(2, 8)


def P(fld, *c):
    return Polynomial(fld, c)


def test_canonical_form():
    f = P(GF2, 1, 0, 0)
    assert f.coeffs == (1,) and f.degree == 0
    assert P(GF2).degree == NEG_INF and P(GF2, 0, 0).is_zero()


def test_divmod_examples():
    q, r = divmod(P(GF2, 1, 1, 1), P(GF2, 1, 1))
    assert q == P(GF2, 0, 1) and r == P(GF2, 1)
    f = P(GF16, 3, 7, 1)
    assert divmod(f, f) == (P(GF16, 1), P(GF16))
    q, r = divmod(P(GF3, 0, 0, 0, 1), P(GF3, 1, 0, 1))
    assert q == P(GF3, 0, 1) and r == P(GF3, 0, 2)
    with pytest.raises(ZeroDivisionError):
        divmod(f, P(GF16))


@pytest.mark.parametrize("fld", [GF2, GF7, GF16, make_field(3, 2), make_field(101)], ids=lambda f: f.spec)
def test_divmod_round_trip(fld):
    rng = random.Random(fld.order)
    for _ in range(10_000 if fld.order <= 16 else 2_000):
        f = Polynomial(fld, tuple(rng.randrange(fld.order) for _ in range(rng.randint(0, 12))))
        g = Polynomial(fld, tuple(rng.randrange(fld.order) for _ in range(rng.randint(1, 8))))
        if g.is_zero():
            continue
        q, r = divmod(f, g)
        assert q * g + r == f
        assert r.degree < g.degree


def test_gcd_examples():
    assert gcd(P(GF2, 1, 0, 1), P(GF2, 1, 1)) == P(GF2, 1, 1)
    assert gcd(P(GF16, 5, 2, 9), P(GF16, 1)).is_one()
    a = GF16.alpha
    a2, a3 = GF16.pow(a, 2), GF16.pow(a, 3)
    f = product_from_roots(GF16, [a, a2])
    g = product_from_roots(GF16, [a, a3])
    assert gcd(f, g) == product_from_roots(GF16, [a])
    with pytest.raises(ValueError):
        gcd(P(GF2), P(GF2))


@given(st.lists(st.integers(0, 15), max_size=8), st.lists(st.integers(0, 15), max_size=8))
def test_gcd_divides_and_is_symmetric(a, b):
    f, g = Polynomial(GF16, tuple(a)), Polynomial(GF16, tuple(b))
    if f.is_zero() and g.is_zero():
        return
    d = gcd(f, g)
    assert d.is_monic()
    assert (f % d).is_zero() and (g % d).is_zero()
    assert gcd(g, f) == d


def test_powmod_examples():
    assert powmod(P(GF2, 0, 1), 5, P(GF2, 1, 1, 1)) == P(GF2, 1, 1)
    assert powmod(P(GF16, 3, 1), 0, P(GF16, 1, 1, 1)).is_one()
    a = GF256.alpha
    sigma = product_from_roots(GF256, [1, a])
    r = powmod(P(GF256, 0, 1), 85, sigma)
    cube_roots = {1, GF256.pow(a, 85), GF256.pow(a, 170)}
    assert evaluate(r, 1).value == 1
    assert evaluate(r, a).value == GF256.pow(a, 85) and evaluate(r, a).value in cube_roots
    with pytest.raises(ValueError):
        powmod(P(GF2, 0, 1), 3, P(GF2, 1))


@pytest.mark.parametrize("fld", [GF2, GF7, GF16, make_field(3, 2)], ids=lambda f: f.spec)
def test_powmod_matches_repeated_multiplication(fld):
    rng = random.Random(3)
    for _ in range(20):
        sigma = random_monic(fld, rng.randint(1, 6), rng)
        c = Polynomial(fld, tuple(rng.randrange(fld.order) for _ in range(5)))
        acc = Polynomial(fld, (1,)) % sigma
        for e in range(65):
            assert powmod(c, e, sigma) == acc
            acc = (acc * c) % sigma


def test_eval_examples():
    assert evaluate(P(GF2, 1, 1, 1), 1).value == 1
    f = P(GF7, 4, 1, 2)
    assert f(0).value == 4
    a = GF16.alpha
    g = product_from_roots(GF16, [a, GF16.pow(a, 3)])
    assert g(FieldElement(GF16, a)).value == 0
    with pytest.raises(FieldError):
        g(FieldElement(GF7, 1))


@given(st.lists(st.integers(0, 6), max_size=6), st.lists(st.integers(0, 6), max_size=6), st.integers(0, 6))
def test_eval_is_a_ring_map(a, b, x):
    f, g = Polynomial(GF7, tuple(a)), Polynomial(GF7, tuple(b))
    assert (f * g)(x).value == GF7.mul(f(x).value, g(x).value)
    assert (f + g)(x).value == GF7.add(f(x).value, g(x).value)


def test_derivative_and_vieta():
    assert derivative(P(GF2, 1, 1, 1)) == P(GF2, 1)
    assert derivative(P(GF7, 1, 2, 3)) == P(GF7, 2, 6)
    a = GF16.alpha
    a2 = GF16.pow(a, 2)
    f = product_from_roots(GF16, [a, a2])
    assert f == P(GF16, GF16.pow(a, 3), GF16.add(a, a2), 1)


def test_product_from_roots_round_trip():
    rng = random.Random(5)
    for fld in (GF7, GF16, make_field(3, 2)):
        roots = rng.sample(range(fld.order), 4)
        assert sorted(roots_in_field(product_from_roots(fld, roots))) == sorted(roots)


def test_irreducibility():
    assert is_irreducible(P(GF2, 1, 1, 1))
    assert not is_irreducible(P(GF2, 1, 0, 1))
    assert is_irreducible(P(GF2, 1, 1, 0, 0, 1))
    # x^4 + x^2 + 1 = (x^2 + x + 1)^2 has no roots but is reducible
    assert not is_irreducible(P(GF2, 1, 0, 1, 0, 1))
    assert not is_irreducible(P(GF2, 1))
    assert is_squarefree(P(GF7, 6, 0, 1)) and not is_squarefree(P(GF7, 1, 2, 1))


def test_irreducible_quartic_count_over_gf2():
    quartics = [Polynomial(GF2, tuple((k >> i) & 1 for i in range(4)) + (1,)) for k in range(16)]
    assert sum(map(is_irreducible, quartics)) == 3


def test_random_monic_is_seeded():
    assert random_monic(GF16, 5, 9) == random_monic(GF16, 5, 9)
    assert random_monic(GF16, 5, 9).is_monic() and random_monic(GF16, 5, 9).degree == 5


@pytest.mark.parametrize(
    "text, fld, coeffs",
    [
        ("z^3+z", GF2, (0, 1, 0, 1)),
        ("z^2+6", GF7, (6, 0, 1)),
        ("1,0,1", GF2, (1, 0, 1)),
        ("z^2 - 1", GF7, (6, 0, 1)),
        ("3*z^2+2*x+5", GF16, (5, 2, 3)),
        ("-z", GF7, (0, 6)),
        ("4", GF7, (4,)),
    ],
)
def test_parse_poly(text, fld, coeffs):
    assert parse_poly(text, fld).coeffs == coeffs


@pytest.mark.parametrize("text", ["", "z^", "z^2+7", "z**2", "y+1", "2*", "1,,2", "z^2+"])
def test_parse_poly_rejects(text):
    with pytest.raises(PolyParseError):
        parse_poly(text, GF7)


def test_format_round_trip():
    rng = random.Random(1)
    for _ in range(50):
        f = Polynomial(GF16, tuple(rng.randrange(16) for _ in range(rng.randint(1, 7))))
        assert parse_poly(format_poly(f), GF16) == f
    assert format_poly(P(GF7, 1, 0, 2, 1)) == "z^3+2*z^2+1"


def test_field_mismatch():
    with pytest.raises(FieldError):
        P(GF7, 1, 1) + P(GF2, 1, 1)
