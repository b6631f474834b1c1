import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from valdyn.errors import MixedFieldError, NestedExtension
from valdyn.numeric import (NumberField, QuadReal, format_real, min_poly, quad, quadreal_cmp,
                            rational_roots, sign, sqrt_rat, ugcd, umul, udivmod)

rats = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 10 ** 6)


@given(rats, rats, rats)
def test_rat_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert Fraction(a) == a and a.denominator > 0


def test_cmp_examples():
    assert quadreal_cmp(1, quad(0, 1, 2)) == -1
    assert quadreal_cmp(quad(0, 1, 6), 2) == 1
    assert quadreal_cmp(3, 0) == 1


def test_cmp_agrees_with_high_precision():
    rng = random.Random(7)
    mpmath.mp.prec = 200
    for _ in range(1000):
        D = rng.choice([2, 3, 5, 6, 7, 10, 11])
        a = quad(Fraction(rng.randint(-40, 40), rng.randint(1, 9)), Fraction(rng.randint(-9, 9), rng.randint(1, 9)), D)
        b = quad(Fraction(rng.randint(-40, 40), rng.randint(1, 9)), Fraction(rng.randint(-9, 9), rng.randint(1, 9)), D)

        def big(x):
            if isinstance(x, QuadReal):
                return mpmath.mpf(x.r.numerator) / x.r.denominator + mpmath.mpf(x.s.numerator) / x.s.denominator * mpmath.sqrt(x.D)
            return mpmath.mpf(x.numerator) / x.denominator

        diff = big(a) - big(b)
        expected = 0 if diff == 0 else (1 if diff > 0 else -1)
        assert quadreal_cmp(a, b) == expected


@pytest.mark.parametrize("value, coeffs", [
    (Fraction(2), (1, -2)),
    (sqrt_rat(6), (1, 0, -6)),
    (quad(Fraction(3, 2), Fraction(1, 2), 5), (1, -3, 1)),
])
def test_min_poly_examples(value, coeffs):
    mp = min_poly(value)
    assert mp.coeffs == tuple(Fraction(c) for c in coeffs)
    assert mp.integral
    assert sign(mp(value)) == 0


@given(rats, rats.filter(lambda s: s != 0), st.sampled_from([2, 3, 5, 7, 12, 18]))
def test_min_poly_vanishes(r, s, D):
    a = quad(r, s, D)
    assert sign(min_poly(a)(a)) == 0


def test_quadreal_normalizes_radicand():
    a = quad(0, 1, 12)
    assert a.D == 3 and a.s == 2
    assert quad(1, 1, 4) == 3
    assert format_real(-sqrt_rat(Fraction(2, 3))) == "-sqrt(2/3)"
    assert format_real(quad(Fraction(3, 2), 1, 5)) == "3/2 + sqrt(5)"


def test_mixed_fields_rejected():
    with pytest.raises(MixedFieldError):
        quad(0, 1, 2) + quad(0, 1, 3)


@given(rats, rats.filter(lambda s: s != 0), rats, rats.filter(lambda s: s != 0))
def test_quadreal_arithmetic_consistent_with_floats(r1, s1, r2, s2):
    a, b = quad(r1, s1, 5), quad(r2, s2, 5)
    for exact, approx in ((a + b, float(a) + float(b)), (a * b, float(a) * float(b)), (a - b, float(a) - float(b))):
        assert abs(float(exact) - approx) <= 1e-6 * (1 + abs(approx))
    if sign(b) != 0:
        q = a / b
        assert abs(float(q) * float(b) - float(a)) <= 1e-6 * (1 + abs(float(a)))


def test_univariate_helpers():
    f = umul([-1, 1], [-2, 1])       # (t - 1)(t - 2)
    assert sorted(rational_roots(f)) == [1, 2]
    q, r = udivmod(f, [-1, 1])
    assert q == [-2, 1] and not r
    assert ugcd(f, umul([-1, 1], [5, 1])) == [-1, 1]


def test_number_field():
    K = NumberField([-2, 0, 1], "a")   # a^2 = 2
    a = K.gen
    assert a * a == K(2)
    inv = (a + 1).inverse() if hasattr(a, "inverse") else 1 / (a + 1)
    assert inv * (a + 1) == K(1)
    L = NumberField([-3, 0, 1], "b")
    with pytest.raises(NestedExtension):
        a + L.gen
