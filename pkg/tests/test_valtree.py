import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from valdyn.errors import NotCenteredAtInfinity
from valdyn.numeric import sign, sqrt_rat
from valdyn.poly import X, Y, BiPoly
from valdyn.valtree import (MINUS_DEG, XMAJOR, YMAJOR, ValInfinity, alpha, in_V1, invariants, is_monomializable,
                            is_rational_pencil, leq, meet, monomial, monomial_closed_form, normalize,
                            random_v1_monomial, render, thinness)

EX53_P = X * (X - Y ** 2)


def test_eval_examples():
    v = monomial(-1, Fr(-1, 3))
    assert v.eval(X + Y) == -1
    assert v.eval(EX53_P) == -2
    assert MINUS_DEG.eval(EX53_P) == -3


def test_normalize_examples():
    v = normalize(-1, -2)
    assert v.normalizer == 2 and v.nu_x == Fr(-1, 2) and v.nu_y == -1
    assert normalize(-1, -1).normalizer == 1 and normalize(-1, -1).is_minus_deg
    w = normalize(1, -1)
    assert w.normalizer == 1 and w.nu_x == 1 and w.nu_y == -1
    with pytest.raises(NotCenteredAtInfinity):
        normalize(0, 1)


def test_render_is_canonical():
    assert render(monomial(-1, Fr(-1, 3))) == "chart=x-major; nu(x)=-1; nu(y)=-1/3"
    d = ValInfinity(XMAJOR, [(Fr(1, 2), 1)], Fr(1, 3))
    assert render(d) == "chart=x-major; y = 1*x^(1/2) + theta*x^(1/3)"


def test_meet_examples():
    a, b = monomial(Fr(-1, 3), -1), monomial(Fr(-1, 2), -1)
    order, m = meet(a, b)
    assert order == "greater" and m.same_valuation(b)
    assert meet(a, a)[0] == "equal"
    # a y-major datum against an x-major monomial: the charts diverge at once
    d = ValInfinity(YMAJOR, [(Fr(1, 2), 1)], Fr(1, 3))
    order, m = meet(d, monomial(-1, Fr(-1, 3)))
    assert order == "incomparable" and m.is_minus_deg


def test_meet_of_branching_data():
    u = ValInfinity(XMAJOR, [(Fr(1, 2), 1)], Fr(1, 5))
    w = ValInfinity(XMAJOR, [(Fr(1, 2), 2)], Fr(1, 5))
    order, m = meet(u, w)
    assert order == "incomparable"
    assert m.same_valuation(monomial(-1, Fr(-1, 2)))


@pytest.mark.parametrize("v, a, A, m", [
    (MINUS_DEG, 1, -2, 1),
    (monomial(Fr(-1, 2), -1), Fr(1, 2), Fr(-3, 2), 1),
    (monomial(Fr(-1, 3), -1), Fr(1, 3), Fr(-4, 3), None),
])
def test_invariants_examples(v, a, A, m):
    inv = invariants(v)
    assert inv.alpha == a and inv.thinness == A
    if m is not None:
        assert inv.multiplicity == m


def test_irrational_monomial_invariants():
    s = sqrt_rat(Fr(2, 3))
    v = monomial(-s, -1)
    a, A = monomial_closed_form(v)
    assert sign(alpha(v) - a) == 0 and sign(thinness(v) - A) == 0


def test_v1_and_pencil_examples():
    assert in_V1(MINUS_DEG)
    pencil = monomial(0, -1)
    assert in_V1(pencil) and is_rational_pencil(pencil)
    assert not in_V1(monomial(1, -1))
    assert not is_rational_pencil(MINUS_DEG)
    assert not is_rational_pencil(monomial(Fr(-1, 2), -1))


def test_monomializable_examples():
    assert is_monomializable(MINUS_DEG)
    assert is_monomializable(monomial(Fr(-1, 2), -1))
    # pencil: A + m*alpha = -1 + 0
    assert is_monomializable(monomial(0, -1))


def test_monomializable_matches_strict_inequality():
    rng = random.Random(11)
    for _ in range(200):
        v = random_v1_monomial(rng)
        inv = invariants(v)
        assert is_monomializable(v) == (sign(inv.thinness + inv.multiplicity * inv.alpha) < 0)


def test_closed_form_matches_walk_on_random_monomials():
    rng = random.Random(5)
    for _ in range(100):
        v = random_v1_monomial(rng)
        a, A = monomial_closed_form(v)
        inv = invariants(v)
        assert inv.alpha == a and inv.thinness == A
        assert inv.alpha <= 1 and inv.thinness >= -2
        if not v.is_minus_deg:
            assert inv.alpha < 1 and inv.thinness > -2


polys = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-3, 3).filter(bool),
                        min_size=1, max_size=5).map(BiPoly)
fracs = st.fractions(min_value=0, max_value=1, max_denominator=9)
DATA = [
    ValInfinity(XMAJOR, [(Fr(1, 2), 1)], Fr(1, 3)),
    ValInfinity(YMAJOR, [(Fr(2, 3), -2), (Fr(1, 3), 1)], Fr(-1)),
    ValInfinity(XMAJOR, [(Fr(1), 3), (Fr(1, 2), 1)], Fr(-2, 5)),
]


@given(polys, polys, fracs, st.booleans(), st.integers(0, len(DATA)))
def test_eval_is_a_valuation(R, S, s, xmajor, which):
    v = DATA[which] if which < len(DATA) else (monomial(-1, -s) if xmajor else monomial(-s, -1))
    assert v.eval(R * S) == v.eval(R) + v.eval(S)
    if not (R + S).is_zero():
        assert sign(v.eval(R + S) - min(v.eval(R), v.eval(S), key=float)) >= 0
    assert min(v.eval(X), v.eval(Y)) == -1


def test_invariants_monotone_along_datum_extension():
    chain = [
        MINUS_DEG,
        monomial(-1, Fr(-1, 2)),
        ValInfinity(XMAJOR, [(Fr(1, 2), 1)], Fr(1, 3)),
        ValInfinity(XMAJOR, [(Fr(1, 2), 1), (Fr(1, 3), 2)], Fr(1, 5)),
        ValInfinity(XMAJOR, [(Fr(1, 2), 1), (Fr(1, 3), 2)], Fr(-1)),
    ]
    invs = [invariants(v) for v in chain]
    for a, b in zip(invs, invs[1:]):
        assert a.alpha > b.alpha and a.thinness < b.thinness
    for a, b in zip(chain, chain[1:]):
        assert leq(a, b) and not leq(b, a)


@given(fracs, fracs)
def test_meet_below_both_on_monomial_family(s, t):
    v, w = monomial(-1, -s), monomial(-1, -t)
    _, m = meet(v, w)
    for R in (X, Y, X + Y, X * Y, X ** 2 - Y ** 3):
        assert sign(m.eval(R) - v.eval(R)) <= 0 and sign(m.eval(R) - w.eval(R)) <= 0
    assert m.nu_y == min(v.nu_y, w.nu_y)
