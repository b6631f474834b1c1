import random
from fractions import Fraction as Fr

import pytest

from valdyn.blowup import (DualGraph, blowup_free, blowup_satellite, euclid_walk, intersect, is_tight,
                           legal_next, random_legal_chain, realize_divisorial, weights_of)
from valdyn.errors import NotAdjacent, NotDivisorial, UnknownPrime
from valdyn.numeric import sqrt_rat
from valdyn.valtree import MINUS_DEG, XMAJOR, YMAJOR, ValInfinity, alpha, in_V1, invariants, monomial, random_v1_monomial


def numbers(r):
    return (r.b, r.a, r.alpha, r.thinness)


def test_free_blowup_examples():
    g = DualGraph()
    g1, p = blowup_free(g, 0)
    assert numbers(g1[p]) == (1, -1, 0, -1)
    g2, q = blowup_free(g1, p)
    assert numbers(g2[q]) == (1, 0, -1, 0)
    g3, r = blowup_free(g1, 0)
    assert numbers(g3[r]) == numbers(g1[p]) and r != p
    assert g1.neighbors(p) == [0]
    with pytest.raises(UnknownPrime):
        blowup_free(g, 7)


def test_satellite_examples():
    g, p = blowup_free(DualGraph(), 0)
    g, s = blowup_satellite(g, 0, p)
    r = g[s]
    assert numbers(r) == (2, -3, Fr(1, 2), Fr(-3, 2))
    assert abs(r.alpha - 1) == Fr(1, 1 * 2) and abs(r.alpha - 0) == Fr(1, 1 * 2)
    assert not g.adjacent(0, p) and g.neighbors(s) == [0, p]
    g, t = blowup_satellite(g, s, p)
    assert numbers(g[t]) == (3, -4, Fr(1, 3), Fr(-4, 3))
    with pytest.raises(NotAdjacent):
        blowup_satellite(g, 0, 0)
    with pytest.raises(NotAdjacent):
        blowup_satellite(g, 0, p)


def test_tightness_examples():
    g = DualGraph()
    assert is_tight(g)
    g1, p = blowup_free(g, 0)
    g2, _ = blowup_free(g1, p)
    assert not is_tight(g2)
    assert not legal_next(g1, p)
    g3, _ = blowup_satellite(g1, 0, p)
    assert is_tight(g3)


def test_dump_format():
    g, p = blowup_free(DualGraph(), 0)
    g, _ = blowup_satellite(g, 0, p)
    assert g.dump() == ("0 1 -2 1 -2 neighbors=[2]\n"
                        "1 1 -1 0 -1 neighbors=[2]\n"
                        "2 2 -3 1/2 -3/2 neighbors=[0,1]")


def test_random_chains_integrality_and_tightness():
    rng = random.Random(2024)
    for _ in range(200):
        g = random_legal_chain(rng, rng.randint(1, 12))
        for r in g.records.values():
            assert (r.b * r.b * r.alpha).denominator == 1
            assert r.thinness == Fr(r.a, r.b)
        assert is_tight(g)


@pytest.mark.parametrize("v, length, b, a", [
    (monomial(Fr(-1, 2), -1), 3, 2, -3),
    (MINUS_DEG, 1, 1, -2),
    (monomial(Fr(-1, 3), -1), 4, 3, -4),
])
def test_realize_examples(v, length, b, a):
    g, E = realize_divisorial(v)
    assert len(g.order) == length  # root included
    assert (g[E].b, g[E].a) == (b, a)


def _random_divisorial(rng):
    if rng.random() < 0.5:
        return random_v1_monomial(rng)
    q = rng.randint(2, 6)
    b1 = Fr(rng.randint(1, q - 1), q)
    t = b1 - Fr(rng.randint(1, 8), rng.randint(1, 6))
    return ValInfinity(rng.choice([XMAJOR, YMAJOR]), [(b1, rng.choice([1, -2, 3]))], t)


def test_realization_tight_at_every_step_and_weights_integral():
    rng = random.Random(9)
    seen = 0
    for _ in range(300):
        v = _random_divisorial(rng)
        g, E = realize_divisorial(v)
        inv = invariants(v)
        assert g[E].alpha == inv.alpha and g[E].thinness == inv.thinness
        bx, by = weights_of(g, E, v)
        assert Fr(bx).denominator == 1 and Fr(by).denominator == 1
        if in_V1(v):
            seen += 1
            assert all(is_tight(h) for h in g.steps())
    assert seen > 100


def test_alpha_monotone_along_chain_above_a_prime():
    g, p = blowup_free(DualGraph(), 0)
    prev = g[p]
    for _ in range(6):
        g, p = blowup_free(g, p) if prev.alpha > 0 and prev.thinness < 0 else (g, p)
        g, s = blowup_satellite(g, p, g.neighbors(p)[0])
        r = g[s]
        assert r.alpha < g[g.neighbors(s)[0]].alpha or r.alpha < g[g.neighbors(s)[1]].alpha
        prev = r
        p = s


def test_irrational_walk_has_segment():
    v = monomial(-sqrt_rat(Fr(2, 3)), -1)
    w = euclid_walk(v)
    assert w.last < 0 and len(w.segment) == 2
    with pytest.raises(NotDivisorial):
        realize_divisorial(v)


def test_intersect_examples():
    w = monomial(Fr(-1, 3), -1)
    assert intersect(MINUS_DEG, w) == 1
    assert intersect(w, w) == alpha(w)
    assert intersect(w, monomial(Fr(-1, 2), -1)) == Fr(1, 2)
    # branching data meet below both
    u = ValInfinity(XMAJOR, [(Fr(1, 2), 1)], Fr(1, 5))
    z = ValInfinity(XMAJOR, [(Fr(1, 2), 2)], Fr(1, 5))
    assert intersect(u, z) == alpha(monomial(-1, Fr(-1, 2)))
