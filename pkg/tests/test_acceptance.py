"""One test per acceptance criterion; each records a PASS/FAIL line for the terminal summary."""
import math
import random
import subprocess
import sys
import time
from fractions import Fraction as Fr

import pytest

from valdyn import fixture_path
from valdyn.blowup import is_tight, random_legal_chain, realize_divisorial
from valdyn.dynamics import (d_of, degree_sequence, degree_sequence_bruteforce, detect_recurrence,
                             eigenvaluation, extends_to_weighted_P2, jacobian_formula_check,
                             non_properness_witness, pushforward)
from valdyn.errors import NotAnEigenvaluation, RefinementLimit
from valdyn.green import green_value
from valdyn.numeric import min_poly, quad, sign, sqrt_rat
from valdyn.poly import monomial_map, topological_degree
from valdyn.valtree import XMAJOR, YMAJOR, ValInfinity, in_V1, invariants, random_v1_monomial

from conftest import ACCEPTANCE, FIXTURES, fmap

EX53_LISTED = [1, 3, 6, 11, 23, 46, 91, 183, 370]
PRIME = 2 ** 61 - 1


def record(num, title, ok, detail):
    ACCEPTANCE.append((num, title, ok, detail))
    print(f"{'PASS' if ok else 'FAIL'} [{num}] {title}: {detail}")
    return ok


# -- independent oracle: restrict F^n to a random line over Z/p ------------

def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % PRIME
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % PRIME for i in range(n)]


def _pdeg(a):
    for i in range(len(a) - 1, -1, -1):
        if a[i]:
            return i
    return -1


def line_degrees(N, seed=0):
    """deg F^n for F = (x(x - y^2), x + y), read off F^n restricted to a random line mod p."""
    rng = random.Random(seed)
    x = [rng.randrange(PRIME), rng.randrange(1, PRIME)]
    y = [rng.randrange(PRIME), rng.randrange(1, PRIME)]
    out = [1]
    for _ in range(N):
        yy = _pmul(y, y)
        x, y = _pmul(x, _padd(x, [(-c) % PRIME for c in yy])), _padd(x, y)
        out.append(max(_pdeg(x), _pdeg(y)))
    return out


# -- 1 ---------------------------------------------------------------------

def test_c1_example_end_to_end():
    F = fmap("ex53")
    t0 = time.perf_counter()
    degs = degree_sequence(F, 8).degrees
    rec = detect_recurrence(degree_sequence(F, 10).degrees, 4)
    lam2 = topological_degree(F, seed=1)
    elapsed = time.perf_counter() - t0
    oracle = line_degrees(8)
    ok = (degs == oracle and rec.order == 3 and rec.coeffs == (1, 1, 2) and rec.dominant_root == 2
          and rec.min_poly.coeffs == (1, -2) and lam2 == 3 and elapsed < 10)
    record(1, "Example map: degrees, recurrence, lambda2, runtime", ok,
           f"degrees={' '.join(map(str, degs))} (line oracle agrees: {degs == oracle}); "
           f"recurrence order {rec.order} coeffs {rec.coeffs} root {rec.dominant_root}; lambda2={lam2}; {elapsed:.2f}s < 10s")
    assert ok


@pytest.mark.xfail(strict=True, reason="listed ninth term 370 contradicts the cited recurrence: 183 + 91 + 2*46 = 366")
def test_c1_listed_ninth_term():
    degs = degree_sequence(fmap("ex53"), 8).degrees
    ok = degs == EX53_LISTED
    record(1, "Example map: literal listed sequence ending in 370", ok,
           f"computed {degs[-1]} for deg F^8; the listed recurrence forces 183+91+2*46=366, "
           f"independent line oracle gives {line_degrees(8)[-1]}")
    assert ok


# -- 2 ---------------------------------------------------------------------

def test_c2_bruteforce_equivalence():
    bad = [name for name in FIXTURES
           if degree_sequence(fmap(name), 3).degrees != degree_sequence_bruteforce(fmap(name), 3)]
    ok = not bad
    record(2, "degree_sequence = bruteforce for j <= 3 on all fixtures", ok,
           f"{len(FIXTURES)} fixtures, mismatches: {bad or 'none'}")
    assert ok


# -- 3 ---------------------------------------------------------------------

def test_c3_monomial_maps():
    rng = random.Random(303)
    done, failures = 0, []
    while done < 20:
        a, b, c, d = (rng.randint(0, 3) for _ in range(4))
        det = a * d - b * c
        if det == 0:
            continue   # not dominant
        done += 1
        F = monomial_map(a, b, c, d)
        tr = a + d
        rho = quad(Fr(tr, 2), Fr(1, 2), tr * tr - 4 * det)
        lam2 = topological_degree(F, seed=done)
        r = eigenvaluation(F)
        mp = min_poly(r.lambda1)
        good = (lam2 == abs(det) and sign(r.lambda1 - rho) == 0 and r.exact
                and mp.integral and mp.coeffs[0] == 1 and len(mp.coeffs) <= 3)
        if not good:
            failures.append((a, b, c, d))
    ok = not failures
    record(3, "monomial maps: lambda2 = |det|, lambda1 = spectral radius, integral min_poly", ok,
           f"20 matrices, failures: {failures or 'none'}")
    assert ok


# -- 4 ---------------------------------------------------------------------

def test_c4_jacobian_formula():
    rng = random.Random(404)
    failures, checked, skipped = [], 0, 0
    for name in FIXTURES:
        F = fmap(name)
        for _ in range(100):
            v = random_v1_monomial(rng)
            try:
                lhs, rhs, eq = jacobian_formula_check(F, v)
            except RefinementLimit:
                skipped += 1
                continue
            checked += 1
            if not eq:
                failures.append((name, str(v)))
    ok = not failures
    record(4, "Jacobian formula at random V1 monomial valuations", ok,
           f"{checked} checks over {len(FIXTURES)} fixtures, {len(failures)} failures, {skipped} refinement-limited")
    assert ok


# -- 5 ---------------------------------------------------------------------

def _random_v1_divisorial(rng):
    while True:
        if rng.random() < 0.5:
            return random_v1_monomial(rng)
        q = rng.randint(2, 7)
        b1 = Fr(rng.randint(1, q - 1), q)
        v = ValInfinity(rng.choice([XMAJOR, YMAJOR]), [(b1, rng.choice([1, -1, 2]))],
                        b1 - Fr(rng.randint(1, 6), rng.randint(1, 7)))
        if in_V1(v):
            return v


def test_c5_blowup_integrality_and_tightness():
    rng = random.Random(505)
    bad_records = 0
    for _ in range(200):
        g = random_legal_chain(rng, rng.randint(1, 12))
        for r in g.records.values():
            if (r.b * r.b * r.alpha).denominator != 1 or r.thinness != Fr(r.a, r.b):
                bad_records += 1
    not_tight = 0
    for _ in range(100):
        v = _random_v1_divisorial(rng)
        g, _ = realize_divisorial(v)
        if not all(is_tight(h) for h in g.steps()):
            not_tight += 1
    ok = bad_records == 0 and not_tight == 0
    record(5, "blowup integrality b^2*alpha in Z, A = a/b; realizations tight at every step", ok,
           f"200 chains: {bad_records} bad records; 100 realizations: {not_tight} non-tight")
    assert ok


# -- 6 ---------------------------------------------------------------------

def test_c6_v1_invariance():
    rng = random.Random(606)
    failures = []
    for name in FIXTURES:
        F = fmap(name)
        for _ in range(50):
            v = random_v1_monomial(rng)
            d = d_of(F, v)
            w = pushforward(F, v)
            if sign(d) <= 0 or not in_V1(w):
                failures.append((name, str(v)))
    ok = not failures
    record(6, "pushforward keeps V1 with d > 0", ok,
           f"{50 * len(FIXTURES)} pushforwards, failures: {failures[:3] or 'none'}")
    assert ok


# -- 7 ---------------------------------------------------------------------

def test_c7_classification():
    from valdyn.dynamics import classify
    c1 = classify(fmap("x2xy2"), seed=7)
    case1 = (c1.case == 1 and c1.recurrence.coeffs == (4, -4) and c1.recurrence.double_root
             and c1.degrees[:5] == [1, 3, 8, 20, 48])
    c2 = classify(fmap("x2py"), seed=7)
    case2 = c2.case == 2 and extends_to_weighted_P2(fmap("x2py"), 1, 1) is True
    try:
        extends_to_weighted_P2(fmap("y3x2"), 1, 1)
        raised = False
    except NotAnEigenvaluation:
        raised = True
    ok = case1 and case2 and raised
    record(7, "classification cases and weighted projective extension", ok,
           f"(x^2,xy^2) case {c1.case} rec {c1.recurrence.coeffs}; (x^2+y,y^2) case {c2.case} extends "
           f"{c2.extends}; (y^3,x^2) NotAnEigenvaluation: {raised}")
    assert ok


# -- 8 ---------------------------------------------------------------------

def test_c8_non_properness():
    w = non_properness_witness(fmap("xxy"), 20)
    found = w is not None and d_of(fmap("xxy"), w) == 0
    none_aut = non_properness_witness(fmap("aut"), 20) is None
    none_sq = non_properness_witness(fmap("x2y2"), 20) is None
    ok = found and none_aut and none_sq
    record(8, "non-properness witnesses", ok,
           f"(x,xy): {w}; (y,y^2-x): {'none' if none_aut else 'found'}; (x^2,y^2): {'none' if none_sq else 'found'}")
    assert ok


# -- 9 ---------------------------------------------------------------------

def test_c9_green_function(tmp_path):
    F = fmap("aut")
    rng = random.Random(909)
    worst, count = 0.0, 0
    while count < 100:
        p = (complex(rng.uniform(-4, 4), rng.uniform(-1, 1)), complex(rng.uniform(-4, 4), rng.uniform(-1, 1)))
        a = green_value(F, p, 2, n_max=40)
        if a.estimate == 0.0:
            continue
        b = green_value(F, F(*p), 2, n_max=40)
        worst = max(worst, abs(b.estimate - 2 * a.estimate))
        count += 1
    big = green_value(F, (0, 1e8), 2).estimate
    rel = abs(big - math.log(1e8)) / math.log(1e8)
    cmd = [sys.executable, "-m", "valdyn.cli", "green", "grid", str(fixture_path("aut")),
           "--window=-3,3,-3,3", "--resolution", "64", "--lambda1", "2"]
    t0 = time.perf_counter()
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    elapsed = time.perf_counter() - t0
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    rows = len(first.splitlines()) - 1
    ok = worst < 1e-6 and rel < 0.01 and elapsed < 30 and first == second and rows == 4096
    record(9, "Green function residual, large-y value, 64x64 grid", ok,
           f"max |G(F p) - 2G(p)| = {worst:.3g} over 100 samples; G(0,1e8) = {big:.6f} ({rel:.2%} off); "
           f"grid {rows} rows in {elapsed:.1f}s, identical reruns: {first == second}")
    assert ok


# -- 10 --------------------------------------------------------------------

def test_c10_eigen_surds():
    r = eigenvaluation(fmap("y2x3"))
    nu_ok = sign(r.nu_star.nu_x + sqrt_rat(Fr(2, 3))) == 0 and r.nu_star.nu_y == -1
    lam_ok = sign(r.lambda1 - sqrt_rat(6)) == 0
    ok = nu_ok and lam_ok and r.exact and r.fixed_point_residual == 0 and r.kind == "irrational"
    inv = invariants(r.nu_star)
    record(10, "irrational eigenvaluation with exact surds", ok,
           f"{r.summary()}; residual {'exact' if r.exact else r.depth}; alpha(nu*) = {inv.alpha}")
    assert ok
