"""Local degree ``d(F, v)`` and the normalized pushforward ``F.v``.

The image of a datum ``v`` is read off the arc ``(P(arc_v), Q(arc_v))``.
Its Puiseux datum is grown one term at a time.  For a prefix ``h`` the
key polynomial ``K_h``, the product of ``Y - h'(X)`` over the conjugates
``h'`` of ``h``, has a value on the image that pins down the next
exponent; the coefficient there is a common root, in every power of the
generic parameter, of the leading coefficient of ``K_{h + c X^b}`` along
the arc.  When no such root exists the image has a generic tail.  If the
major image coordinate has leading coefficient 1, ``Y - h(X)`` is
expanded on the arc directly with truncated binomial series instead.
"""
from __future__ import annotations

import math
from fractions import Fraction

import sympy

from .._series import CPoly, Series, cpoly_gcd, eval_floor
from ..errors import DegenerateImage, NestedExtension, RefinementLimit
from ..numeric import AlgElt, NumberField, coeff_field, is_rational, rational_roots, sign, uderiv, umul
from ..poly import BiPoly, PolyMap
from ..valtree import GENERIC, INFINITE, XMAJOR, YMAJOR, ValInfinity

MAX_REFINE = 32
WITNESS_DEGREE = 8


def d_of(F: PolyMap, v: ValInfinity):
    """``d(F, v) = -min(v(P), v(Q), 0)``."""
    vals = [v.eval(F.P), v.eval(F.Q), Fraction(0)]
    low = vals[0]
    for x in vals[1:]:
        if sign(x - low) < 0:
            low = x
    return -low


def image_arc(F: PolyMap, v: ValInfinity):
    X, Y = v.arc()
    one = Series.one(X.tau)
    return F.P.subs(X, Y, one=one), F.Q.subs(X, Y, one=one)


# ---------------------------------------------------------------------------
# Key polynomials of Puiseux prefixes


def _lpmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            v = out.get(e)
            out[e] = c1 * c2 if v is None else v + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def _lpadd(a, b, scale=1):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        v = c * scale if v is None else v + c * scale
        if v == 0:
            out.pop(e, None)
        else:
            out[e] = v
    return out


def conj_count(terms):
    N = 1
    for b, _ in terms:
        N = math.lcm(N, b.denominator)
    return N


def key_polynomial(terms):
    """``(K, N)`` where ``K`` is the monic minimal polynomial of ``Y - h(X)``.

    ``K`` is returned as a dict ``{(i, j): coeff}`` with ``i`` an integer
    power of ``X`` (possibly negative) and ``j`` the power of ``Y``.
    """
    N = conj_count(terms)
    h = {b: c for b, c in terms}
    # power sums of the conjugates: N times the integral-exponent part of h^m
    p = [None]
    hp = {Fraction(0): Fraction(1)}
    for _ in range(N):
        hp = _lpmul(hp, h)
        p.append({int(e): c * N for e, c in hp.items() if e.denominator == 1})
    # Newton identities for the elementary symmetric functions
    e = [{0: Fraction(1)}]
    for k in range(1, N + 1):
        acc = {}
        for i in range(1, k + 1):
            term = _lpmul(e[k - i], p[i])
            acc = _lpadd(acc, term, 1 if i % 2 == 1 else -1)
        e.append({x: c / k for x, c in acc.items()})
    K = {}
    for k in range(N + 1):
        sgn = -1 if k % 2 else 1
        for i, c in e[k].items():
            K[(i, N - k)] = c * sgn if sgn < 0 else c
    return {m: c for m, c in K.items() if c != 0}, N


def shifted(K):
    shift = max(0, -min(i for i, _ in K))
    return BiPoly({(i + shift, j): c for (i, j), c in K.items()}), shift


def conj_correction(terms, N):
    """Sum over nontrivial conjugates of the top exponent of ``h - h'``."""
    total = Fraction(0)
    for k in range(1, N):
        best = None
        for b, _ in terms:
            if (k * int(b * N)) % N != 0 and (best is None or b > best):
                best = b
        total += best
    return total


def _as_xy(K: BiPoly, chart):
    if chart == XMAJOR:
        return K
    return BiPoly({(j, i): c for (i, j), c in K.terms.items()})


# ---------------------------------------------------------------------------
# Roots of the tie polynomial


def _real_root_approx(modulus):
    c = sympy.Symbol("c")
    poly = sympy.Poly([sympy.Rational(x.numerator, x.denominator) for x in reversed(modulus)], c)
    roots = [r for r in poly.nroots(n=30) if abs(sympy.im(r)) < 1e-20]
    if not roots:
        return None
    return float(max(sympy.re(r) for r in roots))


def _choose_root(g, field):
    """A nonzero root of the monic polynomial ``g`` (coefficient list), or None.

    Returns ``(root, field)``; a new quadratic or higher extension is
    created when needed and none is active yet.
    """
    if len(g) <= 1:
        return None, field
    if len(g) == 2:
        r = -g[0] / g[1]
        return (r if r != 0 else None), field
    if all(not isinstance(x, AlgElt) or x.is_rational() for x in g):
        g = [x if not isinstance(x, AlgElt) else (x.c[0] if x.c else Fraction(0)) for x in g]
        roots = [r for r in rational_roots(g) if r != 0]
        if roots:
            pos = [r for r in roots if r > 0]
            return (max(pos) if pos else max(roots)), field
        if field is not None:
            raise NestedExtension("tie coefficient needs a second algebraic extension")
        c = sympy.Symbol("c")
        poly = sympy.Poly([sympy.Rational(x.numerator, x.denominator) for x in reversed(g)], c)
        factors = [f for f, _ in poly.factor_list()[1] if f.degree() >= 2]
        if not factors:
            return None, field
        f = min(factors, key=lambda f: f.degree())
        coeffs = [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in reversed(f.all_coeffs())]
        K = NumberField(coeffs, name="a", real_root=_real_root_approx(coeffs))
        return K.gen, K
    raise NestedExtension("tie coefficient needs a second algebraic extension")


# ---------------------------------------------------------------------------
# Pushforward


def pushforward(F: PolyMap, v: ValInfinity, max_refine: int = MAX_REFINE, method: str = "auto",
                _arc=None):
    """The normalized image valuation ``F_* v / d(F, v)``.

    The result carries the key polynomials used along the way in its
    ``witnesses`` attribute (on the binomial-series route only those of
    degree at most ``WITNESS_DEGREE`` in the minor variable); the identity
    ``eval(F.v, R) = eval(v, R o F) / d`` holds for each of them.
    ``method="key"`` forces the key-polynomial route throughout.
    """
    if method not in ("auto", "key"):
        raise ValueError(f"unknown method {method!r}")
    U, W = _arc if _arc is not None else image_arc(F, v)
    tu, tw = U.top_exponent(), W.top_exponent()
    cands = [Fraction(0)] + [t for t in (tu, tw) if t is not None]
    d = cands[0]
    for t in cands[1:]:
        if sign(t - d) > 0:
            d = t
    if sign(d) <= 0:
        raise DegenerateImage("d(F, v) = 0: the image valuation is trivial")
    # tie goes to the x-major chart
    if tu is not None and (tw is None or sign(tu - tw) >= 0):
        chart, Xs, Ys = XMAJOR, U, W
    else:
        chart, Xs, Ys = YMAJOR, W, U
    if Ys.top_exponent() is None:
        # the minor coordinate vanishes on the arc: a curve image
        raise DegenerateImage("image arc lies on a coordinate axis")
    terms = []
    field = coeff_field(*(c for c in v.terms))
    witnesses = []
    cX = _theta_poly(Xs.top()[1])
    direct = method == "auto" and cX == [1] and is_rational(d) and field is None
    for _step in range(max_refine):
        if direct and terms:
            if conj_count(terms) <= WITNESS_DEGREE:
                witnesses.append(_as_xy(shifted(key_polynomial(terms)[0])[0], chart))
            beta, coeff = _direct_step(Xs, Ys, d, terms)
            if beta is None:
                direct = False
            else:
                if sign(beta - terms[-1][0]) >= 0:
                    raise RuntimeError("pushforward refinement produced a non-decreasing exponent")
                if coeff is None:
                    return _finish(chart, terms, beta, d, witnesses)
                terms.append((beta, coeff))
                continue
        K, N = key_polynomial(terms) if terms else ({(0, 1): Fraction(1)}, 1)
        Ks, shift = shifted(K)
        witnesses.append(_as_xy(Ks, chart))
        if terms:
            base = shift + conj_correction(terms, N) + terms[-1][0]
            E, Tdict = _top_adaptive(Ks, Xs, Ys, d, base)
        else:
            E, Tdict = Ys.top()
        eK = E / d - shift
        beta = eK - conj_correction(terms, N) if terms else eK
        if terms and sign(beta - terms[-1][0]) >= 0:
            raise RuntimeError("pushforward refinement produced a non-decreasing exponent")
        if not is_rational(beta):
            return _finish(chart, terms, beta, d, witnesses)
        T = _theta_poly(Tdict)
        # the coefficient at beta is theta-free iff T is a constant times cX^eK
        if umul(uderiv(T), cX) != umul([eK * x for x in uderiv(cX)], T):
            return _finish(chart, terms, beta, d, witnesses)
        root = _direct_coefficient(terms, K, T, cX, eK)
        if root is None:
            fam = terms + [(beta, CPoly([Fraction(0), Fraction(1)]))]
            Kc, _ = key_polynomial(fam)
            Kcs, shift_c = shifted(Kc)
            generic = d * (shift_c + beta + conj_correction(fam, conj_count(fam)))
            Sc = eval_floor(Kcs, Xs, Ys, generic)
            top = _exact_top(Sc, generic)
            g = cpoly_gcd(list(top[1].values())) if top is not None else []
            if top is None or sign(top[0] - generic) != 0:
                raise RuntimeError("tie family has an unexpected generic value")
            root, field = _choose_root(g, field)
        if root is None:
            return _finish(chart, terms, beta, d, witnesses)
        terms.append((beta, root))
    partial = ValInfinity(chart, terms, terms[-1][0] - 1, INFINITE, depth=max_refine, witnesses=witnesses)
    raise RefinementLimit(max_refine, partial)


def _eps_powers(eps, floor):
    """``[eps^0, eps^1, ...]`` truncated below ``floor``; ``eps`` has only negative exponents."""
    pows = [Series.one(eps.tau)]
    if not eps.t:
        return pows
    top = eps.ftop()
    k = 0
    while True:
        k += 1
        if k * top < floor - 1e-9:
            break
        nxt = pows[-1].mul_floor(eps, floor)
        if not nxt.t:
            break
        pows.append(nxt)
    return pows


def _power_sum(pows, beta, shift, floor, acc, scale):
    """Add ``scale * M^shift * (1 + eps)^beta`` (exponents at least ``floor``) into ``acc``."""
    coef = Fraction(1)
    for k, pw in enumerate(pows):
        if k:
            coef = coef * (beta - k + 1) / k
            if coef == 0:
                break
        f = coef * scale
        for (q, kk), v in pw.t.items():
            key = (q + shift, kk)
            if pw.fexp((q, kk)) + float(shift) < floor - 1e-9:
                continue
            old = acc.get(key)
            acc[key] = v * f if old is None else old + v * f


def _direct_step(Xs, Ys, d, terms, gap=None, tries=12):
    """Next ``(exponent, coeff or None)`` of the image datum by expanding ``Y - h(X)`` on the arc.

    Valid when the leading coefficient of ``Xs`` is exactly 1, so every
    ``X^b`` is ``M^(d*b) (1 + eps)^b`` with a rational binomial series.
    The expansion floor starts ``gap`` below the last exponent (by default
    the spacing of the last two exponents) and is lowered until something
    survives.  Returns ``(None, None)`` if the expansion is not representable.
    """
    q0 = d
    lead = Series.monomial(q0, tau=Xs.tau)
    eps = Xs + (-lead)
    eps.t = {(q - q0, k): c for (q, k), c in eps.t.items()}
    last = terms[-1][0]
    if gap is None:
        gap = terms[-2][0] - last if len(terms) > 1 else Fraction(1)
    bmax = terms[0][0]
    for _ in range(tries):
        floor = d * (last - gap)
        fl = float(floor)
        pows = _eps_powers(eps, fl - float(d * bmax))
        acc = dict(Ys.truncate(fl - 1e-9).t)
        for b, c in terms:
            _power_sum(pows, b, d * b, fl, acc, -c)
        S = Series(None, Xs.tau)
        S.t = {k: v for k, v in acc.items() if v != 0}
        top = _exact_top(S, floor)
        if top is not None:
            E, tdict = top
            beta = E / d
            if not is_rational(beta):
                return beta, None
            if set(tdict) == {0}:
                return beta, tdict[0]
            return beta, None
        gap *= 4
    return None, None


def _exact_top(S, floor):
    """Top of the exact part (exponents at least ``floor``) of a truncated series."""
    keep = Series(None, S.tau)
    keep.t = {k: v for k, v in S.t.items() if sign(S.exponent(k) - floor) >= 0}
    return keep.top()


def _top_adaptive(K, Xs, Ys, d, base, tries=12):
    """Top of ``K(Xs, Ys)``, guessing the next exponent lies within ``gap`` below the last one."""
    gap = Fraction(1)
    for _ in range(tries):
        floor = d * (base - gap)
        top = _exact_top(eval_floor(K, Xs, Ys, floor), floor)
        if top is not None:
            return top
        gap *= 4
    raise RuntimeError("key polynomial vanishes along the arc")


def _theta_poly(tdict):
    """Coefficient list in theta from a ``{power: coeff}`` dict."""
    n = max(tdict)
    out = [Fraction(0)] * (n + 1)
    for k, c in tdict.items():
        out[k] = c
    return out


def _branch_derivative_lead(terms, K):
    """Leading coefficient of ``dK/dY`` at ``Y = h(X)``: the product of ``h - h'`` over nontrivial conjugates."""
    h = {b: c for b, c in terms}
    total = {}
    powers = {0: {Fraction(0): Fraction(1)}}
    for (i, j), c in K.items():
        if j == 0:
            continue
        for k in range(1, j):
            if k not in powers:
                powers[k] = _lpmul(powers[k - 1], h)
        term = {e + i: x * c * j for e, x in powers[j - 1].items()}
        total = _lpadd(total, term)
    if not total:
        return None
    top = max(total)
    return total[top]


def _direct_coefficient(terms, K, T, cX, eK):
    """The theta-free coefficient ``T / (Pi * cX^eK)`` when it is computable in the base field."""
    if len(T) != 1 or len(cX) != 1:
        return None
    cx = cX[0]
    if cx == 1:
        scale = Fraction(1)
    else:
        if isinstance(cx, AlgElt) or not is_rational(eK):
            return None
        from ..numeric import integer_nth_root
        num, den = eK.numerator, eK.denominator
        base = integer_nth_root(cx ** abs(num), den) if cx > 0 or den % 2 else None
        if base is None:
            return None
        scale = base if num >= 0 else 1 / base
    pi = _branch_derivative_lead(terms, K) if terms else Fraction(1)
    if pi is None or pi == 0:
        return None
    return T[0] / (pi * scale)


def _finish(chart, terms, tail, d, witnesses):
    if chart == YMAJOR and not terms and tail == 1:
        chart = XMAJOR
    v = ValInfinity(chart, terms, tail, GENERIC, witnesses=witnesses)
    v.normalizer = d
    return v


def pushforward_with_d(F: PolyMap, v: ValInfinity, max_refine: int = MAX_REFINE):
    mu = pushforward(F, v, max_refine)
    return mu, mu.normalizer
