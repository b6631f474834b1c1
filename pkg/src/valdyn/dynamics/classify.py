"""Jacobian formula, the degree-growth classification and toric tests."""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from ..errors import (DegenerateImage, Inconclusive, NoRecurrenceFound, NotAnEigenvaluation,
                      NotApplicable, NotCenteredAtInfinity, NotConverged, RefinementLimit)
from ..numeric import format_real, min_poly, quad, rational_roots, sign, ugcd
from ..poly import BiPoly, PolyMap, compose, jacobian_det, leading_part, topological_degree
from ..valtree import XMAJOR, ValInfinity, monomial, render, thinness
from .degrees import degree_sequence, detect_recurrence
from .eigen import certify_fixed, eigenvaluation
from .push import MAX_REFINE, d_of, pushforward

C1 = "C1-skew"
C2 = "C2-toric"
SMALL = "small-degree-lt"
AUTOMORPHISM = "automorphism-bounded"
GENERAL = "general"


def jacobian_formula_check(F: PolyMap, v: ValInfinity, max_refine=MAX_REFINE):
    """``(lhs, rhs, equal)`` for ``A(v) + v(JF) = d(F, v) * A(F.v)``."""
    lhs = thinness(v) + v.eval(jacobian_det(F))
    w = pushforward(F, v, max_refine=max_refine)
    rhs = d_of(F, v) * thinness(w)
    return lhs, rhs, sign(lhs - rhs) == 0


# ---------------------------------------------------------------------------
# Weighted projective extension


def _substituted(R: BiPoly, p, q):
    return BiPoly({(i * p, j * q): c for (i, j), c in R.terms.items()})


def _chart(R: BiPoly, var):
    """Univariate restriction (low degree first) to ``y = 1`` (var=0) or ``x = 1`` (var=1)."""
    out = {}
    for (i, j), c in R.terms.items():
        e = i if var == 0 else j
        out[e] = out.get(e, 0) + c
    n = max(out) if out else -1
    return [out.get(k, Fraction(0)) for k in range(n + 1)]


def extends_to_weighted_P2(F: PolyMap, p: int, q: int, max_refine=MAX_REFINE) -> bool:
    """Whether ``F`` extends to the weighted projective plane with weights ``(p, q)`` on ``(x, y)``.

    First checks that the monomial valuation ``nu(x) = -p/q, nu(y) = -1`` is
    fixed by ``F.``.  Then the weighted leading parts, made homogeneous by
    ``x -> x^p, y -> y^q``, must have no common zero off the origin: no
    common root in the chart ``y = 1`` and not both vanishing at ``[1:0]``.
    """
    if p < 1 or q < 1 or gcd(p, q) != 1:
        raise ValueError("need coprime positive weights")
    v = monomial(Fraction(-p, q), -1)
    try:
        fixed = certify_fixed(F, v, max_refine=max_refine)
    except DegenerateImage:
        fixed = False
    if not fixed:
        raise NotAnEigenvaluation(p, q)
    G1 = _substituted(leading_part(F.P, -p, -q), p, q)
    G2 = _substituted(leading_part(F.Q, -p, -q), p, q)
    if G1.is_zero() or G2.is_zero():
        return False
    if G1.coeff(G1.degree(), 0) == 0 and G2.coeff(G2.degree(), 0) == 0:
        return False
    g = ugcd(_chart(G1, 0), _chart(G2, 0))
    return len(g) <= 1


# ---------------------------------------------------------------------------
# The invariant segment of monomial valuations


class TFSegment:
    """Components of the set of monomial valuations fixed by ``F.``.

    Each component is a pair ``(lo, hi)`` of valuations (equal for a
    point).  Positions run through ``s`` in ``[0, 2]``: ``s <= 1`` is
    ``nu(x) = -s, nu(y) = -1`` and ``s >= 1`` is ``nu(x) = -1, nu(y) = s - 2``.
    """

    def __init__(self, components, positions):
        self.components = components
        self.positions = positions

    @property
    def is_singleton(self):
        return len(self.components) == 1 and self.components[0][0].same_valuation(self.components[0][1])

    def __str__(self):
        parts = []
        for lo, hi in self.components:
            if lo.same_valuation(hi):
                parts.append(f"{{{_weights(lo)}}}")
            else:
                parts.append(f"[{_weights(lo)} .. {_weights(hi)}]")
        return " ".join(parts) if parts else "empty"


def _weights(v):
    return f"nu(x)={format_real(v.nu_x)} nu(y)={format_real(v.nu_y)}"


def _at(s):
    if sign(s - 1) <= 0:
        return monomial(-s, -1) if sign(s) > 0 else monomial(0, -1)
    t = 2 - s
    return monomial(-1, -t) if sign(t) > 0 else monomial(-1, 0)


def _chart_weights(s):
    """Positive weights ``(u, w)`` with ``nu = (-u, -w)`` at position ``s``."""
    if sign(s - 1) <= 0:
        return s, Fraction(1)
    return Fraction(1), 2 - s


def _breakpoints(R: BiPoly):
    """Positions where two monomials of ``R`` tie for the weighted degree."""
    mons = list(R.terms)
    out = set()
    for a in range(len(mons)):
        for b in range(a + 1, len(mons)):
            (i, j), (k, l) = mons[a], mons[b]
            # y-major chart: i*t + j = k*t + l
            if i != k:
                t = Fraction(l - j, i - k)
                if 0 < t < 1:
                    out.add(t)
            # x-major chart: i + j*t = k + l*t
            if j != l:
                t = Fraction(k - i, j - l)
                if 0 < t < 1:
                    out.add(2 - t)
    return out


def _dominant(R: BiPoly, u, w):
    return max(R.terms, key=lambda m: float(m[0] * u + m[1] * w))


def _eigen_positions(M, lo, hi):
    """Positions in ``(lo, hi)`` of eigenrays of the 2x2 matrix ``M``."""
    (a, b), (c, d) = M
    tr, det = a + d, a * d - b * c
    disc = Fraction(tr * tr - 4 * det)
    if disc < 0:
        return []
    lams = {quad(Fraction(tr, 2), Fraction(1, 2), disc), quad(Fraction(tr, 2), Fraction(-1, 2), disc)}
    out = []
    for lam in lams:
        if b != 0:
            u, w = Fraction(b), lam - a
        elif c != 0:
            u, w = lam - d, Fraction(c)
        else:
            continue
        if sign(u) < 0 or sign(w) < 0:
            u, w = -u, -w
        if sign(u) < 0 or sign(w) < 0:
            continue
        if sign(u - w) <= 0:
            s = u / w
        else:
            s = 2 - w / u
        if sign(s - lo) > 0 and sign(hi - s) > 0:
            out.append(s)
    return out


def _is_fixed(F, s, max_refine):
    try:
        v = _at(s)
        return certify_fixed(F, v, max_refine=max_refine)
    except (DegenerateImage, NotCenteredAtInfinity, RefinementLimit):
        return False


def fixed_monomial_set(F: PolyMap, max_refine=MAX_REFINE) -> TFSegment:
    """All monomial valuations fixed by ``F.``, from the piecewise linear weight equations.

    Between consecutive tie positions the leading monomials of ``P`` and
    ``Q`` are fixed, so the weight map is a 2x2 matrix: either scalar (the
    whole interval solves the equations) or with isolated eigenrays.  Every
    candidate is confirmed by an exact pushforward; a scalar interval is
    confirmed at both ends and the middle.
    """
    cuts = sorted(_breakpoints(F.P) | _breakpoints(F.Q) | {Fraction(0), Fraction(1), Fraction(2)})
    pieces = []   # (lo, hi) exact positions, lo == hi for points
    for s in cuts:
        if _is_fixed(F, s, max_refine):
            pieces.append((s, s))
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        u, w = _chart_weights(mid)
        M = (_dominant(F.P, u, w), _dominant(F.Q, u, w))
        (a, b), (c, d) = M
        if b == 0 and c == 0 and a == d:
            if all(_is_fixed(F, s, max_refine) for s in (lo, mid, hi)):
                pieces.append((lo, hi))
                continue
        for s in _eigen_positions(M, lo, hi):
            if _is_fixed(F, s, max_refine):
                pieces.append((s, s))
    pieces.sort(key=lambda t: (float(t[0]), float(t[1])))
    merged = []
    for lo, hi in pieces:
        if merged and sign(lo - merged[-1][1]) <= 0:
            if sign(hi - merged[-1][1]) > 0:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    comps = [(_at(lo), _at(hi)) for lo, hi in merged]
    return TFSegment(comps, merged)


def tf_segment(F: PolyMap, N: int = 10, max_refine=MAX_REFINE, seed=None) -> TFSegment:
    """Monomial valuations fixed by ``F.`` when ``lambda2 = lambda1^2`` with bounded ``deg F^n / lambda1^n``."""
    lam2 = topological_degree(F, seed=seed)
    rec = detect_recurrence(degree_sequence(F, N, max_refine).degrees, 4)
    lam1 = rec.dominant_root
    if isinstance(lam1, float) or sign(lam1 * lam1 - lam2) != 0:
        raise NotApplicable("tf_segment needs lambda2 = lambda1^2")
    if rec.double_root:
        raise NotApplicable("degrees grow like n*lambda1^n: skew case, no invariant segment")
    seg = fixed_monomial_set(F, max_refine)
    if not seg.components:
        raise NotApplicable("no monomial valuation is fixed in the given coordinates")
    return seg


# ---------------------------------------------------------------------------
# Non-properness


def _monomial_d(F, wx, wy):
    low = Fraction(0)
    for R in (F.P, F.Q):
        for (i, j) in R.terms:
            val = i * wx + j * wy
            if val < low:
                low = val
    return -low


def non_properness_witness(F: PolyMap, bound: int = 20):
    """A valuation ``nu`` with ``d(F, nu) = 0``, or None when the search finds none.

    Searches monomial valuations with one weight ``-1`` and the other
    ``+-p/q`` (``q <= bound``, magnitude at most ``bound``), then data
    ``minor = c*major + theta*major^b`` along common rational lines of the
    leading forms of ``P`` and ``Q``.  Finding none proves nothing.
    """
    fracs = []
    for q in range(1, bound + 1):
        for p in range(0, bound * q + 1):
            if gcd(p, q) == 1:
                fracs.append(Fraction(p, q))
    fracs.sort(key=lambda f: (f.denominator, f))
    for f in fracs:
        for wx, wy in ((f, Fraction(-1)), (Fraction(-1), f), (-f, Fraction(-1)), (Fraction(-1), -f)):
            if f > 1 and (wx == -f or wy == -f):
                continue
            if _monomial_d(F, wx, wy) == 0:
                return monomial(wx, wy)
    # rational lines shared by the top homogeneous parts
    Pt = F.P.homogeneous_part(F.P.degree())
    Qt = F.Q.homogeneous_part(F.Q.degree())
    roots_p = set(rational_roots(_chart(Pt, 1)))
    roots_q = set(rational_roots(_chart(Qt, 1)))
    for c in sorted(roots_p & roots_q):
        if c == 0:
            continue
        for q in range(1, min(bound, 8) + 1):
            for p in range(-bound * q, q):
                if gcd(abs(p), q) != 1:
                    continue
                v = ValInfinity(XMAJOR, ((Fraction(1), c),), Fraction(p, q))
                try:
                    if sign(d_of(F, v)) == 0:
                        return v
                except Exception:
                    continue
    return None


# ---------------------------------------------------------------------------
# Classification


def _skew_form(F: PolyMap, lam1):
    """``P`` univariate in ``x`` and ``Q = A(x) y^lam1 + (lower in y)`` with ``deg A >= 1``."""
    if not isinstance(lam1, Fraction) and not isinstance(lam1, int):
        return False
    lam1 = Fraction(lam1)
    if lam1.denominator != 1:
        return False
    k = int(lam1)
    if F.P.degree_in(1) != 0 or F.P.degree() < 1:
        return False
    if F.Q.degree_in(1) != k:
        return False
    A = [i for (i, j) in F.Q.terms if j == k]
    return max(A) >= 1


def _bracket(r, maxden=100):
    """Stern-Brocot neighbours ``(p, q), (p', q')`` enclosing ``r`` in ``[0, 1]``."""
    lo, hi = (0, 1), (1, 1)
    while True:
        med = (lo[0] + hi[0], lo[1] + hi[1])
        if med[1] > maxden:
            return lo, hi
        c = sign(r - Fraction(*med))
        if c == 0:
            return med, med
        if c < 0:
            hi = med
        else:
            lo = med


class Classification:
    """Degree growth type of ``F`` with its supporting evidence."""

    def __init__(self, lambda1, lambda2, branch, case, degrees, recurrence, eigen,
                 toric=None, extends=None, skew_form=None, fan_rays=None):
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.branch = branch
        self.case = case
        self.degrees = degrees
        self.recurrence = recurrence
        self.eigen = eigen
        self.toric = toric
        self.extends = extends
        self.skew_form = skew_form
        self.fan_rays = fan_rays

    def render(self):
        rec = self.recurrence
        lines = [
            f"branch = {self.branch}",
            f"case = {self.case if self.case is not None else '-'}",
            f"lambda1 = {format_real(self.lambda1)}",
            f"lambda1_minpoly = {min_poly(self.lambda1)}",
            f"lambda2 = {self.lambda2}",
            f"degrees = {' '.join(str(a) for a in self.degrees)}",
            f"recurrence = {rec.formula()}",
            f"double_root = {'yes' if rec.double_root else 'no'}",
        ]
        if self.eigen is not None:
            lines.append(f"eigen_kind = {self.eigen.kind}")
            lines.append(f"nu_star = {render(self.eigen.nu_star)}")
        if self.skew_form is not None:
            lines.append(f"skew_form = {'yes' if self.skew_form else 'no'}")
        if self.toric is not None:
            lines.append(f"toric = {self.toric[0]},{self.toric[1]}")
        if self.fan_rays is not None:
            (p, q), (p2, q2) = self.fan_rays
            lines.append(f"fan_rays = {p},{q} {p2},{q2}")
        if self.extends is not None:
            lines.append(f"extends = {'yes' if self.extends else 'no'}")
        return "\n".join(lines)

    def __str__(self):
        return self.render()


def conjugate(F: PolyMap, phi: PolyMap, phi_inv: PolyMap) -> PolyMap:
    """``phi^-1 o F o phi`` after checking that the two maps are inverse."""
    if compose(phi_inv, phi) != PolyMap.identity():
        raise ValueError("the conjugating maps are not inverse to each other")
    return compose(phi_inv, compose(F, phi))


def classify(F: PolyMap, N: int = 12, max_order: int = 4, conj=None,
             max_refine=MAX_REFINE, seed=None) -> Classification:
    """Degree growth classification, computing ``lambda2`` before ``lambda1``.

    ``conj`` is an optional pair ``(phi, phi_inv)``; the analysis is then
    done on ``phi^-1 o F o phi``.  No coordinate change is searched for.
    """
    if conj is not None:
        F = conjugate(F, *conj)
    lam2 = topological_degree(F, seed=seed)
    degs = degree_sequence(F, N, max_refine).degrees
    try:
        rec = detect_recurrence(degs, max_order)
    except NoRecurrenceFound as err:
        raise Inconclusive(str(err)) from err
    lam1 = rec.dominant_root
    if isinstance(lam1, float):
        raise Inconclusive("dominant root of the recurrence is not a quadratic integer")
    try:
        eig = eigenvaluation(F, max_refine=max_refine)
    except NotConverged as err:
        eig = err.report
    bounded = sign(lam1 - 1) == 0 and not rec.double_root
    if bounded:
        return Classification(lam1, lam2, AUTOMORPHISM, None, degs, rec, eig)
    if sign(lam1 * lam1 - lam2) == 0:
        if rec.double_root:
            return Classification(lam1, lam2, C1, 1, degs, rec, eig, skew_form=_skew_form(F, lam1))
        toric = extends = rays = None
        nu = eig.nu_star if eig is not None else None
        if nu is not None and nu.is_monomial and eig.exact:
            u, w = -nu.nu_x, -nu.nu_y
            if nu.is_divisorial and sign(u) > 0 and sign(w) > 0:
                r = Fraction(u) / Fraction(w)
                toric = (r.numerator, r.denominator)
                try:
                    extends = extends_to_weighted_P2(F, *toric, max_refine=max_refine)
                except NotAnEigenvaluation:
                    extends = None
            elif not nu.is_divisorial:
                r = u / w if sign(u - w) <= 0 else w / u
                rays = _bracket(r)
        return Classification(lam1, lam2, C2, 2, degs, rec, eig, toric=toric, extends=extends,
                              fan_rays=rays)
    branch = SMALL if sign(lam2 - lam1) < 0 else GENERAL
    return Classification(lam1, lam2, branch, None, degs, rec, eig)
