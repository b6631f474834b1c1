"""Eigenvaluations: fixed points of the normalized pushforward in V1."""
from __future__ import annotations

from fractions import Fraction

from ..errors import DegenerateImage, NotCenteredAtInfinity, NotConverged, RefinementLimit
from ..numeric import format_real, min_poly, quad, sign
from ..poly import PolyMap, X, Y
from ..valtree import MINUS_DEG, YMAJOR, in_V1, monomial, render
from .push import MAX_REFINE, d_of, pushforward

DIVISORIAL = "divisorial"
IRRATIONAL = "irrational"
TRUNCATED = "infinitely-singular-truncated"


class EigenReport:
    """Outcome of :func:`eigenvaluation`.

    Attributes
    ----------
    nu_star : ValInfinity
    lambda1 : Fraction or QuadReal
    kind : {"divisorial", "irrational", "infinitely-singular-truncated"}
    exact : bool
        True when ``F.nu_star = nu_star`` was checked exactly.
    depth : int
        Number of stable datum terms behind a truncated report (0 when exact).
    iterations : int
    """

    def __init__(self, nu_star, lambda1, kind, exact, depth, iterations):
        self.nu_star = nu_star
        self.lambda1 = lambda1
        self.kind = kind
        self.exact = exact
        self.depth = depth
        self.iterations = iterations

    @property
    def fixed_point_residual(self):
        return 0 if self.exact else self.depth

    def summary(self):
        v = self.nu_star
        if v.is_monomial:
            # the major variable always has weight -1; show the other one
            w = f"nu(x)={format_real(v.nu_x)}" if v.chart == YMAJOR else f"nu(y)={format_real(v.nu_y)}"
            return f"kind={self.kind} {w} lambda1={format_real(self.lambda1)}"
        return f"kind={self.kind} nu=[{render(v)}] lambda1={format_real(self.lambda1)}"

    def render(self):
        mp = min_poly(self.lambda1)
        lines = [
            f"kind = {self.kind}",
            f"nu_star = {render(self.nu_star)}",
            f"lambda1 = {format_real(self.lambda1)}",
            f"lambda1_minpoly = {mp}",
            f"residual = {'exact' if self.exact else 'truncated depth ' + str(self.depth)}",
            f"iterations = {self.iterations}",
        ]
        return "\n".join(lines)

    def __str__(self):
        return self.summary()


def _kind(v):
    return DIVISORIAL if v.is_divisorial else IRRATIONAL


def certify_fixed(F: PolyMap, v, lam=None, max_refine=MAX_REFINE) -> bool:
    """Exact check of ``F.v = v`` on ``x``, ``y`` and the witnesses, plus ``d(F, v) = lam``."""
    try:
        w = pushforward(F, v, max_refine=max_refine)
    except (DegenerateImage, RefinementLimit):
        return False
    if not w.same_valuation(v):
        return False
    for R in (X, Y) + tuple(w.witnesses) + tuple(v.witnesses):
        if sign(w.eval(R) - v.eval(R)) != 0:
            return False
    return lam is None or sign(d_of(F, v) - lam) == 0


def _perron(M):
    """Largest eigenvalue of a nonnegative 2x2 integer matrix with a nonnegative eigenvector."""
    (a, b), (c, d) = M
    tr, det = a + d, a * d - b * c
    disc = Fraction(tr * tr - 4 * det)
    lam = quad(Fraction(tr, 2), Fraction(1, 2), disc) if disc > 0 else Fraction(tr, 2)
    if lam == 0:
        return None
    if b != 0:
        u, w = Fraction(b), lam - a
    elif c != 0:
        u, w = lam - d, Fraction(c)
    elif a == d:
        u, w = Fraction(1), Fraction(1)
    elif sign(lam - a) == 0:
        u, w = Fraction(1), Fraction(0)
    else:
        u, w = Fraction(0), Fraction(1)
    if sign(u) < 0 or sign(w) < 0:
        u, w = -u, -w
    if sign(u) < 0 or sign(w) < 0:
        return None
    return lam, (u, w)


def monomial_candidates(F: PolyMap):
    """Monomial valuations solving the weight equations of some pair of monomials of ``P`` and ``Q``."""
    seen = []
    out = []
    for (i, j) in F.P.terms:
        for (k, l) in F.Q.terms:
            res = _perron(((i, j), (k, l)))
            if res is None:
                continue
            lam, (u, w) = res
            try:
                v = monomial(-u, -w)
            except NotCenteredAtInfinity:
                continue
            if any(v == s for s in seen):
                continue
            seen.append(v)
            out.append(v)
    return out


def solve_monomial_fixed(F: PolyMap, max_refine=MAX_REFINE):
    """Exactly verified monomial fixed points in V1, best (largest local degree) first."""
    found = []
    for v in monomial_candidates(F):
        if not in_V1(v):
            continue
        try:
            d = d_of(F, v)
        except Exception:
            continue
        if sign(d) <= 0:
            continue
        if certify_fixed(F, v, d, max_refine):
            found.append((d, v))
    found.sort(key=lambda t: -float(t[0]))
    return found


def _common_prefix(vs):
    first = vs[0]
    if any(w.chart != first.chart for w in vs):
        return 0
    n = 0
    for items in zip(*(w.terms for w in vs)):
        if all(it == items[0] for it in items):
            n += 1
        else:
            break
    return n


def eigenvaluation(F: PolyMap, max_iter: int = 40, max_refine: int = MAX_REFINE,
                   probe: int = 8, depth: int = 6) -> EigenReport:
    """Fixed point of ``F.`` reached from ``-deg``.

    The orbit of ``-deg`` is followed for ``probe`` steps looking for an exact
    fixed point.  Next the weight equations of monomial pairs are solved
    and checked exactly.  Failing both, the orbit is followed until the datum
    prefix shared by three consecutive iterates reaches ``depth`` terms while
    still growing, which is reported as a truncated infinitely singular
    limit.
    """
    v = MINUS_DEG
    orbit = [v]
    for it in range(1, min(probe, max_iter) + 1):
        w = pushforward(F, v, max_refine=max_refine)
        if w.same_valuation(v):
            d = d_of(F, v)
            if certify_fixed(F, v, d, max_refine):
                return EigenReport(v, d, _kind(v), True, 0, it)
        v = w
        orbit.append(v)

    fixed = solve_monomial_fixed(F, max_refine)
    if fixed:
        d, nu = fixed[0]
        return EigenReport(nu, d, _kind(nu), True, 0, len(orbit) - 1)

    last_len = -1
    it = len(orbit) - 1
    while it < max_iter:
        w = pushforward(F, v, max_refine=max_refine)
        it += 1
        orbit.append(w)
        v = w
        if len(orbit) >= 3:
            n = _common_prefix(orbit[-3:])
            if n >= depth and n > last_len >= 0:
                ds = [d_of(F, u) for u in orbit[-3:]]
                if all(sign(x - ds[-1]) == 0 for x in ds):
                    return EigenReport(v, ds[-1], TRUNCATED, False, n, it)
            last_len = n
    d = d_of(F, v)
    raise NotConverged(max_iter, EigenReport(v, d, TRUNCATED, False, 0, it))
