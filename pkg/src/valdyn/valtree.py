"""Valuations centered at infinity on C[x, y].

A valuation is stored as a Puiseux datum in one of two charts.  In the
``x-major`` chart

    y = a_1 x^b_1 + ... + a_n x^b_n + theta * x^tau

with ``b_1 > ... > b_n > tau`` and ``theta`` generic; the ``y-major``
chart swaps the roles of ``x`` and ``y``.  The value of a polynomial is
minus the top exponent (in the major variable) after substitution.  The
major variable always has value ``-1``, so stored data are normalized.

Canonical form: in the ``x-major`` chart every exponent is ``<= 1``; in
the ``y-major`` chart every exponent is ``< 1``.  The root ``-deg`` is the
``x-major`` datum with no terms and ``tau = 1``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from ._series import Series
from .errors import NotCenteredAtInfinity, NotDivisorial, TruncatedDatum, ZeroPolynomial
from .numeric import as_rat, format_coeff, format_real, is_rational, sign, QuadReal

XMAJOR = "x-major"
YMAJOR = "y-major"
GENERIC = "generic"
CURVE = "curve"
INFINITE = "infinite"

INF = math.inf


def _exp(e):
    if isinstance(e, QuadReal):
        return e
    return as_rat(e)


class ValInfinity:
    """A normalized valuation centered at infinity.

    Parameters
    ----------
    chart : {"x-major", "y-major"}
    terms : sequence of (exponent, coeff)
        Strictly decreasing rational exponents with nonzero coefficients.
    tail : Fraction or QuadReal
        Exponent of the generic (or curve) tail, below every term exponent.
    tail_kind : {"generic", "curve", "infinite"}
    tail_coeff : coefficient of a curve tail.
    normalizer : scale that was divided out of the raw input (informational).
    depth : number of refinement steps behind an ``infinite`` truncation.
    """

    __slots__ = ("chart", "terms", "tail", "tail_kind", "tail_coeff", "normalizer", "depth", "witnesses")

    def __init__(self, chart, terms=(), tail=1, tail_kind=GENERIC, tail_coeff=None,
                 normalizer=1, depth=0, witnesses=()):
        if chart not in (XMAJOR, YMAJOR):
            raise ValueError(f"unknown chart {chart!r}")
        terms = tuple((as_rat(b), c) for b, c in terms)
        tail = _exp(tail)
        prev = None
        for b, c in terms:
            if c == 0:
                raise ValueError("zero coefficient in a datum")
            if prev is not None and b >= prev:
                raise ValueError("datum exponents must be strictly decreasing")
            prev = b
        if prev is not None and sign(tail - prev) >= 0:
            raise ValueError("tail exponent must lie below the last term")
        first = terms[0][0] if terms else tail
        limit_ok = sign(first - 1) <= 0 if chart == XMAJOR else sign(first - 1) < 0
        if not limit_ok:
            raise ValueError("datum is not in canonical form for its chart")
        if tail_kind not in (GENERIC, CURVE, INFINITE):
            raise ValueError(f"unknown tail kind {tail_kind!r}")
        if tail_kind == CURVE:
            if tail_coeff is None or tail_coeff == 0 or not is_rational(tail):
                raise ValueError("a curve tail needs a nonzero coefficient and rational exponent")
        self.chart = chart
        self.terms = terms
        self.tail = tail
        self.tail_kind = tail_kind
        self.tail_coeff = tail_coeff
        self.normalizer = normalizer
        self.depth = depth
        self.witnesses = tuple(witnesses)

    # -- constructors ------------------------------------------------
    @classmethod
    def minus_deg(cls):
        return cls(XMAJOR, (), Fraction(1))

    @classmethod
    def monomial(cls, wx, wy):
        """Monomial valuation from raw weights ``(nu(x), nu(y))`` (normalized on the way)."""
        return normalize(wx, wy)

    @classmethod
    def datum(cls, chart, terms, tail, tail_kind=GENERIC, tail_coeff=None):
        return cls(chart, terms, tail, tail_kind, tail_coeff)

    # -- structure ---------------------------------------------------
    @property
    def is_monomial(self):
        return not self.terms and self.tail_kind == GENERIC

    @property
    def is_minus_deg(self):
        return self.chart == XMAJOR and not self.terms and self.tail == 1 and self.tail_kind == GENERIC

    @property
    def is_divisorial(self):
        return self.tail_kind == GENERIC and is_rational(self.tail)

    @property
    def is_quasimonomial(self):
        return self.tail_kind == GENERIC

    @property
    def truncated(self):
        return self.tail_kind == INFINITE

    def major_minor(self):
        return ("x", "y") if self.chart == XMAJOR else ("y", "x")

    def with_terms(self, terms, tail, tail_kind=GENERIC, tail_coeff=None):
        return ValInfinity(self.chart, terms, tail, tail_kind, tail_coeff)

    def local_exponents(self):
        """Exponents in the local coordinate ``w = minor/major`` at the point of the line at infinity.

        Returns ``(term_gammas, tail_gamma)`` with ``gamma = 1 - exponent``;
        the point of the line at infinity is ``w = 0`` or ``w = a`` when a
        term of exponent one is present.
        """
        return [1 - b for b, _ in self.terms], 1 - self.tail

    # -- evaluation ----------------------------------------------------
    def arc(self):
        """Substitution series ``(X(M), Y(M))`` realizing this datum."""
        minor = {}
        for b, c in self.terms:
            minor[(b, 0)] = c
        tau = None
        if self.tail_kind == CURVE:
            minor[(as_rat(self.tail), 0)] = self.tail_coeff
        else:
            tau = self.tail
            minor[(Fraction(0), 1)] = Fraction(1)
        major = Series.monomial(1, tau=tau)
        minor_s = Series(minor, tau)
        if self.chart == XMAJOR:
            return major, minor_s
        return minor_s, major

    def eval(self, R):
        """Exact value of the polynomial ``R``; ``math.inf`` if a curve tail annihilates it."""
        if R.is_zero():
            raise ZeroPolynomial("valuation of the zero polynomial")
        X, Y = self.arc()
        S = R.subs(X, Y, one=Series.one(X.tau))
        top = S.top_exponent()
        if top is None:
            return INF
        return -top

    def values(self):
        from .poly import X as PX, Y as PY

        return self.eval(PX), self.eval(PY)

    @property
    def nu_x(self):
        if self.chart == XMAJOR:
            return Fraction(-1)
        return -(self.terms[0][0] if self.terms else self.tail)

    @property
    def nu_y(self):
        if self.chart == YMAJOR:
            return Fraction(-1)
        return -(self.terms[0][0] if self.terms else self.tail)

    def __call__(self, R):
        return self.eval(R)

    # -- identity ------------------------------------------------------
    def _key(self):
        return (self.chart, self.terms, self.tail, self.tail_kind, self.tail_coeff)

    def __eq__(self, other):
        return isinstance(other, ValInfinity) and self._key() == other._key()

    def __hash__(self):
        return hash((self.chart, self.terms, self.tail, self.tail_kind))

    def same_valuation(self, other):
        return meet(self, other)[0] == "equal"

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"ValInfinity({render(self)})"


def normalize(wx, wy):
    """Monomial valuation with raw weights ``(wx, wy)`` scaled so that ``min(nu(x), nu(y), 0) = -1``."""
    wx, wy = _exp(wx), _exp(wy)
    low = wx if sign(wx - wy) <= 0 else wy
    if sign(low) >= 0:
        raise NotCenteredAtInfinity(f"weights ({format_real(wx)}, {format_real(wy)}) are not centered at infinity")
    scale = -low
    nx, ny = wx / scale, wy / scale
    if sign(nx + 1) == 0:
        v = ValInfinity(XMAJOR, (), -ny)
    else:
        v = ValInfinity(YMAJOR, (), -nx)
    v.normalizer = scale
    return v


def monomial(wx, wy):
    return normalize(wx, wy)


MINUS_DEG = ValInfinity.minus_deg()


# ---------------------------------------------------------------------------
# Rendering


def _fmt_exp(e):
    s = format_real(e)
    return s if (is_rational(e) and "/" not in s and not s.startswith("-")) else f"({s})"


def render(v: ValInfinity) -> str:
    if v.is_monomial:
        return f"chart={v.chart}; nu(x)={format_real(v.nu_x)}; nu(y)={format_real(v.nu_y)}"
    major, minor = v.major_minor()
    parts = [f"{format_coeff(c)}*{major}^{_fmt_exp(b)}" for b, c in v.terms]
    if v.tail_kind == CURVE:
        parts.append(f"{format_coeff(v.tail_coeff)}*{major}^{_fmt_exp(v.tail)}")
    else:
        parts.append(f"theta*{major}^{_fmt_exp(v.tail)}")
        if v.tail_kind == INFINITE:
            parts.append(f"... [truncated, depth {v.depth}]")
    return f"chart={v.chart}; {minor} = " + " + ".join(parts)


# ---------------------------------------------------------------------------
# Tree order


def _conjugate_multipliers(exps):
    """Real multipliers ``zeta^(N*e)`` for the ``N``-th roots of unity ``zeta``.

    Only roots making every multiplier real (``+1`` or ``-1``) are kept;
    the identity comes first.
    """
    N = 1
    for e in exps:
        N = math.lcm(N, e.denominator)
    out = []
    for j in range(N):
        mult = []
        for e in exps:
            twice = 2 * j * e
            if twice.denominator != 1:
                mult = None
                break
            mult.append(1 if int(twice) % 2 == 0 else -1)
        if mult is not None:
            out.append(mult)
    return out


def _term_list(v):
    """Terms, with a curve tail counted as a final term."""
    if v.tail_kind == CURVE:
        return v.terms + ((as_rat(v.tail), v.tail_coeff),)
    return v.terms


def _common_prefix(tv, tw):
    """Length of the longest common prefix of two term lists up to Galois conjugation."""
    exps = [b for b, _ in tv] + [b for b, _ in tw]
    best = 0
    for mult in _conjugate_multipliers(exps):
        k = 0
        while k < len(tv) and k < len(tw):
            (bv, cv), (bw, cw) = tv[k], tw[k]
            if bv != bw or cv * mult[k] != cw:
                break
            k += 1
        best = max(best, k)
    return best


def _next_item(v, tv, k):
    """``(exponent, coeff)`` after the first ``k`` terms; ``coeff`` is None for a generic tail.

    ``(None, None)`` means a curve has no further data.
    """
    if k < len(tv):
        return tv[k]
    if v.tail_kind == CURVE:
        return None, None
    return v.tail, None


def meet(v: ValInfinity, w: ValInfinity):
    """Tree ordering and infimum ``v ^ w`` (rooted at ``-deg``).

    Returns ``(ordering, m)`` with ``ordering`` one of ``"less"``,
    ``"greater"``, ``"equal"``, ``"incomparable"`` describing ``v``
    relative to ``w``.
    """
    if v.is_minus_deg or w.is_minus_deg:
        if v.is_minus_deg and w.is_minus_deg:
            return "equal", v
        return ("less", v) if v.is_minus_deg else ("greater", w)
    if v.chart != w.chart:
        return "incomparable", MINUS_DEG
    tv, tw = _term_list(v), _term_list(w)
    k = _common_prefix(tv, tw)
    prefix = tv[:k]
    ev, cv = _next_item(v, tv, k)
    ew, cw = _next_item(w, tw, k)

    def at(exp):
        return v.with_terms(prefix, exp)

    if ev is None and ew is None:
        return "equal", v
    if ev is None:
        # v is a curve that w follows up to its generic tail, or leaves
        return ("greater", w) if cw is None else ("incomparable", at(ew))
    if ew is None:
        return ("less", v) if cv is None else ("incomparable", at(ev))
    cmp = sign(ev - ew)
    if cv is None and cw is None:
        if cmp == 0:
            return "equal", v
        return ("less", v) if cmp > 0 else ("greater", w)
    if cv is None:
        return ("less", v) if cmp >= 0 else ("incomparable", at(ew))
    if cw is None:
        return ("greater", w) if cmp <= 0 else ("incomparable", at(ev))
    # two distinct terms
    return "incomparable", at(ev if cmp >= 0 else ew)


def leq(v, w) -> bool:
    return meet(v, w)[0] in ("less", "equal")


# ---------------------------------------------------------------------------
# Invariants


class TreeInvariants(NamedTuple):
    alpha: object
    thinness: object
    multiplicity: object
    truncated: bool = False
    depth: int = 0

    def __str__(self):
        m = "inf" if self.multiplicity == INF else format_real(self.multiplicity)
        s = f"alpha = {format_real(self.alpha)}\nthinness = {format_real(self.thinness)}\nmultiplicity = {m}"
        if self.truncated:
            s += f"\ntruncated = depth {self.depth}"
        return s


def invariants(v: ValInfinity, allow_truncated=False) -> TreeInvariants:
    """Skewness, thinness and multiplicity of a quasimonomial valuation.

    Rational data are realized by an explicit blowup chain; an irrational
    tail is placed on the segment between the last two primes of the
    continued-fraction walk, where ``A`` is affine in ``alpha``.
    """
    from . import blowup

    if v.tail_kind == CURVE:
        raise NotDivisorial("invariants of a curve valuation are not finite")
    walk = blowup.euclid_walk(v)
    inv = TreeInvariants(walk.alpha, walk.thinness, walk.multiplicity,
                         v.tail_kind == INFINITE, v.depth)
    if inv.truncated and not allow_truncated:
        err = TruncatedDatum("invariants of a truncated infinitely singular valuation")
        err.invariants = inv
        raise err
    return inv


def alpha(v):
    return invariants(v, allow_truncated=True).alpha


def thinness(v):
    return invariants(v, allow_truncated=True).thinness


def in_V1(v: ValInfinity) -> bool:
    inv = invariants(v, allow_truncated=True)
    return sign(inv.alpha) >= 0 and sign(inv.thinness) <= 0


def is_rational_pencil(v: ValInfinity) -> bool:
    if not v.is_divisorial:
        raise NotDivisorial("rational pencil test needs a divisorial valuation")
    inv = invariants(v)
    return sign(inv.alpha) == 0 and sign(inv.thinness) < 0


def is_monomializable(v: ValInfinity) -> bool:
    inv = invariants(v, allow_truncated=True)
    return sign(inv.thinness + inv.multiplicity * inv.alpha) < 0


def monomial_closed_form(v: ValInfinity):
    """``(alpha, A)`` of a monomial valuation from its weights: ``alpha = nu(x)*nu(y)``, ``A = nu(x)+nu(y)``."""
    if not v.is_monomial:
        raise ValueError("closed form applies to monomial valuations only")
    return v.nu_x * v.nu_y, v.nu_x + v.nu_y


def random_v1_monomial(rng, max_den=12):
    """A random rational monomial valuation in V1 (both weights in [-1, 0])."""
    q = rng.randint(1, max_den)
    p = rng.randint(0, q)
    s = Fraction(p, q)
    if rng.random() < 0.5:
        return normalize(-1, -s)
    return normalize(-s, -1)
