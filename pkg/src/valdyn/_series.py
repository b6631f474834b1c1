"""Finite generalized power series in one variable with a generic coefficient.

A series is a finite sum of terms ``c * theta^k * M^(q + k*tau)`` where
``M`` is the expansion variable, ``theta`` a transcendental parameter and
``tau`` a fixed (possibly irrational) exponent shared by the whole
computation.  Terms are keyed by ``(q, k)`` with ``q`` rational, so
exponent arithmetic stays rational even when ``tau`` is a surd.
"""
from __future__ import annotations

from fractions import Fraction

from .numeric import sign, ugcd, umul, uadd, utrim


class CPoly:
    """Univariate polynomial in an auxiliary unknown ``c`` (low degree first)."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = tuple(utrim(list(coeffs)))

    def __add__(self, other):
        if not isinstance(other, CPoly):
            other = CPoly([other])
        return CPoly(uadd(list(self.c), list(other.c)))

    __radd__ = __add__

    def __neg__(self):
        return CPoly([-x for x in self.c])

    def __sub__(self, other):
        if not isinstance(other, CPoly):
            other = CPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CPoly):
            return CPoly(umul(list(self.c), list(other.c)))
        if other == 0:
            return CPoly([])
        return CPoly([x * other for x in self.c])

    __rmul__ = __mul__

    def __truediv__(self, other):
        return CPoly([x / other for x in self.c])

    def __eq__(self, other):
        if isinstance(other, CPoly):
            return self.c == other.c
        if other == 0:
            return not self.c
        return self.c == (other,)

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return bool(self.c)

    def __repr__(self):
        return f"CPoly({list(self.c)})"


class Series:
    __slots__ = ("t", "tau")

    def __init__(self, terms=None, tau=None):
        self.t = {k: v for k, v in (terms or {}).items() if v != 0}
        self.tau = tau

    @classmethod
    def one(cls, tau=None):
        return cls({(Fraction(0), 0): Fraction(1)}, tau)

    @classmethod
    def monomial(cls, q, k=0, coeff=Fraction(1), tau=None):
        return cls({(Fraction(q), k): coeff}, tau)

    def _tau(self, other):
        if self.tau is None:
            return other.tau
        return self.tau

    def __bool__(self):
        return bool(self.t)

    def __add__(self, other):
        if not isinstance(other, Series):
            if other == 0:
                return self
            other = Series({(Fraction(0), 0): other}, self.tau)
        out = dict(self.t)
        for key, c in other.t.items():
            v = out.get(key)
            v = c if v is None else v + c
            if v == 0:
                out.pop(key, None)
            else:
                out[key] = v
        s = Series(None, self._tau(other))
        s.t = out
        return s

    __radd__ = __add__

    def __neg__(self):
        s = Series(None, self.tau)
        s.t = {k: -v for k, v in self.t.items()}
        return s

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Series):
            if other == 0:
                return Series(None, self.tau)
            s = Series(None, self.tau)
            s.t = {k: v * other for k, v in self.t.items()}
            if isinstance(other, CPoly):
                s.t = {k: v for k, v in s.t.items() if v != 0}
            return s
        out = {}
        for (q1, k1), c1 in self.t.items():
            for (q2, k2), c2 in other.t.items():
                key = (q1 + q2, k1 + k2)
                v = out.get(key)
                out[key] = c1 * c2 if v is None else v + c1 * c2
        s = Series(None, self._tau(other))
        s.t = {k: v for k, v in out.items() if v != 0}
        return s

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n):
        out = Series.one(self.tau)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def exponent(self, key):
        q, k = key
        if k == 0:
            return q
        return q + k * self.tau

    def top(self):
        """``(exponent, {k: coeff})`` for the largest exponent, or ``None`` if zero.

        Keys sharing the top exponent (possible only when ``tau`` is
        rational) are returned together as the coefficients of the
        corresponding powers of ``theta``.
        """
        if not self.t:
            return None
        if self.tau is None or all(k == 0 for _, k in self.t):
            best = max(q for q, _ in self.t)
            return best, {k: c for (q, k), c in self.t.items() if q == best}
        # float prefilter, exact check among the candidates
        approx = {key: float(self.exponent(key)) for key in self.t}
        hi = max(approx.values())
        cands = [key for key, a in approx.items() if a >= hi - 1e-9 * (1 + abs(hi))]
        best = None
        for key in cands:
            e = self.exponent(key)
            if best is None or sign(e - best) > 0:
                best = e
        out = {}
        for key in cands:
            if sign(self.exponent(key) - best) == 0:
                out[key[1]] = self.t[key]
        return best, out

    def top_exponent(self):
        t = self.top()
        return None if t is None else t[0]

    def __repr__(self):
        return f"Series({self.t}, tau={self.tau})"

    # -- truncated arithmetic ----------------------------------------
    def fexp(self, key):
        q, k = key
        return float(q) + (k * float(self.tau) if k else 0.0)

    def ftop(self):
        return max(self.fexp(key) for key in self.t) if self.t else float("-inf")

    def truncate(self, fl):
        """Drop terms whose exponent is (numerically) below ``fl``; keeps a superset."""
        s = Series(None, self.tau)
        s.t = {k: v for k, v in self.t.items() if self.fexp(k) >= fl}
        return s

    def mul_floor(self, other, fl):
        """Product keeping only terms with exponent at least ``fl``."""
        tau = self._tau(other)
        a = sorted(((self.fexp(k), k, c) for k, c in self.t.items()), key=lambda t: -t[0])
        b = sorted(((other.fexp(k), k, c) for k, c in other.t.items()), key=lambda t: -t[0])
        out = {}
        for ea, (q1, k1), c1 in a:
            lim = fl - ea
            for eb, (q2, k2), c2 in b:
                if eb < lim:
                    break
                key = (q1 + q2, k1 + k2)
                v = out.get(key)
                out[key] = c1 * c2 if v is None else v + c1 * c2
        s = Series(None, tau)
        s.t = {k: v for k, v in out.items() if v != 0}
        return s


def eval_floor(R, U, W, floor):
    """``R(U, W)`` with every term of exponent at least ``floor`` exact.

    Terms below the floor may be missing or wrong; they are discarded
    (up to a small numerical margin, which only keeps extra terms).
    """
    tau = U.tau if U.tau is not None else W.tau
    fl = float(floor)
    fl -= 1e-9 * (1 + abs(fl))
    if not R.terms:
        return Series(None, tau)
    tU, tW = U.ftop(), W.ftop()
    needU, needW = {}, {}
    for i, j in R.terms:
        needU[i] = min(needU.get(i, float("inf")), fl - j * tW)
        needW[j] = min(needW.get(j, float("inf")), fl - i * tU)

    def powers(S, top, need):
        n = max(need)
        floors = [float("inf")] * (n + 1)
        for i, f in need.items():
            floors[i] = min(floors[i], f)
        for i in range(n - 1, -1, -1):
            floors[i] = min(floors[i], floors[i + 1] - top)
        out = [Series.one(tau)]
        for i in range(1, n + 1):
            prev = out[-1]
            out.append(prev.mul_floor(S.truncate(floors[i] - (i - 1) * top), floors[i]))
        return out

    Up, Wp = powers(U, tU, needU), powers(W, tW, needW)
    acc = {}
    for (i, j), c in R.terms.items():
        prod = Up[i].mul_floor(Wp[j], fl)
        for key, v in prod.t.items():
            w = v * c
            old = acc.get(key)
            acc[key] = w if old is None else old + w
    s = Series(None, tau)
    s.t = {k: v for k, v in acc.items() if v != 0}
    return s


def cpoly_gcd(polys):
    g = []
    for p in polys:
        if not isinstance(p, CPoly):
            p = CPoly([p])
        g = ugcd(g, list(p.c)) if g else ugcd(list(p.c), [])
        if len(g) == 1:
            break
    return g
