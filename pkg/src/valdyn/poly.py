"""Sparse bivariate polynomials, plane polynomial maps and the map file parser."""
from __future__ import annotations

import os
import random
import re
from fractions import Fraction
from typing import Iterable

from .errors import MapSyntaxError, NonDominant, UnknownIdentifier, Unstable, ZeroPolynomial
from .numeric import as_rat, format_coeff, sign

DEFAULT_SEED = 20240531


def _grlex_key(mono):
    i, j = mono
    return (-(i + j), -i)


class BiPoly:
    """A polynomial in ``x`` and ``y`` stored as ``{(i, j): coeff}``.

    Zero coefficients are never stored, so the zero polynomial is the empty
    dict.  Instances should be treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for mono, c in items:
                if c == 0:
                    continue
                mono = (int(mono[0]), int(mono[1]))
                if mono[0] < 0 or mono[1] < 0:
                    raise ValueError("negative exponent in a polynomial")
                if isinstance(c, int):
                    c = Fraction(c)
                v = out.get(mono, 0) + c
                if v == 0:
                    out.pop(mono, None)
                else:
                    out[mono] = v
        self.terms = out

    # -- constructors ------------------------------------------------
    @classmethod
    def const(cls, c):
        return cls({(0, 0): as_rat(c) if isinstance(c, (int, str)) else c})

    @classmethod
    def x(cls):
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def y(cls):
        return cls({(0, 1): Fraction(1)})

    @classmethod
    def monomial(cls, i, j, c=1):
        return cls({(i, j): c})

    # -- basic queries -----------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((i + j for i, j in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((m[var] for m in self.terms), default=-1)

    def monomials(self):
        return sorted(self.terms, key=_grlex_key)

    def items(self):
        return [(m, self.terms[m]) for m in self.monomials()]

    def coeff(self, i, j):
        return self.terms.get((i, j), Fraction(0))

    def homogeneous_part(self, d):
        return BiPoly({m: c for m, c in self.terms.items() if m[0] + m[1] == d})

    def constant_term(self):
        return self.terms.get((0, 0), Fraction(0))

    # -- arithmetic --------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, BiPoly):
            return other
        if other == 0:
            return BiPoly()
        return BiPoly({(0, 0): other})

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        p = BiPoly()
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = BiPoly()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            if other == 0:
                return BiPoly()
            p = BiPoly()
            p.terms = {m: c * other for m, c in self.terms.items()}
            return p
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, 0) + c1 * c2
        return BiPoly({m: c for m, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = BiPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == BiPoly._lift(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus and substitution -------------------------------------
    def diff(self, var: int):
        out = {}
        for (i, j), c in self.terms.items():
            e = (i, j)[var]
            if e:
                m = (i - 1, j) if var == 0 else (i, j - 1)
                out[m] = c * e
        return BiPoly(out)

    def subs(self, X, Y, one=None):
        """Evaluate at ``(X, Y)``, which may be numbers, polynomials or series.

        Powers are cached so each needed power of ``X`` and ``Y`` is computed
        once.
        """
        if not self.terms:
            return 0 if one is None else one * 0
        if one is None:
            one = 1
        xp, yp = {0: one}, {0: one}

        def power(cache, base, k):
            if k not in cache:
                best = max(e for e in cache if e <= k)
                val = cache[best]
                for e in range(best + 1, k + 1):
                    val = val * base
                    cache[e] = val
            return cache[k]

        total = None
        for (i, j), c in self.terms.items():
            t = power(xp, X, i) * power(yp, Y, j) * c
            total = t if total is None else total + t
        return total

    def __call__(self, X, Y):
        return self.subs(X, Y)

    def map_coeffs(self, f):
        return BiPoly({m: f(c) for m, c in self.terms.items()})

    def as_univariate(self, var: int, at):
        """Substitute the other variable by the number ``at``; coefficient list, low degree first."""
        n = self.degree_in(var)
        out = [Fraction(0)] * (n + 1)
        for m, c in self.terms.items():
            out[m[var]] = out[m[var]] + c * (at ** m[1 - var])
        while out and out[-1] == 0:
            out.pop()
        return out

    # -- rendering ---------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.items():
            neg = sign(c) < 0 if not hasattr(c, "field") else False
            mag = -c if neg else c
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in (("x", i), ("y", j)) if e
            )
            if not mono:
                body = format_coeff(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_coeff(mag)}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"BiPoly({self})"


X = BiPoly.x()
Y = BiPoly.y()


class PolyMap:
    """The plane map ``F(x, y) = (P(x, y), Q(x, y))``."""

    __slots__ = ("P", "Q")

    def __init__(self, P: BiPoly, Q: BiPoly):
        self.P = BiPoly._lift(P)
        self.Q = BiPoly._lift(Q)

    @classmethod
    def identity(cls):
        return cls(X, Y)

    def degree(self) -> int:
        return max(self.P.degree(), self.Q.degree())

    def __iter__(self):
        return iter((self.P, self.Q))

    def __eq__(self, other):
        return isinstance(other, PolyMap) and self.P == other.P and self.Q == other.Q

    def __hash__(self):
        return hash((self.P, self.Q))

    def __call__(self, x, y):
        return self.P.subs(x, y), self.Q.subs(x, y)

    def pull(self, R: BiPoly) -> BiPoly:
        """``R o F``."""
        return R.subs(self.P, self.Q, one=BiPoly.const(1))

    def __str__(self):
        return f"P = {self.P}; Q = {self.Q}"

    def __repr__(self):
        return f"PolyMap({self})"


def compose(F: PolyMap, G: PolyMap) -> PolyMap:
    """``F o G``."""
    return PolyMap(G.pull(F.P), G.pull(F.Q))


def iterate(F: PolyMap, n: int) -> PolyMap:
    out = PolyMap.identity()
    for _ in range(n):
        out = compose(F, out)
    return out


def jacobian_det(F: PolyMap) -> BiPoly:
    P, Q = F.P, F.Q
    return P.diff(0) * Q.diff(1) - P.diff(1) * Q.diff(0)


def leading_part(R: BiPoly, wx, wy) -> BiPoly:
    """Monomials of ``R`` minimizing ``i*wx + j*wy`` (the weighted leading part)."""
    if not R.terms:
        raise ZeroPolynomial("leading part of the zero polynomial")
    vals = {m: m[0] * wx + m[1] * wy for m in R.terms}
    best = None
    for v in vals.values():
        if best is None or sign(v - best) < 0:
            best = v
    return BiPoly({m: c for m, c in R.terms.items() if sign(vals[m] - best) == 0})


# ---------------------------------------------------------------------------
# Topological degree through resultants


def _bareiss_det(M):
    """Determinant by fraction-free elimination (exact for integer or Fraction entries)."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = [list(row) for row in M]
    sgn = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sgn = -sgn
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    return sgn * A[n - 1][n - 1]


def sylvester_matrix(f, g):
    """Sylvester matrix of two univariate coefficient lists (low degree first)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fh, gh = list(reversed(f)), list(reversed(g))
    for k in range(n):
        rows.append([0] * k + fh + [0] * (size - k - m - 1))
    for k in range(m):
        rows.append([0] * k + gh + [0] * (size - k - n - 1))
    return rows


def resultant(f, g):
    if len(f) < 1 or len(g) < 1:
        return Fraction(0)
    if len(f) == 1:
        return Fraction(f[0]) ** (len(g) - 1)
    if len(g) == 1:
        return Fraction(g[0]) ** (len(f) - 1)
    return Fraction(_bareiss_det(sylvester_matrix(f, g)))


def _interpolate(xs, ys):
    """Newton interpolation; coefficient list low degree first."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)]
    for k in range(n - 1, -1, -1):
        # poly = poly * (x - xs[k]) + coef[k]
        shifted = [Fraction(0)] + poly
        for i in range(len(poly)):
            shifted[i] -= xs[k] * poly[i]
        shifted[0] += coef[k]
        poly = shifted
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def resultant_y(A: BiPoly, B: BiPoly):
    """``Res_y(A, B)`` as a univariate polynomial in ``x`` (low degree first).

    Evaluates at enough integer abscissae and interpolates; assumes the
    leading ``y``-coefficients of ``A`` and ``B`` are constants so that the
    Sylvester matrix size is the same at every abscissa.
    """
    bound = max(A.degree(), 0) * max(B.degree(), 0)
    xs = [Fraction(k) for k in range(bound + 1)]
    ys = [resultant(A.as_univariate(1, x0), B.as_univariate(1, x0)) for x0 in xs]
    return _interpolate(xs, ys)


def _shear(R: BiPoly, c) -> BiPoly:
    return R.subs(X + Y * c, Y, one=BiPoly.const(1))


def seed_from_env(seed=None):
    env = os.environ.get("VALDYN_SEED")
    if env is not None and env.strip():
        return int(env)
    return DEFAULT_SEED if seed is None else seed


def topological_degree(F: PolyMap, seed=None, trials: int = 3) -> int:
    """Number of preimages of a generic point.

    After a random shear ``x -> x + c*y`` the ``y``-leading coefficients of
    both components are constants; then the ``x``-degree of
    ``Res_y(P - a, Q - b)`` at random rational targets counts the fiber.
    """
    if jacobian_det(F).is_zero():
        raise NonDominant("Jacobian determinant vanishes identically")
    rng = random.Random(seed_from_env(seed))
    values = []
    for _ in range(trials):
        for _attempt in range(20):
            c = Fraction(rng.randint(1, 97), rng.randint(1, 13))
            P, Q = _shear(F.P, c), _shear(F.Q, c)
            if P.degree_in(1) == P.degree() and Q.degree_in(1) == Q.degree():
                break
        else:
            raise Unstable(values)
        a = Fraction(rng.randint(-997, 997), rng.randint(1, 11))
        b = Fraction(rng.randint(-997, 997), rng.randint(1, 11))
        res = resultant_y(P - a, Q - b)
        values.append(len(res) - 1 if res else None)
    nonzero = [v for v in values if v is not None]
    if not nonzero:
        raise NonDominant("resultant vanished in every trial")
    if len(nonzero) != len(values) or len(set(nonzero)) != 1:
        raise Unstable(values)
    return nonzero[0]


# ---------------------------------------------------------------------------
# Parser

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<num>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^=();])"
)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(text: str):
    toks = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise MapSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            toks.append(_Tok("sep", s, line, col))
            line, col = line + 1, 1
        else:
            if kind == "op" and s == ";":
                toks.append(_Tok("sep", s, line, col))
            elif kind not in ("ws", "comment"):
                toks.append(_Tok(kind, s, line, col))
            col += len(s)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, text=None):
        t = self.next()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise MapSyntaxError(f"expected {want!r}, found {got!r}", t.line, t.col)
        return t

    def is_op(self, text):
        t = self.peek()
        return t.kind == "op" and t.text == text

    def parse_file(self):
        out = {}
        while True:
            while self.peek().kind == "sep":
                self.next()
            t = self.peek()
            if t.kind == "eof":
                break
            if t.kind != "ident" or t.text not in ("P", "Q"):
                if t.kind == "ident":
                    raise UnknownIdentifier(f"unknown identifier {t.text!r}", t.line, t.col)
                raise MapSyntaxError(f"expected 'P' or 'Q', found {t.text!r}", t.line, t.col)
            self.next()
            if t.text in out:
                raise MapSyntaxError(f"{t.text} assigned twice", t.line, t.col)
            self.expect("op", "=")
            out[t.text] = self.expr()
            nt = self.peek()
            if nt.kind not in ("sep", "eof"):
                raise MapSyntaxError(f"unexpected {nt.text!r}", nt.line, nt.col)
        last = self.peek()
        for name in ("P", "Q"):
            if name not in out:
                raise MapSyntaxError(f"missing definition of {name}", last.line, last.col)
        return PolyMap(out["P"], out["Q"])

    def expr(self):
        neg = False
        if self.is_op("-") or self.is_op("+"):
            neg = self.next().text == "-"
        acc = self.term()
        if neg:
            acc = -acc
        while self.is_op("+") or self.is_op("-"):
            op = self.next().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.factor()
        while self.is_op("*"):
            self.next()
            acc = acc * self.factor()
        return acc

    def factor(self):
        base = self.base()
        if self.is_op("^"):
            self.next()
            t = self.expect("num")
            base = base ** int(t.text)
        return base

    def base(self):
        t = self.next()
        if t.kind == "ident":
            if t.text == "x":
                return X
            if t.text == "y":
                return Y
            raise UnknownIdentifier(f"unknown identifier {t.text!r}", t.line, t.col)
        if t.kind == "num":
            val = Fraction(int(t.text))
            if self.is_op("/"):
                self.next()
                d = self.expect("num")
                if int(d.text) == 0:
                    raise MapSyntaxError("zero denominator", d.line, d.col)
                val = val / int(d.text)
            return BiPoly.const(val)
        if t.kind == "op" and t.text == "(":
            inner = self.expr()
            self.expect("op", ")")
            return inner
        got = t.text or "end of input"
        raise MapSyntaxError(f"unexpected {got!r}", t.line, t.col)


def parse_map(text: str) -> PolyMap:
    """Parse ``P = ...; Q = ...`` (statements separated by ``;`` or newlines)."""
    return _Parser(text).parse_file()


def parse_poly(text: str) -> BiPoly:
    p = _Parser(text)
    out = p.expr()
    t = p.peek()
    if t.kind != "eof":
        raise MapSyntaxError(f"unexpected {t.text!r}", t.line, t.col)
    return out


def load_map(path) -> PolyMap:
    with open(path, encoding="utf-8") as fh:
        return parse_map(fh.read())


def monomial_map(a, b, c, d, coeffs=(1, 1)) -> PolyMap:
    """``(x^a y^b, x^c y^d)``."""
    return PolyMap(BiPoly.monomial(a, b, Fraction(coeffs[0])), BiPoly.monomial(c, d, Fraction(coeffs[1])))


def random_map(rng: random.Random, max_deg=3, density=0.6, coeff_range=3) -> PolyMap:
    def one():
        terms = {}
        for i in range(max_deg + 1):
            for j in range(max_deg + 1 - i):
                if rng.random() < density:
                    terms[(i, j)] = Fraction(rng.randint(-coeff_range, coeff_range))
        return BiPoly(terms)

    return PolyMap(one(), one())


def all_terms(polys: Iterable[BiPoly]):
    out = set()
    for p in polys:
        out.update(p.terms)
    return out
