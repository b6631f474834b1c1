"""Degree sequences of iterates and their linear recurrences."""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import sympy

from ..errors import NoRecurrenceFound, NonIntegralDegree, TooLarge
from ..numeric import MinPoly, format_real, is_rational, min_poly, quad
from ..poly import PolyMap, compose
from ..valtree import MINUS_DEG
from .push import MAX_REFINE, d_of, pushforward

MONOMIAL_BOUND = 10 ** 4


class DegreeReport:
    """Degrees ``deg F^0 .. deg F^N`` with the orbit of ``-deg`` that produced them.

    Attributes
    ----------
    degrees : list of int
    orbit : list of ValInfinity
        ``nu_0 = -deg, nu_1, ..., nu_{N-1}``.
    local : list
        Local degrees ``d(F, nu_i)``; their partial products are the degrees.
    """

    def __init__(self, degrees, orbit, local):
        self.degrees = list(degrees)
        self.orbit = list(orbit)
        self.local = list(local)

    def __iter__(self):
        return iter(self.degrees)

    def __len__(self):
        return len(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    def __eq__(self, other):
        if isinstance(other, DegreeReport):
            return self.degrees == other.degrees
        return self.degrees == list(other)

    def __str__(self):
        return " ".join(str(a) for a in self.degrees)

    def __repr__(self):
        return f"DegreeReport({self.degrees})"


def _as_int(x, j):
    if not is_rational(x):
        raise NonIntegralDegree(f"deg F^{j} came out as {format_real(x)}")
    x = Fraction(x)
    if x.denominator != 1 or x <= 0:
        raise NonIntegralDegree(f"deg F^{j} came out as {x}")
    return int(x)


def degree_sequence(F: PolyMap, N: int, max_refine: int = MAX_REFINE) -> DegreeReport:
    """``deg F^j`` for ``j <= N`` as products of local degrees along the orbit of ``-deg``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    v = MINUS_DEG
    orbit, local = [], []
    prod = Fraction(1)
    degrees = [1]
    for j in range(1, N + 1):
        d = d_of(F, v)
        orbit.append(v)
        local.append(d)
        prod = prod * d
        degrees.append(_as_int(prod, j))
        if j < N:
            v = pushforward(F, v, max_refine=max_refine)
    return DegreeReport(degrees, orbit, local)


def degree_sequence_bruteforce(F: PolyMap, n: int, bound: int = MONOMIAL_BOUND) -> list:
    """Degrees of the literal compositions ``F^0 .. F^n``."""
    if n > 6:
        raise TooLarge("bruteforce composition is limited to n <= 6")
    G = PolyMap.identity()
    out = [1]
    D = F.degree()
    for j in range(1, n + 1):
        est = D * G.degree()
        if (est + 1) * (est + 2) // 2 > bound:
            raise TooLarge(f"F^{j} may have more than {bound} monomials")
        G = compose(F, G)
        out.append(G.degree())
    return out


# ---------------------------------------------------------------------------
# Recurrences


class Recurrence(NamedTuple):
    order: int
    coeffs: tuple
    offset: int
    char_poly: tuple          # integer coefficients, highest degree first
    dominant_root: object     # Fraction, QuadReal, or float when not quadratic
    min_poly: MinPoly | None
    double_root: bool
    validated_through: int

    @property
    def lambda1(self):
        return self.dominant_root

    def formula(self):
        parts = [f"{c}*a[j-{i}]" for i, c in enumerate(self.coeffs, 1)]
        return "a[j] = " + " + ".join(parts)

    def __str__(self):
        coeffs = ",".join(str(c) for c in self.coeffs)
        return f"order={self.order} coeffs={coeffs} lambda1={format_real(self.dominant_root)}"


def _solve(rows, rhs):
    """One exact solution of ``rows * c = rhs`` (free unknowns set to 0), or None."""
    k = len(rows[0])
    M = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for col in range(k):
        p = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][col]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        piv_cols.append(col)
        r += 1
    if any(row[k] != 0 for row in M[r:]):
        return None
    sol = [Fraction(0)] * k
    for i, col in enumerate(piv_cols):
        sol[col] = M[i][k]
    return sol


def _fits(seq, coeffs, offset):
    k = len(coeffs)
    return all(seq[j] == sum(c * seq[j - i] for i, c in enumerate(coeffs, 1))
               for j in range(offset + k, len(seq)))


def _root_value(factor, x):
    """Exact value of a real root of a rational factor of degree <= 2, picked numerically."""
    coeffs = [Fraction(int(c.p), int(c.q)) for c in sympy.Poly(factor, x).all_coeffs()]
    if len(coeffs) == 2:
        return -coeffs[1] / coeffs[0]
    a, b, c = coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return None
    r1 = quad(-b / (2 * a), 1 / (2 * a), disc)
    r2 = quad(-b / (2 * a), -1 / (2 * a), disc)
    return r1 if abs(float(r1)) >= abs(float(r2)) else r2


def _dominant(coeffs):
    x = sympy.Symbol("x")
    k = len(coeffs)
    cp = x ** k - sum(int(c) * x ** (k - i) for i, c in enumerate(coeffs, 1))
    char = tuple(int(c) for c in sympy.Poly(cp, x).all_coeffs())
    _, factors = sympy.factor_list(cp)
    best_abs, best_fac = -1.0, None
    for fac, mult in factors:
        roots = sympy.Poly(fac, x).nroots(n=30)
        top = max(abs(complex(r)) for r in roots)
        if top > best_abs + 1e-12:
            best_abs, best_fac = top, (fac, mult)
    fac, mult = best_fac
    deg = sympy.degree(fac, x)
    if deg <= 2:
        value = _root_value(fac, x)
        if value is None:
            value = best_abs
    else:
        value = best_abs
    mp = min_poly(value) if not isinstance(value, float) else None
    return char, value, mp, mult > 1


def detect_recurrence(seq, max_order: int = 4) -> Recurrence:
    """Minimal-order integer linear recurrence fitting ``seq`` from some offset on.

    Orders are tried from 1 up; for each order the offsets ``0..max_order``
    are tried.  A candidate needs at least ``order + 1`` equations, is solved
    exactly over the rationals and must have integer coefficients and
    reproduce every term from its offset on.
    """
    seq = [int(a) for a in seq]
    n = len(seq)
    for k in range(1, max_order + 1):
        for off in range(0, max_order + 1):
            eqs = n - off - k
            if eqs < k + 1:
                continue
            rows = [[seq[j - i] for i in range(1, k + 1)] for j in range(off + k, n)]
            rhs = [seq[j] for j in range(off + k, n)]
            sol = _solve(rows, rhs)
            if sol is None or any(c.denominator != 1 for c in sol):
                continue
            coeffs = tuple(int(c) for c in sol)
            if coeffs[-1] == 0:
                continue  # really of smaller order
            if not _fits(seq, coeffs, off):
                continue
            char, root, mp, double = _dominant(coeffs)
            return Recurrence(k, coeffs, off, char, root, mp, double, n - 1)
    raise NoRecurrenceFound(max_order)
