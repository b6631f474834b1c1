"""Exact scalars: rationals, real quadratic surds and simple number fields.

Rationals are :class:`fractions.Fraction`.  :class:`QuadReal` holds
``r + s*sqrt(D)``; use :func:`quad` to build one, it collapses to a
``Fraction`` whenever ``s == 0`` so that rational values have a single
representation (and hash consistently as dictionary keys).
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import NamedTuple

from .errors import MixedFieldError, ValdynError

Rat = Fraction


def as_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} to a rational")


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(f, D)`` with ``n == f*f*D`` and ``D`` squarefree."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 0
    f, D = 1, 1
    p = 2
    m = n
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            D *= p
        p += 1
    D *= m
    return f, D


@total_ordering
class QuadReal:
    """The real number ``r + s*sqrt(D)`` with ``D`` squarefree, ``s != 0``.

    Instances are immutable.  Arithmetic with ``int``/``Fraction`` is
    supported; combining two surds with different ``D`` raises
    :class:`MixedFieldError`.
    """

    __slots__ = ("r", "s", "D")

    def __init__(self, r, s, D):
        r, s = as_rat(r), as_rat(s)
        if D <= 1 or s == 0:
            raise ValueError("use quad() for values that may be rational")
        f, D2 = squarefree_part(D)
        if D2 == 1:
            raise ValueError("radicand is a perfect square")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s * f)
        object.__setattr__(self, "D", D2)

    def __setattr__(self, name, value):
        raise AttributeError("QuadReal is immutable")

    # -- helpers -----------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, QuadReal):
            return x.r, x.s, x.D
        if isinstance(x, (int, Fraction)):
            return Fraction(x), Fraction(0), 0
        return None

    @staticmethod
    def _joint(a, b):
        if a[2] and b[2] and a[2] != b[2]:
            raise MixedFieldError(f"sqrt({a[2]}) and sqrt({b[2]}) in one computation")
        return a[2] or b[2]

    # -- arithmetic --------------------------------------------------
    def __add__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        D = self._joint((self.r, self.s, self.D), o)
        return quad(self.r + o[0], self.s + o[1], D)

    __radd__ = __add__

    def __neg__(self):
        return QuadReal(-self.r, -self.s, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        D = self._joint((self.r, self.s, self.D), o)
        return quad(self.r - o[0], self.s - o[1], D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        D = self._joint((self.r, self.s, self.D), o)
        r = self.r * o[0] + self.s * o[1] * D
        s = self.r * o[1] + self.s * o[0]
        return quad(r, s, D)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadReal(self.r, -self.s, self.D)

    def norm(self) -> Fraction:
        return self.r * self.r - self.s * self.s * self.D

    def __truediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        if o[1] == 0:
            if o[0] == 0:
                raise ZeroDivisionError("division by zero")
            return quad(self.r / o[0], self.s / o[0], self.D)
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return reciprocal(self) ** (-n)
        out = Fraction(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __abs__(self):
        return -self if sign(self) < 0 else self

    # -- comparisons -------------------------------------------------
    def __eq__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return (self.r, self.s, self.D) == (o[0], o[1], o[2] if o[1] else self.D)

    def __lt__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return sign(self - other) < 0

    def __hash__(self):
        return hash(("QuadReal", self.r, self.s, self.D))

    def __float__(self):
        return float(self.r) + float(self.s) * math.sqrt(self.D)

    def __repr__(self):
        return f"QuadReal({self.r}, {self.s}, {self.D})"

    def __str__(self):
        return format_real(self)


def quad(r, s=0, D=0):
    """Build ``r + s*sqrt(D)``; returns a ``Fraction`` when the value is rational."""
    r, s = as_rat(r), as_rat(s)
    if s == 0 or D == 0:
        if s != 0 and D == 0:
            return r
        return r
    f, D2 = squarefree_part(D)
    if D2 == 1:
        return r + s * f
    return QuadReal(r, s * f, D2)


def sqrt_rat(x) -> Fraction | QuadReal:
    """Exact square root of a non-negative rational."""
    x = as_rat(x)
    if x < 0:
        raise ValueError("square root of a negative rational")
    num = x.numerator * x.denominator
    f, D = squarefree_part(num)
    return quad(0, Fraction(f, x.denominator), D)


def reciprocal(x):
    if isinstance(x, QuadReal):
        n = x.norm()
        return quad(x.r / n, -x.s / n, x.D)
    return 1 / as_rat(x)


def sign(x) -> int:
    """Sign of an exact real, with no floating point."""
    if isinstance(x, QuadReal):
        r, s, D = x.r, x.s, x.D
        if r >= 0 and s >= 0:
            return 1 if (r or s) else 0
        if r <= 0 and s <= 0:
            return -1
        # opposite signs: compare r^2 with s^2 D
        lhs, rhs = r * r, s * s * D
        if lhs == rhs:
            return 0
        return (1 if r > 0 else -1) if lhs > rhs else (1 if s > 0 else -1)
    x = as_rat(x)
    return (x > 0) - (x < 0)


def quadreal_cmp(a, b) -> int:
    """Exact three-way comparison: -1, 0 or 1."""
    return sign(a - b)


def is_rational(x) -> bool:
    return not isinstance(x, QuadReal)


def radicand(*values) -> int:
    D = 0
    for v in values:
        if isinstance(v, QuadReal):
            if D and v.D != D:
                raise MixedFieldError(f"sqrt({D}) and sqrt({v.D}) in one computation")
            D = v.D
    return D


class MinPoly(NamedTuple):
    coeffs: tuple  # monic, highest degree first
    integral: bool

    def __call__(self, x):
        acc = Fraction(0)
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __str__(self):
        return format_upoly(list(reversed(self.coeffs)), "x")


def min_poly(a) -> MinPoly:
    """Monic minimal polynomial of ``a`` over Q (degree <= 2)."""
    if isinstance(a, QuadReal):
        coeffs = (Fraction(1), -2 * a.r, a.norm())
    else:
        coeffs = (Fraction(1), -as_rat(a))
    return MinPoly(coeffs, all(c.denominator == 1 for c in coeffs))


def format_rat(x: Fraction) -> str:
    x = as_rat(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_real(x) -> str:
    """Render ``r + sqrt(s^2 D)`` style, e.g. ``-sqrt(2/3)`` or ``3/2 + sqrt(5/4)``."""
    if not isinstance(x, QuadReal):
        return format_rat(x)
    rad = format_rat(x.s * x.s * x.D)
    root = f"sqrt({rad})"
    if x.r == 0:
        return root if x.s > 0 else "-" + root
    op = "+" if x.s > 0 else "-"
    return f"{format_rat(x.r)} {op} {root}"


def format_upoly(coeffs_low_first, var="x") -> str:
    parts = []
    deg = len(coeffs_low_first) - 1
    for k in range(deg, -1, -1):
        c = coeffs_low_first[k]
        if c == 0:
            continue
        mag = -c if c < 0 else c
        if k == 0:
            body = format_rat(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{format_rat(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Univariate polynomials as coefficient lists, lowest degree first.  The
# coefficients may be any exact field elements (Fraction, AlgElt).


def utrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def uadd(a, b):
    n = max(len(a), len(b))
    return utrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def usub(a, b):
    return uadd(a, [-c for c in b])


def umul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return utrim(out)


def udivmod(a, b):
    a, b = utrim(a), utrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lead
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] = r[i + k] - c * y
        r = utrim(r)
    return utrim(q), r


def ugcd(a, b):
    """Monic gcd."""
    a, b = utrim(a), utrim(b)
    while b:
        a, b = b, udivmod(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def ueval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def uderiv(a):
    return utrim([i * a[i] for i in range(1, len(a))])


def rational_roots(a) -> list[Fraction]:
    """All rational roots (without multiplicity) of a polynomial with rational coefficients."""
    a = utrim([as_rat(c) for c in a])
    if len(a) <= 1:
        return []
    roots = []
    while a and a[0] == 0:
        a = a[1:]
        if Fraction(0) not in roots:
            roots.append(Fraction(0))
    if len(a) <= 1:
        return roots
    den = math.lcm(*(c.denominator for c in a))
    ints = [int(c * den) for c in a]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    c0, cn = abs(ints[0]), abs(ints[-1])
    for p in _divisors(c0):
        for q in _divisors(cn):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand not in roots and ueval(ints, cand) == 0:
                    roots.append(cand)
    return roots


def _divisors(n: int):
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return out


def integer_nth_root(x: Fraction, n: int):
    """Return the rational ``n``-th root of ``x`` if it exists (positive when possible)."""
    x = as_rat(x)
    if n == 1:
        return x
    neg = x < 0
    if neg and n % 2 == 0:
        return None
    ax = -x if neg else x

    def iroot(k):
        if k == 0:
            return 0
        r = round(k ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == k:
                return cand
        lo, hi = 0, k
        while lo <= hi:
            mid = (lo + hi) // 2
            v = mid ** n
            if v == k:
                return mid
            if v < k:
                lo = mid + 1
            else:
                hi = mid - 1
        return None

    p, q = iroot(ax.numerator), iroot(ax.denominator)
    if p is None or q is None:
        return None
    root = Fraction(p, q)
    return -root if neg else root


# ---------------------------------------------------------------------------
# Simple algebraic extensions Q[t]/(m(t)).


class NumberField:
    """``Q(a)`` for a root ``a`` of the monic irreducible polynomial ``modulus``.

    ``modulus`` is a coefficient list, lowest degree first.  ``real_root``
    optionally records a float approximation of the chosen embedding.
    """

    def __init__(self, modulus, name="a", real_root=None):
        modulus = utrim([as_rat(c) for c in modulus])
        if len(modulus) < 3:
            raise ValueError("extension of degree < 2")
        lead = modulus[-1]
        self.modulus = [c / lead for c in modulus]
        self.degree = len(self.modulus) - 1
        self.name = name
        self.real_root = real_root

    @property
    def gen(self):
        return AlgElt(self, [0, 1])

    def __call__(self, value):
        if isinstance(value, AlgElt):
            if value.field is not self:
                raise NestedExtension_("elements of two different extensions")
            return value
        return AlgElt(self, [as_rat(value)])

    def __repr__(self):
        return f"NumberField({format_upoly(self.modulus, self.name)})"


def NestedExtension_(msg):
    from .errors import NestedExtension

    return NestedExtension(msg)


class AlgElt:
    """Element of a :class:`NumberField`, stored as a reduced residue."""

    __slots__ = ("field", "c")

    def __init__(self, field: NumberField, coeffs):
        c = [as_rat(x) for x in coeffs]
        if len(c) > field.degree:
            c = udivmod(c, field.modulus)[1]
        c = utrim(c)
        self.field = field
        self.c = tuple(c)

    def _coerce(self, other):
        if isinstance(other, AlgElt):
            if other.field is not self.field:
                raise NestedExtension_("coefficients from two different extensions")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgElt(self.field, [other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgElt(self.field, uadd(list(self.c), list(o.c)))

    __radd__ = __add__

    def __neg__(self):
        return AlgElt(self.field, [-x for x in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgElt(self.field, umul(list(self.c), list(o.c)))

    __rmul__ = __mul__

    def inverse(self):
        if not self.c:
            raise ZeroDivisionError("inverse of zero in a number field")
        # extended Euclid: s*self + t*m = 1
        r0, r1 = list(self.field.modulus), list(self.c)
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = udivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, usub(s0, umul(q, s1))
        # r0 is a nonzero constant since the modulus is irreducible
        if len(r0) != 1:
            raise ValdynError("modulus is not irreducible")
        return AlgElt(self.field, [x / r0[0] for x in s0])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = AlgElt(self.field, [1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        if len(self.c) <= 1:
            return hash(self.c[0] if self.c else Fraction(0))
        return hash(("AlgElt", self.c))

    def __bool__(self):
        return bool(self.c)

    def is_rational(self):
        return len(self.c) <= 1

    def __float__(self):
        if self.field.real_root is None:
            raise ValdynError("no real embedding recorded for this extension")
        return float(ueval([float(x) for x in self.c], self.field.real_root))

    def __repr__(self):
        return f"AlgElt({format_upoly(list(self.c), self.field.name)})"

    def __str__(self):
        return "(" + format_upoly(list(self.c), self.field.name) + ")"


Coeff = Fraction | AlgElt


def coeff_field(*values):
    """The common extension among ``values`` (``None`` for Q)."""
    field = None
    for v in values:
        if isinstance(v, AlgElt):
            if field is not None and v.field is not field:
                raise NestedExtension_("coefficients from two different extensions")
            field = v.field
    return field


def format_coeff(c) -> str:
    if isinstance(c, AlgElt):
        if c.is_rational():
            return format_rat(c.c[0] if c.c else Fraction(0))
        return str(c)
    return format_rat(c)
