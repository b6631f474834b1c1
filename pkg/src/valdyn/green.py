"""Escape-rate Green function ``G+(p) = lim lambda1^-n log+ ||F^n p||``.

Orbits are iterated with native complex numbers while they are small and
with extended-exponent numbers once ``||F^n p||`` would overflow a double,
so tens of iterations of a quadratic map stay representable.  The norm is
``||(x, y)|| = max(1, |x|, |y|)``.
"""
from __future__ import annotations

import math
import warnings
from typing import NamedTuple

from .errors import GreenError
from .poly import PolyMap

LN2 = math.log(2.0)


class ExtFloat:
    """Real number ``mantissa * 2**exponent`` with ``|mantissa|`` in ``[1, 2)`` or zero."""

    __slots__ = ("m", "e")

    def __init__(self, m=0.0, e=0):
        if m == 0.0:
            self.m, self.e = 0.0, 0
            return
        if not math.isfinite(m):
            raise GreenError(f"non-finite mantissa {m!r}")
        f, k = math.frexp(m)      # f in [0.5, 1)
        self.m = f * 2.0
        self.e = e + k - 1

    @classmethod
    def from_float(cls, x: float):
        return cls(x, 0)

    def __mul__(self, other):
        if not isinstance(other, ExtFloat):
            other = ExtFloat(float(other))
        return ExtFloat(self.m * other.m, self.e + other.e)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, ExtFloat):
            other = ExtFloat(float(other))
        if self.m == 0.0:
            return other
        if other.m == 0.0:
            return self
        if self.e < other.e:
            self, other = other, self
        shift = other.e - self.e
        if shift < -1100:
            return self
        return ExtFloat(self.m + math.ldexp(other.m, shift), self.e)

    __radd__ = __add__

    def __neg__(self):
        out = ExtFloat()
        out.m, out.e = -self.m, self.e
        return out

    def __sub__(self, other):
        return self + (-other)

    def _cmp(self, other):
        if not isinstance(other, ExtFloat):
            other = ExtFloat(float(other))
        d = self - other
        return (d.m > 0) - (d.m < 0)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        return self._cmp(other) == 0

    def __float__(self):
        return math.ldexp(self.m, self.e) if self.e < 1024 else math.copysign(math.inf, self.m)

    def log(self) -> float:
        if self.m <= 0:
            raise GreenError("log of a non-positive number")
        return math.log(self.m) + self.e * LN2

    def __repr__(self):
        return f"ExtFloat({self.m!r}, {self.e})"


class ExtComplex:
    """Complex number ``c * 2**e`` with ``max(|Re c|, |Im c|)`` in ``[1, 2)`` or zero."""

    __slots__ = ("c", "e")

    def __init__(self, c=0j, e=0):
        c = complex(c)
        big = max(abs(c.real), abs(c.imag))
        if big == 0.0:
            self.c, self.e = 0j, 0
            return
        if not math.isfinite(big):
            raise GreenError(f"non-finite value {c!r}")
        _, k = math.frexp(big)
        self.c = complex(math.ldexp(c.real, 1 - k), math.ldexp(c.imag, 1 - k))
        self.e = e + k - 1

    def __mul__(self, other):
        if not isinstance(other, ExtComplex):
            other = ExtComplex(other)
        return ExtComplex(self.c * other.c, self.e + other.e)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, ExtComplex):
            other = ExtComplex(other)
        if self.c == 0:
            return other
        if other.c == 0:
            return self
        if self.e < other.e:
            self, other = other, self
        shift = other.e - self.e
        if shift < -1100:
            return self
        oc = complex(math.ldexp(other.c.real, shift), math.ldexp(other.c.imag, shift))
        return ExtComplex(self.c + oc, self.e)

    __radd__ = __add__

    def abs(self) -> ExtFloat:
        return ExtFloat(abs(self.c), self.e)

    def to_complex(self) -> complex:
        return complex(math.ldexp(self.c.real, self.e), math.ldexp(self.c.imag, self.e))

    def __repr__(self):
        return f"ExtComplex({self.c!r}, {self.e})"


def _compile(R):
    return [(i, j, complex(float(c))) for (i, j), c in R.terms.items()]


def _eval_native(terms, x, y):
    return sum(c * x ** i * y ** j for i, j, c in terms)


def _eval_ext(terms, x: ExtComplex, y: ExtComplex, deg):
    px, py = [ExtComplex(1)], [ExtComplex(1)]
    for _ in range(deg):
        px.append(px[-1] * x)
        py.append(py[-1] * y)
    acc = ExtComplex(0)
    for i, j, c in terms:
        acc = acc + px[i] * py[j] * c
    return acc


class _Orbit:
    """Step ``F`` on a point, switching to extended exponents when needed."""

    def __init__(self, F: PolyMap):
        self.P, self.Q = _compile(F.P), _compile(F.Q)
        self.deg = max(F.degree(), 1)
        self.safe = 250.0 / self.deg     # log10 of the largest norm kept native

    def step(self, x, y):
        if isinstance(x, ExtComplex):
            nx = _eval_ext(self.P, x, y, self.deg)
            ny = _eval_ext(self.Q, x, y, self.deg)
            return self._shrink(nx, ny)
        big = max(abs(x), abs(y), 1.0)
        if math.log10(big) < self.safe:
            nx, ny = _eval_native(self.P, x, y), _eval_native(self.Q, x, y)
            if nx != nx or ny != ny:
                raise GreenError("NaN in orbit")
            return nx, ny
        return self.step(ExtComplex(x), ExtComplex(y))

    def _shrink(self, x, y):
        if max(x.e, y.e) < 0.5 * self.safe * 3.32:
            return x.to_complex(), y.to_complex()
        return x, y


def log_norm(x, y) -> float:
    """``log+ ||(x, y)||`` for native or extended coordinates."""
    if isinstance(x, ExtComplex):
        a, b = x.abs(), y.abs()
        big = a if a >= b else b
        return max(big.log(), 0.0)
    big = max(abs(x), abs(y), 1.0)
    if not math.isfinite(big):
        raise GreenError("orbit overflowed native precision")
    return math.log(big)


class GreenSample(NamedTuple):
    point: tuple
    estimate: float
    n_used: int
    converged: bool
    bounded: bool

    @property
    def status(self):
        if self.bounded:
            return "bounded"
        return "yes" if self.converged else "no"


def green_value(F: PolyMap, p, lambda1, n_max: int = 40, tol: float = 1e-12,
                radius: float = 1e4, lambda2=None) -> GreenSample:
    """Estimate ``G+(p)``.

    Parameters
    ----------
    lambda1 : real
        Asymptotic degree (converted once to a double); must exceed 1.
    radius : float
        Escape radius ``R``.  The orbit counts as escaping once its norm
        passes ``2R``; if it stays within ``R`` for ``n_max`` steps it is
        declared bounded and the estimate is exactly 0.
    lambda2 : optional
        Topological degree; a warning is issued unless ``lambda2 < lambda1``.
    """
    lam = float(lambda1)
    if not lam > 1.0:
        raise GreenError("lambda1 must be larger than 1")
    if lambda2 is not None and not float(lambda2) < lam:
        warnings.warn("G+ is only guaranteed to exist when lambda2 < lambda1", stacklevel=2)
    orb = _Orbit(F)
    x, y = complex(p[0]), complex(p[1])
    lr = math.log(radius)
    g_prev = log_norm(x, y)
    escaped = g_prev > lr + LN2
    stayed = g_prev <= lr
    scale = 1.0
    for n in range(1, n_max + 1):
        x, y = orb.step(x, y)
        L = log_norm(x, y)
        if L != L:
            raise GreenError("NaN in orbit")
        scale /= lam
        g = L * scale
        if L > lr + LN2:
            escaped = True
        if L > lr:
            stayed = False
        if escaped and abs(g - g_prev) < tol:
            return GreenSample((p[0], p[1]), g, n, True, False)
        g_prev = g
    if stayed:
        return GreenSample((p[0], p[1]), 0.0, n_max, False, True)
    return GreenSample((p[0], p[1]), g_prev, n_max, False, False)


class GreenGrid(NamedTuple):
    xs: list
    ys: list
    samples: list       # row-major: y outer, x inner

    def csv(self) -> str:
        lines = ["x,y,G,converged,n"]
        for s in self.samples:
            px, py = s.point
            lines.append(f"{_num(px)},{_num(py)},{s.estimate:.12g},{s.status},{s.n_used}")
        return "\n".join(lines) + "\n"

    def pgm(self, vmax=None) -> bytes:
        vals = [s.estimate for s in self.samples]
        top = max(vals) if vmax is None else float(vmax)
        w, h = len(self.xs), len(self.ys)
        out = bytearray(f"P5\n{w} {h}\n255\n".encode("ascii"))
        for v in vals:
            out.append(0 if top <= 0 else int(round(255 * min(max(v, 0.0), top) / top)))
        return bytes(out)


def _num(z):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _axis(lo, hi, n):
    if n <= 1 or lo == hi:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def grid(F: PolyMap, window, resolution: int, lambda1, slice_offset=(0.0, 0.0), **kw) -> GreenGrid:
    """``green_value`` on a raster of a real 2-plane slice.

    ``window = (x0, x1, y0, y1)``; sample points are
    ``(x + i*a, y + i*b)`` with ``(a, b) = slice_offset``.  A window of zero
    area gives the single sample at ``(x0, y0)``.
    """
    x0, x1, y0, y1 = (float(t) for t in window)
    if resolution < 1:
        raise GreenError("resolution must be positive")
    if (x1 - x0) * (y1 - y0) == 0:
        xs, ys = [x0], [y0]
    else:
        xs, ys = _axis(x0, x1, resolution), _axis(y0, y1, resolution)
    a, b = slice_offset
    samples = []
    for yv in ys:
        for xv in xs:
            samples.append(green_value(F, (complex(xv, a), complex(yv, b)), lambda1, **kw))
    return GreenGrid(xs, ys, samples)


class GrowthReport(NamedTuple):
    logs: list          # log+ ||F^n p|| for n = 0..n_max
    C: float
    base: float         # lambda2 + epsilon

    def rows(self):
        out = []
        for n, L in enumerate(self.logs):
            bound = self.base ** n * (self.logs[0] + self.C)
            out.append((n, L, bound))
        return out

    def render(self) -> str:
        lines = ["n,log_norm,bound", *(f"{n},{L:.12g},{b:.12g}" for n, L, b in self.rows())]
        lines.append(f"C = {self.C:.12g}")
        return "\n".join(lines)


def growth_bound_report(F: PolyMap, p, lambda2, epsilon: float = 0.1, n_max: int = 40,
                        lambda1=None, radius: float = 1e4) -> GrowthReport:
    """Smallest ``C`` with ``log+ ||F^n p|| <= (lambda2 + eps)^n (log+ ||p|| + C)`` for ``n <= n_max``.

    Only for points whose orbit is bounded (estimate 0); ``lambda1`` is
    used for that check when given.  Affine maps accept any point.
    """
    if lambda1 is not None and float(lambda1) > 1:
        s = green_value(F, p, lambda1, n_max=n_max, radius=radius)
        if s.estimate != 0.0:
            raise GreenError("growth bound needs a point of K+ (estimate 0)")
    orb = _Orbit(F)
    x, y = complex(p[0]), complex(p[1])
    logs = [log_norm(x, y)]
    for _ in range(n_max):
        x, y = orb.step(x, y)
        logs.append(log_norm(x, y))
    # linear maps have no Green function; any point is admissible for them
    if lambda1 is None and F.degree() > 1 and logs[-1] > math.log(radius):
        raise GreenError("orbit leaves the escape radius: not a point of K+")
    base = float(lambda2) + epsilon
    C = 0.0
    for n, L in enumerate(logs):
        C = max(C, L / base ** n - logs[0])
    return GrowthReport(logs, C, base)
