"""Blowup chains at infinity and their numerical invariants.

Each prime ``E`` at infinity carries ``b = -ord_E(L)`` for a generic
affine function ``L``, ``a = 1 + ord_E(dx ^ dy)``, the skewness ``alpha``
and the thinness ``A = a/b``.  The line at infinity has
``(b, a, alpha, A) = (1, -2, 1, -2)``.  Points are tracked only through the
primes they lie on.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .errors import NotAdjacent, NotCenteredAtInfinity, NotDivisorial, UnknownPrime
from .numeric import format_rat, is_rational, sign


class PrimeRecord(NamedTuple):
    id: int
    b: int
    a: int
    alpha: Fraction
    thinness: Fraction

    def __str__(self):
        return f"{self.id} {self.b} {self.a} {format_rat(self.alpha)} {format_rat(self.thinness)}"


class DualGraph:
    """Persistent dual graph: every operation returns a new graph."""

    __slots__ = ("records", "adj", "order", "parents")

    def __init__(self, records=None, adj=None, order=(), parents=None):
        if records is None:
            root = PrimeRecord(0, 1, -2, Fraction(1), Fraction(-2))
            records = {0: root}
            adj = {0: frozenset()}
            order = (0,)
        self.records = records
        self.adj = adj
        self.order = tuple(order)
        self.parents = dict(parents or {})

    @property
    def root(self):
        return 0

    def __getitem__(self, i) -> PrimeRecord:
        try:
            return self.records[i]
        except KeyError:
            raise UnknownPrime(f"no prime with id {i}") from None

    def __contains__(self, i):
        return i in self.records

    def __len__(self):
        return len(self.records)

    def neighbors(self, i):
        self[i]
        return sorted(self.adj[i])

    def adjacent(self, i, j):
        return j in self.adj.get(i, ())

    def _add(self, rec, links, drop=None):
        records = dict(self.records)
        adj = dict(self.adj)
        records[rec.id] = rec
        adj[rec.id] = frozenset(links)
        for j in links:
            adj[j] = adj[j] | {rec.id}
        if drop is not None:
            i, j = drop
            adj[i] = adj[i] - {j}
            adj[j] = adj[j] - {i}
        parents = dict(self.parents)
        parents[rec.id] = tuple(links)
        return DualGraph(records, adj, self.order + (rec.id,), parents)

    def next_id(self):
        return max(self.records) + 1

    def dump(self) -> str:
        lines = []
        for i in sorted(self.records):
            r = self.records[i]
            nb = ",".join(str(j) for j in sorted(self.adj[i]))
            lines.append(f"{r} neighbors=[{nb}]")
        return "\n".join(lines)

    def prefix(self, n):
        """The graph after the first ``n`` primes (the root counts as the first)."""
        g = DualGraph()
        for i in self.order[1:n]:
            g = _replay(g, self, i)
        return g

    def steps(self):
        return [self.prefix(n) for n in range(1, len(self.order) + 1)]


def _replay(g, full, i):
    # rebuild prime i from the primes it was blown up on
    earlier = full.parents[i]
    if len(earlier) == 1:
        g2, _ = blowup_free(g, earlier[0])
    else:
        g2, _ = blowup_satellite(g, earlier[0], earlier[1])
    return g2


def blowup_free(g: DualGraph, E: int):
    """Blow up a free point of ``E``; returns ``(graph, new id)``."""
    r = g[E]
    b = r.b
    new = PrimeRecord(g.next_id(), b, r.a + 1, r.alpha - Fraction(1, b * b), r.thinness + Fraction(1, b))
    return g._add(new, [E]), new.id


def blowup_satellite(g: DualGraph, E: int, E2: int):
    """Blow up the intersection point of the adjacent primes ``E`` and ``E2``."""
    r1, r2 = g[E], g[E2]
    if E == E2 or not g.adjacent(E, E2):
        raise NotAdjacent(f"primes {E} and {E2} do not meet")
    b = r1.b + r2.b
    a = r1.a + r2.a
    alpha = (r1.b * r1.alpha + r2.b * r2.alpha) / b
    new = PrimeRecord(g.next_id(), b, a, alpha, Fraction(a, b))
    return g._add(new, [E, E2], drop=(E, E2)), new.id


def record_tight(r: PrimeRecord) -> bool:
    return r.alpha >= 0 and r.thinness <= 0


def is_tight(g: DualGraph) -> bool:
    return all(record_tight(r) for r in g.records.values())


def legal_next(g: DualGraph, E: int, E2=None) -> bool:
    """Whether blowing up the given point keeps a tight graph tight.

    A satellite point (``E2`` given) is always legal; a free point on ``E``
    is illegal exactly when ``alpha_E = 0`` or ``A_E = 0``.
    """
    if E2 is not None:
        if not g.adjacent(E, E2):
            raise NotAdjacent(f"primes {E} and {E2} do not meet")
        return True
    r = g[E]
    return r.alpha != 0 and r.thinness != 0


def random_legal_chain(rng, length: int):
    """A random chain of legal blowups starting from the line at infinity."""
    g = DualGraph()
    for _ in range(length):
        moves = []
        for i in g.records:
            if legal_next(g, i):
                moves.append((i, None))
            for j in g.adj[i]:
                if i < j:
                    moves.append((i, j))
        if not moves:
            break
        i, j = moves[rng.randrange(len(moves))]
        g = blowup_free(g, i)[0] if j is None else blowup_satellite(g, i, j)[0]
    return g


# ---------------------------------------------------------------------------
# Realization of valuations by blowup chains


class Walk(NamedTuple):
    graph: DualGraph
    last: int            # the realizing prime (divisorial case) or -1
    segment: tuple       # (Z, W) enclosing primes for an irrational tail
    alpha: object
    thinness: object
    multiplicity: object


def _euclid(g, Z, W, s, t):
    """Continued-fraction walk on local weights ``(s, t)`` of ``(z_Z, z_W)``.

    ``W`` is None while the second coordinate is a free one.  Returns
    ``(graph, Z, W, last, s, t)``; ``last`` is the prime realizing the
    monomial valuation when ``s/t`` is rational, otherwise -1 and ``(Z, W)``
    enclose it.
    """
    while True:
        if W is not None and not (is_rational(s) and is_rational(t)):
            # irrational ratio: stop as soon as the enclosing segment is known
            return g, Z, W, -1, s, t
        if W is None:
            g, E = blowup_free(g, Z)
        else:
            g, E = blowup_satellite(g, Z, W)
        c = sign(s - t)
        if c == 0:
            return g, Z, W, E, s, t
        if c < 0:
            t = t - s
            Z = E
        else:
            s = s - t
            W = E


def euclid_walk(v) -> Walk:
    """Blowup chain of a quasimonomial valuation and its invariants."""
    gammas, tail = v.local_exponents()
    g = DualGraph()
    Z = g.root
    rest = list(gammas)
    while rest:
        gam = rest.pop(0)
        if gam.denominator == 1:
            continue  # coordinate change at a free point
        g, Zs, Ws, E, _, _ = _euclid(g, Z, None, Fraction(1), gam)
        p, q = gam.numerator, gam.denominator
        rest = [q * x - p for x in rest]
        tail = q * tail - p
        Z = E
    if sign(tail) == 0:
        r = g[Z]
        m = Fraction(1) if Z == g.root else _multiplicity_below(g, Z, None, None)
        return Walk(g, Z, (), r.alpha, r.thinness, m)
    if sign(tail) < 0:
        raise NotCenteredAtInfinity("datum tail lies above the realizing prime")
    g, Zf, Wf, E, s, t = _euclid(g, Z, None, Fraction(1), tail)
    if E >= 0:
        r = g[E]
        return Walk(g, E, (), r.alpha, r.thinness, _multiplicity_below(g, E, Zf, Wf))
    rz, rw = g[Zf], g[Wf]
    norm = s * rz.b + t * rw.b
    su, tu = s / norm, t / norm
    alpha = su * rz.b * rz.alpha + tu * rw.b * rw.alpha
    thin = su * rz.a + tu * rw.a
    m = (rz.thinness - rw.thinness) / (rw.alpha - rz.alpha)
    return Walk(g, -1, (Zf, Wf), alpha, thin, m)


def _multiplicity_below(g, E, Z, W):
    """Slope ``-dA/dalpha`` on the segment just below the prime ``E``."""
    cands = [i for i in (Z, W) if i is not None and i in g] if Z is not None else list(g.adj[E])
    below = max(cands, key=lambda i: g[i].alpha)
    r, rb = g[E], g[below]
    return (r.thinness - rb.thinness) / (rb.alpha - r.alpha)


def realize_divisorial(v):
    """``(graph, id)`` of the prime whose normalized valuation is ``v``."""
    if not v.is_divisorial:
        raise NotDivisorial("only divisorial valuations are realized by a finite chain")
    w = euclid_walk(v)
    return w.graph, w.last


def intersect(v, w):
    """Intersection number ``alpha(v ^ w)`` of the associated classes."""
    from .valtree import alpha, meet

    return alpha(meet(v, w)[1])


def weights_of(g: DualGraph, E: int, v):
    """Integrality check on the realized prime: ``b*nu(x)`` and ``b*nu(y)`` are integers."""
    b = g[E].b
    return b * v.nu_x, b * v.nu_y
