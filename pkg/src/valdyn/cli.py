"""Command line entry point ``valdyn``.

Exit codes: 0 on success, 1 on domain errors, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

from . import green as G
from .blowup import euclid_walk
from .dynamics import (classify, d_of, degree_sequence, degree_sequence_bruteforce, detect_recurrence,
                       eigenvaluation, extends_to_weighted_P2, jacobian_formula_check,
                       non_properness_witness, pushforward)
from .errors import ValdynError
from .numeric import format_real
from .poly import load_map, topological_degree
from .valtree import MINUS_DEG, XMAJOR, YMAJOR, ValInfinity, invariants, monomial, render


class UsageError(Exception):
    pass


_TERM = re.compile(r"^\s*(theta|[-+]?\d+(?:/\d+)?)\*[xy]\^\(([-+]?\d+(?:/\d+)?)\)\s*$")


def parse_valuation(text: str) -> ValInfinity:
    """Valuation from ``-deg`` (or ``deg``), ``s`` (``nu(x) = -s, nu(y) = -1``), raw
    weights ``a,b``, or a rendered datum such as
    ``chart=x-major; y = 1*x^(1/2) + theta*x^(1/3)``."""
    t = text.strip()
    try:
        if t in ("-deg", "deg", "minus-deg"):
            return MINUS_DEG
        if t.startswith("chart="):
            return _parse_datum(t)
        if "," in t:
            a, b = t.split(",", 1)
            return monomial(Fraction(a.strip()), Fraction(b.strip()))
        return monomial(-Fraction(t), -1)
    except (ValueError, ZeroDivisionError) as err:
        raise UsageError(f"cannot read valuation {text!r}: {err}") from None


def _parse_datum(t):
    head, _, body = t.partition(";")
    chart = head.split("=", 1)[1].strip()
    if chart not in (XMAJOR, YMAJOR):
        raise ValueError(f"unknown chart {chart}")
    body = body.strip()
    if body.startswith("nu("):
        parts = dict(p.strip().split("=", 1) for p in body.split(";"))
        return monomial(Fraction(parts["nu(x)"]), Fraction(parts["nu(y)"]))
    _, _, rhs = body.partition("=")
    terms, tail = [], None
    for chunk in rhs.split(" + "):
        m = _TERM.match(chunk)
        if not m:
            raise ValueError(f"cannot read term {chunk!r}")
        c, e = m.groups()
        if c == "theta":
            tail = Fraction(e)
        else:
            terms.append((Fraction(e), Fraction(c)))
    if tail is None:
        raise ValueError("datum needs a theta tail")
    return ValInfinity(chart, terms, tail)


def _floats(text, n):
    try:
        vals = [complex(v.strip().replace("i", "j")) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected {n} comma separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"expected {n} comma separated numbers, got {text!r}")
    return vals


def _lambda1(F, args):
    if args.lambda1 is not None:
        return float(Fraction(args.lambda1))
    rec = detect_recurrence(degree_sequence(F, 10).degrees, 4)
    return float(rec.dominant_root)


# -- subcommands ----------------------------------------------------------


def cmd_degrees(args):
    F = load_map(args.map)
    if args.bruteforce:
        return " ".join(str(a) for a in degree_sequence_bruteforce(F, args.n))
    return str(degree_sequence(F, args.n, args.max_refine))


def cmd_recur(args):
    F = load_map(args.map)
    seq = degree_sequence(F, args.n, args.max_refine).degrees
    return str(detect_recurrence(seq, args.max_order))


def cmd_eigen(args):
    r = eigenvaluation(load_map(args.map), max_iter=args.max_iter, max_refine=args.max_refine)
    return r.render() if args.verbose else r.summary()


def cmd_lambda2(args):
    return str(topological_degree(load_map(args.map), seed=args.seed))


def cmd_classify(args):
    F = load_map(args.map)
    conj = None
    if args.conj or args.conj_inv:
        if not (args.conj and args.conj_inv):
            raise UsageError("--conj and --conj-inv go together")
        conj = (load_map(args.conj), load_map(args.conj_inv))
    return classify(F, N=args.n, conj=conj, max_refine=args.max_refine, seed=args.seed).render()


def cmd_invariants(args):
    v = parse_valuation(args.weights)
    inv = invariants(v, allow_truncated=True)
    return "\n".join([
        f"valuation = {render(v)}",
        f"alpha = {format_real(inv.alpha)}",
        f"thinness = {format_real(inv.thinness)}",
        f"multiplicity = {format_real(inv.multiplicity)}",
    ])


def cmd_push(args):
    F = load_map(args.map)
    v = parse_valuation(args.weights)
    w = pushforward(F, v, args.max_refine)
    return f"d = {format_real(d_of(F, v))}\nimage = {render(w)}"


def cmd_jacobian(args):
    F = load_map(args.map)
    v = parse_valuation(args.weights)
    lhs, rhs, ok = jacobian_formula_check(F, v, args.max_refine)
    return f"lhs={format_real(lhs)} rhs={format_real(rhs)} equal={'yes' if ok else 'no'}"


def cmd_extends(args):
    ok = extends_to_weighted_P2(load_map(args.map), args.p, args.q, args.max_refine)
    return "yes" if ok else "no"


def cmd_witness(args):
    w = non_properness_witness(load_map(args.map), args.bound)
    return "none" if w is None else f"witness = {render(w)}\nd = 0"


def cmd_blowup(args):
    v = parse_valuation(args.weights)
    walk = euclid_walk(v)
    lines = ["id b a alpha A", walk.graph.dump()]
    if walk.last >= 0:
        lines.append(f"realized_by = {walk.last}")
    else:
        lines.append(f"segment = {walk.segment[0]},{walk.segment[1]}")
    return "\n".join(lines)


def cmd_green(args):
    F = load_map(args.map)
    lam = _lambda1(F, args)
    if args.action == "value":
        (px, py) = _floats(args.point, 2)
        s = G.green_value(F, (px, py), lam, n_max=args.n_max, tol=args.tol, radius=args.radius)
        return f"G={s.estimate:.12g} converged={s.status} n={s.n_used}"
    if args.action == "grid":
        win = [z.real for z in _floats(args.window, 4)]
        off = tuple(z.real for z in _floats(args.offset, 2))
        g = G.grid(F, win, args.resolution, lam, slice_offset=off, n_max=args.n_max,
                   tol=args.tol, radius=args.radius)
        if args.pgm:
            with open(args.pgm, "wb") as fh:
                fh.write(g.pgm(args.vmax))
        return g.csv().rstrip("\n")
    (px, py) = _floats(args.point, 2)
    lam2 = args.lambda2 if args.lambda2 is not None else topological_degree(F, seed=args.seed)
    rep = G.growth_bound_report(F, (px, py), Fraction(lam2), args.epsilon, args.n_max,
                                lambda1=lam, radius=args.radius)
    return rep.render()


# -- parser ----------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for randomized steps (VALDYN_SEED overrides)")
    common.add_argument("--out", default=None, help="write the report to this file")
    common.add_argument("--max-refine", type=int, default=32, help="pushforward refinement bound (default 32)")

    p = argparse.ArgumentParser(prog="valdyn", description="Valuative dynamics of polynomial maps of the plane.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, needs_map=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if needs_map:
            sp.add_argument("map", help="map file (P = ...; Q = ...)")
        sp.set_defaults(func=func)
        return sp

    sp = add("degrees", cmd_degrees, "degree sequence deg F^0 .. deg F^N")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bruteforce", action="store_true", help="compose literally instead")

    sp = add("recur", cmd_recur, "integer linear recurrence of the degrees")
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--max-order", type=int, default=4)

    sp = add("eigen", cmd_eigen, "eigenvaluation and lambda1")
    sp.add_argument("--max-iter", type=int, default=40)
    sp.add_argument("--verbose", action="store_true", help="one field per line")

    add("lambda2", cmd_lambda2, "topological degree")

    sp = add("classify", cmd_classify, "degree growth classification")
    sp.add_argument("--n", type=int, default=12)
    sp.add_argument("--conj", default=None, help="map file of a coordinate change phi")
    sp.add_argument("--conj-inv", default=None, help="map file of phi^-1")

    sp = add("invariants", cmd_invariants, "skewness, thinness, multiplicity", needs_map=False)
    sp.add_argument("--weights", required=True, help="s (nu(x)=-s, nu(y)=-1), a,b, -deg or a datum")

    sp = add("push", cmd_push, "normalized pushforward of a valuation")
    sp.add_argument("--weights", required=True)

    sp = add("jacobian-check", cmd_jacobian, "both sides of the Jacobian formula")
    sp.add_argument("--weights", default="deg")

    sp = add("extends", cmd_extends, "extension to the weighted projective plane")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)

    sp = add("witness", cmd_witness, "search for a non-properness witness")
    sp.add_argument("--bound", type=int, default=20)

    sp = add("blowup", cmd_blowup, "blowup chain realizing a valuation", needs_map=False)
    sp.add_argument("--weights", required=True)

    sp = add("green", cmd_green, "Green function estimates", needs_map=False)
    sp.add_argument("action", choices=["value", "grid", "bound"])
    sp.add_argument("map", help="map file (P = ...; Q = ...)")
    sp.add_argument("--point", default="0,0", help="x,y (complex allowed, e.g. 1+2j)")
    sp.add_argument("--window", default="-3,3,-3,3", help="x0,x1,y0,y1")
    sp.add_argument("--offset", default="0,0", help="imaginary parts of the slice")
    sp.add_argument("--resolution", type=int, default=64)
    sp.add_argument("--lambda1", default=None)
    sp.add_argument("--lambda2", type=int, default=None)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--n-max", type=int, default=40)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--radius", type=float, default=1e4)
    sp.add_argument("--pgm", default=None, help="also write a P5 graymap here")
    sp.add_argument("--vmax", type=float, default=None, help="clamp value for the graymap")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except UsageError as err:
        print(f"valdyn: usage error: {err}", file=sys.stderr)
        return 2
    except ValdynError as err:
        print(f"valdyn: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"valdyn: {err}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
