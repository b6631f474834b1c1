"""Valuative dynamics of polynomial maps of the affine plane.

Exact computations on the tree of valuations centered at infinity:
local degrees and pushforwards, degree growth of iterates, eigenvaluations,
the degree-growth classification, blowup invariants, and numerical Green
functions.
"""
from importlib import resources

from .errors import ValdynError
from .numeric import QuadReal, min_poly, sqrt_rat
from .poly import BiPoly, PolyMap, X, Y, compose, iterate, jacobian_det, load_map, parse_map, topological_degree
from .valtree import MINUS_DEG, ValInfinity, invariants, meet, monomial

__version__ = "0.1.0"

__all__ = [
    "ValdynError", "QuadReal", "min_poly", "sqrt_rat",
    "BiPoly", "PolyMap", "X", "Y", "compose", "iterate", "jacobian_det", "load_map", "parse_map",
    "topological_degree", "MINUS_DEG", "ValInfinity", "invariants", "meet", "monomial",
    "fixture_path", "fixture_names",
]


def fixture_path(name: str):
    """Path of a bundled fixture map, e.g. ``fixture_path("ex53")``."""
    if not name.endswith(".map"):
        name += ".map"
    return resources.files(__package__).joinpath("fixtures", name)


def fixture_names():
    return sorted(p.name[:-4] for p in resources.files(__package__).joinpath("fixtures").iterdir()
                  if p.name.endswith(".map"))
