"""Eigenvaluations with their tree invariants and realizing blowup chains."""
from valdyn import fixture_path, invariants, load_map
from valdyn.blowup import euclid_walk
from valdyn.dynamics import eigenvaluation

for name in ("ex53", "y2x3", "x2py", "quartic", "mono21"):
    rep = eigenvaluation(load_map(fixture_path(name)))
    print(f"== {name}: {rep.summary()}")
    if rep.exact:
        print(invariants(rep.nu_star))
        walk = euclid_walk(rep.nu_star)
        print(walk.graph.dump())
        if walk.last < 0:
            print(f"irrational: between primes {walk.segment[0]} and {walk.segment[1]}")
