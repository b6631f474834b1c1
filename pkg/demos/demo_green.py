"""Green function of the automorphism (y, y^2 - x) on a real slice, written as a graymap."""
import sys

from valdyn import fixture_path, load_map
from valdyn.green import grid

F = load_map(fixture_path("aut"))
g = grid(F, (-3, 3, -3, 3), 128, 2)
out = sys.argv[1] if len(sys.argv) > 1 else "green_aut.pgm"
with open(out, "wb") as fh:
    fh.write(g.pgm(vmax=3.0))
zero = sum(1 for s in g.samples if s.bounded)
print(f"wrote {out}: {len(g.samples)} samples, {zero} in the filled set")
