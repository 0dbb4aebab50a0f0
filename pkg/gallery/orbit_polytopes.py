"""Orbit polytopes and their polar duals.

The dual unit ball of the orbit norm of c, cut by the traceless diagonal
matrices, is the convex hull of the permutations of c.  For n = 3 this is a
hexagon (regular c) or a triangle (c with a repeated entry); the script
computes polars and tests self-duality, then writes the hexagon as CSV for
plotting.

Run with ``python3 gallery/orbit_polytopes.py [out.csv]``.
"""

import sys

import numpy as np

from adnorm.geometry import emit_csv, is_self_dual, orbit_polytope, polar_dual

for c in ([1.0, 0.0, -1.0], [1.0, 1.0, -2.0], [3.0, -1.0, -2.0], [3.0, 1.0, -1.0, -3.0]):
    P = orbit_polytope(c)
    D = polar_dual(P)
    ok, info = is_self_dual(P)
    print(f"c = {c}: {len(P.vertices)} vertices, {len(P.facets)} facets, self-dual: {ok}")

hexagon = orbit_polytope([1.0, 0.0, -1.0])
dual = polar_dual(hexagon).vertices
print("polar of the hexagon (rescaled so the largest entry is 2):")
print(np.round(2 * dual / np.abs(dual).max(axis=1, keepdims=True), 9))

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(emit_csv(hexagon))
    print("hexagon written to", sys.argv[1])
