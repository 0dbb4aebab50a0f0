"""Majorization and convex hulls of unitary orbits.

Z lies in the convex hull of {UWU*} exactly when the spectrum of Z is
majorized by that of W, and then every invariant norm satisfies
||Z|| <= ||W||.  The script builds such a Z, recovers an explicit convex
combination of conjugates of W and shows an orbit norm separating a pair
that is not majorized.

Run with ``python3 gallery/orbit_hulls.py``.
"""

import numpy as np

from adnorm import MatrixNorm, haar_unitary, hull_decomposition, in_orbit_hull, majorizes, standard_gauges
from adnorm.linalg import eigvals, from_eigen
from adnorm.majorization import separating_orbit_gauge

rng = np.random.default_rng(1)
W = from_eigen([3.0, 1.0, -1.0, -3.0], haar_unitary(4, rng))
lam = rng.dirichlet(np.ones(5))
Z = sum(l * U @ W @ U.conj().T for l, U in zip(lam, haar_unitary(4, rng, size=5)))

rep = majorizes(eigvals(W), eigvals(Z))
print("partial-sum gaps:", np.round(rep.partial_gaps, 6), "majorized:", rep.holds)
dec = hull_decomposition(Z, W)
print(f"Z = sum of {dec.count} conjugates of W (Birkhoff terms {dec.birkhoff_terms}), "
      f"weights {np.round(dec.weights, 4)}, residual {dec.residual:.1e}")

worst = max(MatrixNorm(g, 4)(Z) - MatrixNorm(g, 4)(W) for g in standard_gauges(4))
print(f"max over standard gauges of ||Z|| - ||W||: {worst:.3f}")

Z2 = from_eigen([3.5, 0.0, -1.0, -2.5])
print("Z2 in hull:", in_orbit_hull(Z2, W))
g, excess = separating_orbit_gauge(Z2, W, seed=2)
print("separating orbit gauge c =", np.round(g.c, 4), f"with ||Z2|| - ||W|| = {excess:.4f}")
