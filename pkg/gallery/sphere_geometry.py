"""Norming functionals and the shape of the unit sphere along Ad-orbits.

For a norming functional (N|.) of V, the second derivative along
s -> e^{sX} V e^{-sX} is (N|[X,[X,V]]) <= 0, and it vanishes exactly when
the off-block part X_C of X (relative to the eigenspaces of V) commutes
with N.  The script checks this in both directions, compares one-sided
derivatives with the norming set, and shows the strict growth of
||V + [X,V]|| for the spectral norm at V with eigenvalues +-1.

Run with ``python3 gallery/sphere_geometry.py``.
"""

import numpy as np

from adnorm import MatrixNorm, OrbitGauge, PGauge, SpectralGauge, haar_unitary, norming_matrix
from adnorm.linalg import from_eigen, random_skew
from adnorm.verify import check_equality_face, check_lateral_derivative, check_curvature_criterion, curvature_witnesses

rng = np.random.default_rng(3)
m = MatrixNorm(OrbitGauge([1.0, 1.0, -2.0], normalize=True), 3)
V = from_eigen([0.9, 0.4, -1.3], haar_unitary(3, rng))
N = norming_matrix(m, V)
print("norming certificate residuals:", {k: f"{v:.1e}" for k, v in N.residuals.items()})
for X, expect_zero in curvature_witnesses(m, V, rng):
    r = check_curvature_criterion(m, V, X)
    print(f"  expect zero={expect_zero!s:5s}  (N|[X,[X,V]]) = {r.lhs:+.3e}   ||[X_C,N]|| = {r.commutator_norm:.3e}   {r.verdict}")

ms = MatrixNorm(SpectralGauge(), 3)
X = from_eigen([1.0, -1.0, 0.2])
Y = from_eigen([0.3, 0.5, 0.0])
r = check_lateral_derivative(ms, X, Y)
print(f"spectral norm at a kink: right derivative {r.fd:.6f}, max over norming set {r.analytic:.6f}")

Vpm = from_eigen([1.0, -1.0, 1.0], haar_unitary(3, rng))
Xr = random_skew(3, rng)
c = check_equality_face(ms, Vpm, Xr, strict_expected=True)
print(f"||V + [X,V]|| - ||V|| = {c.margin:.4f} for the spectral norm at eigenvalues +-1 ({c.verdict})")
c = check_equality_face(MatrixNorm(PGauge(2), 3), V, Xr, strict_expected=True)
print(f"Frobenius: margin {c.margin:.4f} ({c.verdict})")
