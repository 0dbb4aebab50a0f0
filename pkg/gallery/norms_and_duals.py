"""Unitarily invariant norms on skew-Hermitian matrices and their duals.

A norm on u(n) that is invariant under X -> UXU* only sees the eigenvalues
of -iX, so it is a symmetric gauge applied to the spectrum.  This script
evaluates a few of them, checks the invariance on a random conjugation and
compares dual norms with their closed forms.

Run with ``python3 gallery/norms_and_duals.py``.
"""

import numpy as np

from adnorm import EllipseGauge, KyFanGauge, MatrixNorm, OrbitGauge, PGauge, ToastGauge, haar_unitary
from adnorm.linalg import eigvals, from_eigen

rng = np.random.default_rng(0)
U = haar_unitary(3, rng)
X = from_eigen([2.0, 0.5, -1.5], U)
print("eigenvalues of -iX:", np.round(eigvals(X), 6))

for g in (PGauge(2), PGauge(3), KyFanGauge(2), OrbitGauge([1.0, 0.0, -1.0], normalize=True)):
    m = MatrixNorm(g, 3)
    W = haar_unitary(3, rng)
    print(f"{g!r:45s} ||X|| = {m(X):.6f}   ||WXW*|| - ||X|| = {m(W @ X @ W.conj().T) - m(X):.1e}")

# dual norms: the l_p dual is l_q on eigenvalues, the Ky-Fan dual is
# max(||x||_1 / k, ||x||_inf)
x = eigvals(X)
print("p=3 dual:", MatrixNorm(PGauge(3), 3).dual(X), "vs l_1.5:", np.linalg.norm(x, 1.5))
print("Ky-Fan 2 dual:", MatrixNorm(KyFanGauge(2), 3).dual(X), "vs", max(np.abs(x).sum() / 2, np.abs(x).max()))

# two planar gauges that are not p-norms
ellipse = EllipseGauge(1.0, 2.0)
print("twisted ellipse (1,2) support at (1,0):", ellipse.support([1.0, 0.0]),
      "= ellipse (2,1) gauge:", EllipseGauge(2.0, 1.0).eval([1.0, 0.0]))
toast = ToastGauge()
print("toast at (1,1):", toast.eval([1.0, 1.0]), " at (-1,-1):", toast.eval([-1.0, -1.0]),
      " symmetric:", toast.fully_homogeneous)
