"""Ad-invariant Finsler norms on u(n).

A permutation-symmetric gauge ``g`` on R^n induces the norm
``||X|| = g(x)`` where ``x`` is the eigenvalue vector of ``-iX``; every
Ad-invariant Finsler norm on u(n) arises this way.  The dual norm for the
trace pairing ``(A|B) = -Re tr(AB)`` is induced by the support function of
``g``, and norming functionals ``(N|.)`` are built from subgradients of ``g``
in a common eigenbasis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .gauge import Gauge, KyFanGauge, OrbitGauge, gauge_from_dict
from .linalg import (
    commutator,
    eigvals,
    frobenius,
    from_eigen,
    spectral,
    trace_inner,
)

__all__ = [
    "MatrixNorm",
    "NormingMatrix",
    "CertificationError",
    "matrix_norm",
    "orbit_norm",
    "c_radius_norm",
    "dual_norm",
    "norming_matrix",
    "ky_fan_distinguished_norming",
    "certify_norming",
    "diagonal_averaged_functional",
    "block_eigenvalues",
    "permute_within_block",
    "taylor_norm",
    "taylor_norm_report",
]

CERT_TOL = 1e-9


class CertificationError(ValueError):
    """A constructed norming matrix fails one of its invariants."""

    def __init__(self, message: str, residuals: dict):
        super().__init__(f"{message}: {residuals}")
        self.residuals = residuals


@dataclass(frozen=True)
class MatrixNorm:
    """The norm ``X -> gauge(eig(-iX))`` on n x n skew-Hermitian matrices."""

    gauge: Gauge
    n: int

    def __post_init__(self):
        if self.gauge.n is not None and self.gauge.n != self.n:
            raise ValueError(f"gauge dimension {self.gauge.n} does not match n={self.n}")

    def _check(self, X) -> np.ndarray:
        X = np.asarray(X)
        if X.shape != (self.n, self.n):
            raise ValueError(f"dimension mismatch: expected {(self.n, self.n)}, got {X.shape}")
        return X

    def __call__(self, X) -> float:
        return self.gauge.eval(eigvals(self._check(X)))

    value = __call__

    def dual(self, V) -> float:
        return self.gauge.support(eigvals(self._check(V)))

    @property
    def fully_homogeneous(self) -> bool:
        return self.gauge.fully_homogeneous

    @property
    def smooth(self) -> bool:
        return bool(getattr(self.gauge, "smooth", False))

    def to_dict(self) -> dict:
        return {"gauge": self.gauge.to_dict(), "n": self.n}

    @classmethod
    def from_dict(cls, d: dict, n: int | None = None) -> "MatrixNorm":
        g = gauge_from_dict(d.get("gauge", d))
        n = n or d.get("n") or g.n
        if n is None:
            raise ValueError("dimension n is required for this gauge")
        return cls(g, int(n))

    def __repr__(self) -> str:
        return f"MatrixNorm({self.gauge!r}, n={self.n})"


def matrix_norm(m: MatrixNorm, X) -> float:
    return m(X)


def dual_norm(m: MatrixNorm, V) -> float:
    """``max {(V|X) : ||X|| <= 1}``; reduces to the support function of the
    gauge at the eigenvalues of ``-iV``."""
    return m.dual(V)


def orbit_norm(c, X) -> float:
    """``max_U (UCU*|X) + |tr X|`` in closed form: the aligned sum
    ``sum c_i^dec x_i^dec`` plus ``|sum x_i|``."""
    g = c if isinstance(c, OrbitGauge) else OrbitGauge(c)
    X = np.asarray(X)
    if X.shape != (g.n, g.n):
        raise ValueError(f"dimension mismatch: c has length {g.n}, X has shape {X.shape}")
    return g.eval(eigvals(X))


def c_radius_norm(C, X) -> float:
    """``max_U |tr(C U* X U)|`` for skew-Hermitian ``C`` (trace allowed)."""
    c = np.sort(eigvals(C))[::-1]
    x = np.sort(eigvals(X))[::-1]
    return float(max(c @ x, (-c[::-1]) @ x))


@dataclass
class NormingMatrix:
    """``N`` with ``(N|V) = ||V||``, dual norm 1 and ``[N, V] = 0``."""

    N: np.ndarray
    certified_dual_norm: float
    value_at_target: float
    residuals: dict = field(default_factory=dict)

    def functional(self, Y) -> float:
        return trace_inner(self.N, Y)


def _tol(scale: float, tol: float) -> float:
    return tol * (1.0 + scale)


def certify_norming(m: MatrixNorm, V, N, tol: float = CERT_TOL, strict: bool = True) -> NormingMatrix:
    """Check the three norming invariants of ``N`` at ``V``.

    Raises :class:`CertificationError` when ``strict`` and a residual
    exceeds ``tol * (1 + scale)``.
    """
    V = np.asarray(V)
    normV = m(V)
    pairing = trace_inner(N, V)
    dn = m.dual(N)
    comm = frobenius(commutator(N, V))
    res = {
        "pairing": abs(pairing - normV),
        "dual_norm": abs(dn - 1.0),
        "commutator": comm,
    }
    scale = frobenius(V)
    ok = (
        res["pairing"] <= _tol(scale, tol)
        and res["dual_norm"] <= _tol(1.0, tol)
        and res["commutator"] <= _tol(scale * max(1.0, frobenius(N)), tol)
    )
    if strict and not ok:
        raise CertificationError("norming certificate failed", res)
    return NormingMatrix(N=N, certified_dual_norm=dn, value_at_target=pairing, residuals=res)


def norming_matrix(m: MatrixNorm, V, tol: float = CERT_TOL, spectrum=None) -> NormingMatrix:
    """A certified norming matrix for ``V``: ``N = U i diag(u) U*`` with ``U``
    diagonalizing ``V`` and ``u`` a subgradient of the gauge at the ordered
    eigenvalues.  Inside a repeated eigenvalue block the entries of ``u`` are
    arranged in decreasing order."""
    V = m._check(V)
    if not np.any(V):
        raise ValueError("norming functionals are only defined for V != 0")
    sd = spectrum if spectrum is not None else spectral(V)
    x = sd.eigenvalues
    u = np.asarray(m.gauge.subgradient(x), dtype=float).copy()
    for sl in sd.block_slices():
        u[sl] = np.sort(u[sl])[::-1]
    N = from_eigen(u, sd.U)
    N = 0.5 * (N - N.conj().T)
    return certify_norming(m, V, N, tol)


def ky_fan_distinguished_norming(V, k: int, tol: float = CERT_TOL) -> NormingMatrix:
    """Norming matrix for the Ky-Fan ``k`` norm built from the polar
    decomposition ``V = Omega |V|``: with ``Q`` the spectral projection on
    the ``k`` largest ``|v_j|``, ``N`` is minus the skew-Hermitian part of
    ``Q Omega*``, i.e. ``i sum_{top k} sg(v_j) p_j``."""
    V = np.asarray(V)
    n = V.shape[0]
    sd = spectral(V)
    x = sd.eigenvalues
    U = sd.U
    sg = np.where(x >= 0, 1.0, -1.0)
    Omega = from_eigen(sg, U)
    top = np.argsort(-np.abs(x), kind="stable")[:k]
    Q = U[:, top] @ U[:, top].conj().T
    Z = Q @ Omega.conj().T
    N = -0.5 * (Z - Z.conj().T)
    return certify_norming(MatrixNorm(KyFanGauge(k), n), V, N, tol)


def block_eigenvalues(N, spectrum) -> list[np.ndarray]:
    """Eigenvalues (decreasing) of ``-iN`` compressed to each spectral block
    of ``spectrum``."""
    out = []
    for sl in spectrum.block_slices():
        Ub = spectrum.U[:, sl]
        H = -1j * (Ub.conj().T @ N @ Ub)
        H = 0.5 * (H + H.conj().T)
        out.append(np.sort(np.linalg.eigvalsh(H))[::-1])
    return out


def diagonal_averaged_functional(m: MatrixNorm, V, N, tol: float = CERT_TOL) -> NormingMatrix:
    """Replace each block ``N_k`` of a norming matrix by the scalar
    ``lambda_k P_k`` with ``lambda_k`` the mean eigenvalue of the block.

    The result still norms ``V`` (averaging over block unitaries cannot
    raise the dual norm and keeps ``(N|V)``), and the ``lambda_k`` are
    non-increasing in k.
    """
    V = m._check(V)
    N = N.N if isinstance(N, NormingMatrix) else np.asarray(N)
    sd = spectral(V)
    lam = []
    for P, d in zip(sd.projections, sd.multiplicities):
        lam.append(float(np.real(np.trace(-1j * (P @ N)))) / d)
    N_avg = 1j * sum(l * P for l, P in zip(lam, sd.projections))
    N_avg = 0.5 * (N_avg - N_avg.conj().T)
    cert = certify_norming(m, V, N_avg, tol)
    cert.residuals["block_means"] = lam
    return cert


def permute_within_block(N, spectrum, block: int, perm) -> np.ndarray:
    """Rearrange the eigenprojections of ``N`` inside one spectral block of
    ``V`` according to ``perm`` (a permutation of the block's eigenvalue
    positions, eigenvalues taken in decreasing order)."""
    sl = spectrum.block_slices()[block]
    Ub = spectrum.U[:, sl]
    H = -1j * (Ub.conj().T @ N @ Ub)
    H = 0.5 * (H + H.conj().T)
    w, W = np.linalg.eigh(H)
    w, W = w[::-1], W[:, ::-1]
    w_new = w[np.asarray(perm)]
    Hn = (W * w_new) @ W.conj().T
    P = Ub @ Ub.conj().T
    rest = N - P @ N @ P
    out = rest + 1j * (Ub @ Hn @ Ub.conj().T)
    return 0.5 * (out - out.conj().T)


@dataclass(frozen=True)
class TaylorResult:
    value: float
    t: float
    grid_points: int


def taylor_norm_report(m: MatrixNorm, A, B, grid: int = 720, tol: float = 1e-10) -> TaylorResult:
    """``sup_t ||A cos t - B sin t||`` by a uniform grid over ``[0, 2pi)``
    refined with a golden-section search around the best grid point."""
    A = m._check(A)
    B = m._check(B)

    def f(t):
        return m(A * math.cos(t) - B * math.sin(t))

    ts = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    vals = np.array([f(t) for t in ts])
    i = int(np.argmax(vals))
    h = 2 * np.pi / grid
    res = optimize.minimize_scalar(
        lambda t: -f(t), bounds=(ts[i] - h, ts[i] + h), method="bounded", options={"xatol": tol}
    )
    if -res.fun >= vals[i]:
        return TaylorResult(float(-res.fun), float(res.x % (2 * np.pi)), grid)
    return TaylorResult(float(vals[i]), float(ts[i]), grid)


def taylor_norm(m: MatrixNorm, A, B, grid: int = 720) -> float:
    """Norm of ``A + iB`` in the complexification ``u(n) + i u(n) = M_n(C)``."""
    return taylor_norm_report(m, A, B, grid).value
