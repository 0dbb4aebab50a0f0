"""Skew-Hermitian linear algebra.

Matrices in the Lie algebra u(n) are plain complex ``ndarray`` objects of
shape ``(n, n)`` with ``A.conj().T == -A``.  Eigenvalues are always reported
as the real numbers ``x`` such that ``i*x`` is an eigenvalue of ``A``, i.e.
the spectrum of the Hermitian matrix ``-iA``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "NumericalError",
    "SpectralData",
    "BlockSplit",
    "skew_hermitian",
    "is_skew_hermitian",
    "frobenius",
    "trace_inner",
    "commutator",
    "eigvals",
    "spectral",
    "block_split",
    "haar_unitary",
    "ad_exp",
    "from_eigen",
    "random_skew",
    "as_generator",
]

SKEW_TOL = 1e-9


class NumericalError(RuntimeError):
    """An eigensolver or iterative routine failed to converge."""


def as_generator(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def is_skew_hermitian(A, tol: float = SKEW_TOL) -> bool:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    return bool(np.max(np.abs(A + A.conj().T), initial=0.0) <= tol * scale)


def skew_hermitian(A, tol: float = SKEW_TOL) -> np.ndarray:
    """Validate ``A`` as skew-Hermitian and return the exactly symmetrized copy.

    Raises
    ------
    ValueError
        If ``A`` is not square or deviates from ``A* = -A`` by more than
        ``tol`` (relative to its largest entry).
    """
    A = np.array(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not is_skew_hermitian(A, tol):
        dev = float(np.max(np.abs(A + A.conj().T)))
        raise ValueError(f"matrix is not skew-Hermitian (deviation {dev:.3e})")
    return 0.5 * (A - A.conj().T)


def _check_pair(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")


def frobenius(A) -> float:
    return float(np.linalg.norm(A))


def trace_inner(A, B) -> float:
    """Real trace pairing ``(A|B) = tr(A B*) = -Re tr(AB)`` on u(n)."""
    A = np.asarray(A)
    B = np.asarray(B)
    _check_pair(A, B)
    # tr(A B*) = sum_ij A_ij conj(B_ij)
    return float(np.real(np.vdot(B, A)))


def commutator(X, Y) -> np.ndarray:
    X = np.asarray(X)
    Y = np.asarray(Y)
    _check_pair(X, Y)
    return X @ Y - Y @ X


def _hermitian_eigh(X: np.ndarray):
    H = -1j * np.asarray(X)
    H = 0.5 * (H + H.conj().T)
    try:
        w, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"Hermitian eigensolver failed: {exc}") from exc
    # decreasing order
    return w[::-1].copy(), U[:, ::-1].copy()


def eigvals(X) -> np.ndarray:
    """Eigenvalues of ``-iX`` in decreasing order."""
    return _hermitian_eigh(np.asarray(X))[0]


@dataclass(frozen=True)
class SpectralData:
    """Distinct eigenvalue levels of ``-iX`` with their spectral projections.

    ``values`` is strictly decreasing, ``projections[k]`` is the orthogonal
    projection onto the k-th eigenspace and ``U`` is a unitary whose columns
    are eigenvectors, grouped by level in the same order.
    """

    values: np.ndarray
    projections: tuple
    U: np.ndarray
    eigenvalues: np.ndarray
    multiplicities: tuple
    cluster_tol: float

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @property
    def n_levels(self) -> int:
        return len(self.values)

    def block_slices(self) -> list[slice]:
        out = []
        start = 0
        for d in self.multiplicities:
            out.append(slice(start, start + d))
            start += d
        return out

    def reconstruct(self) -> np.ndarray:
        return 1j * sum(v * P for v, P in zip(self.values, self.projections))

    def is_regular(self) -> bool:
        return all(d == 1 for d in self.multiplicities)


def spectral(X, cluster_tol: float | None = None) -> SpectralData:
    """Group the spectrum of ``-iX`` into distinct levels.

    Consecutive eigenvalues closer than ``cluster_tol`` are merged into one
    level; the default is ``1e-8 * max(1, ||X||_F)``.
    """
    X = np.asarray(X)
    if cluster_tol is None:
        cluster_tol = 1e-8 * max(1.0, frobenius(X))
    w, U = _hermitian_eigh(X)
    groups: list[list[int]] = [[0]]
    for j in range(1, len(w)):
        if w[groups[-1][-1]] - w[j] <= cluster_tol:
            groups[-1].append(j)
        else:
            groups.append([j])
    values = []
    projections = []
    for g in groups:
        values.append(float(np.mean(w[g])))
        Ug = U[:, g]
        P = Ug @ Ug.conj().T
        projections.append(0.5 * (P + P.conj().T))
    return SpectralData(
        values=np.array(values),
        projections=tuple(projections),
        U=U,
        eigenvalues=w,
        multiplicities=tuple(len(g) for g in groups),
        cluster_tol=float(cluster_tol),
    )


@dataclass(frozen=True)
class BlockSplit:
    diagonal: np.ndarray
    codiagonal: np.ndarray


def block_split(X, spectrum: SpectralData) -> BlockSplit:
    """Split ``X`` into block-diagonal and block-codiagonal parts relative to
    the spectral projections in ``spectrum``."""
    X = np.asarray(X)
    if X.shape != (spectrum.n, spectrum.n):
        raise ValueError(f"dimension mismatch: {X.shape} vs {(spectrum.n, spectrum.n)}")
    XD = sum(P @ X @ P for P in spectrum.projections)
    return BlockSplit(diagonal=XD, codiagonal=X - XD)


def haar_unitary(n: int, seed=None, size: int | None = None) -> np.ndarray:
    """Haar-distributed unitary from QR of a complex Ginibre matrix, with the
    phases of R's diagonal absorbed into Q.  With ``size`` a stack of
    ``size`` independent samples is returned."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = as_generator(seed)
    shape = (n, n) if size is None else (size, n, n)
    Z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    return Q * ph[..., None, :]


def from_eigen(x, U=None) -> np.ndarray:
    """The skew-Hermitian matrix ``U i diag(x) U*``."""
    x = np.asarray(x, dtype=float)
    D = np.diag(1j * x)
    if U is None:
        return D
    return U @ D @ U.conj().T


def random_skew(n: int, seed=None, scale: float = 1.0) -> np.ndarray:
    """Skew-Hermitian matrix with i.i.d. Gaussian entries (GUE times ``i``)."""
    rng = as_generator(seed)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = 0.5 * (G + G.conj().T)
    return scale * 1j * H


def ad_exp(s: float, X, V) -> np.ndarray:
    """``e^{sX} V e^{-sX}``, with the exponential taken through the spectral
    decomposition of the skew-Hermitian ``sX``."""
    X = np.asarray(X)
    V = np.asarray(V)
    _check_pair(X, V)
    w, U = _hermitian_eigh(X)
    E = (U * np.exp(1j * s * w)) @ U.conj().T
    out = E @ V @ E.conj().T
    return 0.5 * (out - out.conj().T)
