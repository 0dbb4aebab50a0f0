"""Strong majorization, doubly stochastic witnesses and orbit hulls.

For skew-Hermitian ``Z`` and ``W`` the following are equivalent:

* ``Z`` lies in the convex hull of the unitary orbit ``{UWU*}``;
* the eigenvalues of ``-iZ`` are strongly majorized by those of ``-iW``;
* ``||Z|| <= ||W||`` for every Ad-invariant Finsler norm.

This module makes the first two constructive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .gauge import OrbitGauge
from .linalg import as_generator, eigvals, frobenius, spectral

__all__ = [
    "MajorizationReport",
    "HullDecomposition",
    "majorizes",
    "ds_witness",
    "in_orbit_hull",
    "birkhoff_decomposition",
    "hull_decomposition",
    "pinch",
    "random_orbit_gauge",
    "separating_orbit_gauge",
]

ZERO_ENTRY = 1e-12


@dataclass(frozen=True)
class MajorizationReport:
    z_sorted: np.ndarray
    w_sorted: np.ndarray
    partial_gaps: np.ndarray
    trace_gap: float
    tol: float
    holds: bool

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "z_sorted": self.z_sorted.tolist(),
            "w_sorted": self.w_sorted.tolist(),
            "partial_gaps": self.partial_gaps.tolist(),
            "trace_gap": self.trace_gap,
            "tol": self.tol,
        }


def _pair(w, z):
    w = np.asarray(w, dtype=float).ravel()
    z = np.asarray(z, dtype=float).ravel()
    if w.shape != z.shape:
        raise ValueError(f"length mismatch: {w.shape[0]} vs {z.shape[0]}")
    return w, z


def majorizes(w, z, tol: float | None = None) -> MajorizationReport:
    """Whether ``z`` is strongly majorized by ``w`` (``z ≺ w``).

    ``partial_gaps[k]`` is ``sum_{i<=k} w_i^dec - sum_{i<=k} z_i^dec``; the
    relation holds when all gaps are ``>= -tol`` and the totals agree to
    ``tol``.  Default ``tol = 1e-9 * (1 + ||w||_1)``.
    """
    w, z = _pair(w, z)
    if tol is None:
        tol = 1e-9 * (1.0 + np.abs(w).sum())
    ws = np.sort(w)[::-1]
    zs = np.sort(z)[::-1]
    gaps = np.cumsum(ws) - np.cumsum(zs)
    trace_gap = float(ws.sum() - zs.sum())
    holds = bool(np.all(gaps[:-1] >= -tol) and abs(trace_gap) <= tol)
    return MajorizationReport(zs, ws, gaps, trace_gap, float(tol), holds)


def _perm_matrix(order: np.ndarray) -> np.ndarray:
    """``P`` with ``(P v)_i = v[order[i]]``."""
    n = len(order)
    P = np.zeros((n, n))
    P[np.arange(n), order] = 1.0
    return P


def ds_witness(w, z, tol: float | None = None) -> np.ndarray:
    """Doubly stochastic ``A`` with ``z = A w``, as a product of T-transforms.

    Working on the decreasing rearrangements, each step takes the first
    index ``k`` where ``w_k < z_k`` and the last index ``j < k`` with
    ``w_j > z_j`` and moves mass ``min(w_j - z_j, z_k - w_k)`` from ``j`` to
    ``k``.  Each step fixes at least one more coordinate, so at most ``n - 1``
    steps are needed.

    Raises
    ------
    ValueError
        If ``z`` is not majorized by ``w``.
    """
    w, z = _pair(w, z)
    rep = majorizes(w, z, tol)
    if not rep.holds:
        raise ValueError("ds_witness requires z to be majorized by w")
    n = len(w)
    if np.ptp(z) <= 1e-14 * (1.0 + np.abs(w).sum()):
        # full averaging
        return np.full((n, n), 1.0 / n)
    ow = np.argsort(-w, kind="stable")
    oz = np.argsort(-z, kind="stable")
    cur = w[ow].copy()
    target = z[oz]
    A = np.eye(n)
    eps = 1e-15 * (1.0 + np.abs(w).sum())
    for _ in range(n):
        diff = cur - target
        below = np.flatnonzero(diff < -eps)
        if below.size == 0:
            break
        k = int(below[0])
        above = np.flatnonzero(diff[:k] > eps)
        if above.size == 0:
            break
        j = int(above[-1])
        delta = min(diff[j], -diff[k])
        lam = 1.0 - delta / (cur[j] - cur[k])
        T = np.eye(n)
        T[[j, k], [j, k]] = lam
        T[j, k] = T[k, j] = 1.0 - lam
        cur = T @ cur
        A = T @ A
    # back to the original coordinates: z = Pz^T A Pw w
    return _perm_matrix(oz).T @ A @ _perm_matrix(ow)


def birkhoff_decomposition(A, zero: float = ZERO_ENTRY) -> tuple[np.ndarray, list[np.ndarray]]:
    """Write a doubly stochastic ``A`` as ``sum lambda_m P_m``.

    Each round finds a permutation supported on the positive entries (a
    perfect matching, via ``linear_sum_assignment``), subtracts the largest
    feasible multiple and zeroes entries below ``zero``.  Returns weights
    and permutations as index arrays ``perm`` with ``P[i, perm[i]] = 1``.
    """
    R = np.array(A, dtype=float)
    n = R.shape[0]
    weights: list[float] = []
    perms: list[np.ndarray] = []
    for _ in range(n * n + 1):
        R[R < zero] = 0.0
        if R.max(initial=0.0) <= zero:
            break
        cost = np.where(R > 0, 0.0, 1.0)
        rows, cols = linear_sum_assignment(cost)
        if cost[rows, cols].sum() > 0:
            # remaining mass no longer supports a permutation: numerical dust
            break
        lam = float(R[rows, cols].min())
        weights.append(lam)
        perms.append(cols.copy())
        R[rows, cols] -= lam
    else:  # pragma: no cover - at most n^2 - 2n + 2 rounds are ever needed
        raise RuntimeError("Birkhoff decomposition stagnated")
    return np.array(weights), perms


def _caratheodory(weights: np.ndarray, points: np.ndarray, tol: float = 1e-13):
    """Prune a convex combination of ``points`` (rows) to an affinely
    independent support without changing the combination."""
    w = weights.copy()
    idx = np.arange(len(w))
    while True:
        keep = w > tol
        w, idx = w[keep], idx[keep]
        P = points[idx]
        M = np.vstack([P.T, np.ones(len(idx))])
        if len(idx) <= np.linalg.matrix_rank(M, tol=1e-10):
            break
        mu = np.linalg.svd(M)[2][-1]
        if mu.max() <= 0:
            mu = -mu
        pos = mu > 1e-14
        t = np.min(w[pos] / mu[pos])
        w = w - t * mu
        w[np.argmin(np.where(pos, w, np.inf))] = 0.0
        w = np.clip(w, 0.0, None)
    return w / w.sum(), idx


@dataclass
class HullDecomposition:
    """``Z = sum_i weights[i] * U_i W U_i*``."""

    weights: np.ndarray
    conjugators: list
    residual: float
    birkhoff_terms: int

    @property
    def count(self) -> int:
        return len(self.weights)

    def reconstruct(self, W) -> np.ndarray:
        W = np.asarray(W)
        return sum(l * U @ W @ U.conj().T for l, U in zip(self.weights, self.conjugators))

    def to_dict(self) -> dict:
        return {
            "weights": self.weights.tolist(),
            "conjugators": [{"re": U.real.tolist(), "im": U.imag.tolist()} for U in self.conjugators],
            "residual": self.residual,
            "count": self.count,
            "birkhoff_terms": self.birkhoff_terms,
        }


def in_orbit_hull(Z, W, tol: float | None = None) -> bool:
    Z = np.asarray(Z)
    W = np.asarray(W)
    if Z.shape != W.shape:
        raise ValueError(f"dimension mismatch: {Z.shape} vs {W.shape}")
    return majorizes(eigvals(W), eigvals(Z), tol).holds


def hull_decomposition(Z, W, tol: float | None = None, prune: bool = True) -> HullDecomposition:
    """Constructive convex combination of unitary conjugates of ``W``
    equal to ``Z``.

    Diagonalize both, take a doubly stochastic ``A`` with ``z = A w``, split
    ``A`` into permutations ``Pi_m`` and use the conjugators
    ``U_m = U_Z Pi_m U_W*``.  With ``prune`` the permutation images are
    reduced to an affinely independent family (at most ``n`` terms, since
    they lie in the hyperplane of fixed trace).
    """
    Z = np.asarray(Z)
    W = np.asarray(W)
    if not in_orbit_hull(Z, W, tol):
        raise ValueError("Z is not in the convex hull of the unitary orbit of W")
    sz = spectral(Z)
    sw = spectral(W)
    z, w = sz.eigenvalues, sw.eigenvalues
    A = ds_witness(w, z, tol)
    lam, perms = birkhoff_decomposition(A)
    n_birk = len(lam)
    # merge permutations with identical images of w
    images: dict[tuple, int] = {}
    ws: list[float] = []
    ps: list[np.ndarray] = []
    for l, p in zip(lam, perms):
        key = tuple(np.round(w[p], 12))
        if key in images:
            ws[images[key]] += l
        else:
            images[key] = len(ws)
            ws.append(l)
            ps.append(p)
    lam = np.array(ws) / np.sum(ws)
    if prune and len(lam) > 1:
        pts = np.array([w[p] for p in ps])
        lam, idx = _caratheodory(lam, pts)
        ps = [ps[i] for i in idx]
    conj = [sz.U @ _perm_matrix(p) @ sw.U.conj().T for p in ps]
    dec = HullDecomposition(lam, conj, 0.0, n_birk)
    dec.residual = frobenius(Z - dec.reconstruct(W))
    return dec


def pinch(X, projections, tol: float = 1e-9) -> np.ndarray:
    """``sum_k P_k X P_k`` for a resolution of the identity ``{P_k}``."""
    X = np.asarray(X)
    n = X.shape[0]
    Ps = [np.asarray(P) for P in projections]
    if not Ps:
        raise ValueError("empty projection system")
    S = np.zeros((n, n), dtype=complex)
    for i, P in enumerate(Ps):
        if P.shape != (n, n):
            raise ValueError("projection dimension mismatch")
        if frobenius(P @ P - P) > tol * n or frobenius(P - P.conj().T) > tol * n:
            raise ValueError(f"projection {i} is not an orthogonal projection")
        for Q in Ps[i + 1 :]:
            if frobenius(P @ Q) > tol * n:
                raise ValueError("projections are not mutually orthogonal")
        S += P
    if frobenius(S - np.eye(n)) > tol * n:
        raise ValueError("projections do not sum to the identity")
    out = sum(P @ X @ P for P in Ps)
    return 0.5 * (out - out.conj().T)


def _orbit_spec_from_steps(a: np.ndarray) -> OrbitGauge:
    n = len(a) + 1
    c = np.zeros(n)
    for m in range(1, n):
        step = np.r_[np.ones(m), np.zeros(n - m)] - m / n
        c += a[m - 1] * step
    return OrbitGauge(c, normalize=True)


def random_orbit_gauge(n: int, seed=None, concentration: float = 0.3) -> OrbitGauge:
    """Random regular traceless ``c``: a positive combination of the step
    vectors ``(1,...,1,0,...,0) - m/n`` with Dirichlet weights.  Small
    ``concentration`` favours specs dominated by a single step."""
    rng = as_generator(seed)
    a = rng.dirichlet(np.full(n - 1, concentration))
    return _orbit_spec_from_steps(np.maximum(a, 1e-6))


def separating_orbit_gauge(Z, W, draws: int = 50, seed=None, margin: float = 1e-9):
    """Search up to ``draws`` regular orbit gauges for one with ``||Z|| > ||W||``.

    For ``c = sum_m a_m (step_m)`` the excess ``||Z|| - ||W||`` is
    ``-sum_m a_m gap_m`` (partial-sum gaps of the majorization report, equal
    traces), so the first candidate puts almost all weight on the most
    violated step; the remaining candidates are random.  Returns the gauge
    and the excess, or ``(None, best_excess)``.
    """
    rng = as_generator(seed)
    z = eigvals(Z)
    w = eigvals(W)
    n = len(z)
    best = -np.inf
    candidates = []
    if n > 1:
        gaps = majorizes(w, z).partial_gaps[:-1]
        k = int(np.argmin(gaps))
        if gaps[k] < 0:
            rest = np.delete(gaps, k)
            spread = float(np.abs(rest).sum()) if rest.size else 0.0
            eps = min(1e-3, 0.5 * -gaps[k] / (spread + -gaps[k]))
            a = np.full(n - 1, eps / max(n - 2, 1))
            a[k] = 1.0 - eps if n > 2 else 1.0
            candidates.append(_orbit_spec_from_steps(a))
    for i in range(draws):
        g = candidates[i] if i < len(candidates) else random_orbit_gauge(n, rng)
        excess = g.eval(z) - g.eval(w)
        if excess > margin:
            return g, float(excess)
        best = max(best, excess)
    return None, float(best)
