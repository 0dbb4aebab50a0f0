"""Dense two-phase simplex with Bland's rule.

Only meant for the tiny feasibility problems that come up in polytope
audits (a few dozen variables), where an exact anti-cycling rule matters
more than speed.
"""

from __future__ import annotations

import numpy as np

EPS = 1e-11


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    for i in range(T.shape[0]):
        if i != r and T[i, c] != 0.0:
            T[i] -= T[i, c] * T[r]


def _run(T: np.ndarray, basis: list[int], n_cols: int, max_iter: int) -> str:
    """Minimize the objective in the last row of ``T`` over the first
    ``n_cols`` columns.  Returns ``"optimal"`` or ``"unbounded"``."""
    for _ in range(max_iter):
        obj = T[-1, :n_cols]
        # Bland: smallest index with negative reduced cost
        cand = np.flatnonzero(obj < -EPS)
        if cand.size == 0:
            return "optimal"
        c = int(cand[0])
        col = T[:-1, c]
        pos = col > EPS
        if not np.any(pos):
            return "unbounded"
        ratios = np.full(col.shape, np.inf)
        ratios[pos] = T[:-1, -1][pos] / col[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + EPS * max(1.0, abs(best)))
        # Bland: among ties leave the basic variable with smallest index
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, c)
        basis[r] = c
    raise RuntimeError("simplex iteration limit reached")


def linprog_min(c, A_eq, b_eq, max_iter: int = 10_000):
    """Minimize ``c @ x`` subject to ``A_eq @ x = b_eq``, ``x >= 0``.

    Returns ``(status, x)`` with status one of ``"optimal"``,
    ``"infeasible"``, ``"unbounded"``.
    """
    A = np.array(A_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # phase 1: artificials n..n+m-1
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    _run(T, basis, n + m, max_iter)
    if -T[-1, -1] > 1e-9 * max(1.0, b.sum()):
        return "infeasible", None

    # drive remaining artificials out of the basis where possible
    for r, j in enumerate(basis):
        if j >= n:
            nz = np.flatnonzero(np.abs(T[r, :n]) > EPS)
            if nz.size:
                _pivot(T, r, int(nz[0]))
                basis[r] = int(nz[0])

    # phase 2 on the original columns
    T2 = np.zeros((m + 1, n + 1))
    T2[:m, :n] = T[:m, :n]
    T2[:m, -1] = T[:m, -1]
    T2[-1, :n] = c
    for r, j in enumerate(basis):
        if j < n and T2[-1, j] != 0.0:
            T2[-1] -= T2[-1, j] * T2[r]
    keep = [r for r, j in enumerate(basis) if j < n]
    rows = keep + [m]
    T2 = T2[rows]
    basis = [basis[r] for r in keep]
    status = _run(T2, basis, n, max_iter)
    if status == "unbounded":
        return status, None
    x = np.zeros(n)
    for r, j in enumerate(basis):
        x[j] = T2[r, -1]
    return "optimal", x


def in_convex_hull(point, points) -> bool:
    """Whether ``point`` is a convex combination of the rows of ``points``."""
    P = np.asarray(points, dtype=float)
    if P.shape[0] == 0:
        return False
    A = np.vstack([P.T, np.ones(P.shape[0])])
    b = np.r_[np.asarray(point, dtype=float), 1.0]
    status, _ = linprog_min(np.zeros(P.shape[0]), A, b)
    return status == "optimal"
