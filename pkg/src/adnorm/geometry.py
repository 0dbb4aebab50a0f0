"""Polytope geometry of permutation-symmetric balls.

Polytopes either fill R^n or live in the hyperplane ``sum x_i = 0``; in the
latter case all computations happen in an orthonormal frame of that
hyperplane and results are mapped back to ambient coordinates.  Facet
enumeration is brute force over vertex subsets, meant for slice dimension
at most 4.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from ._simplex import in_convex_hull
from .gauge import Gauge, OrbitGauge, PolytopeGauge, ToastGauge

__all__ = [
    "Polytope",
    "sum_zero_frame",
    "orbit_polytope",
    "polar_dual",
    "is_self_dual",
    "norming_set",
    "facets_from_vertices",
    "extreme_audit",
    "hausdorff_vertices",
    "emit_csv",
]

GEOM_TOL = 1e-10
MAX_SLICE_DIM = 4
BRUTE_FORCE_LIMIT = 250_000


def sum_zero_frame(n: int) -> np.ndarray:
    """Orthonormal basis (as columns) of ``{x in R^n : sum x = 0}``; the
    Helmert vectors ``(1, ..., 1, -k, 0, ...) / sqrt(k(k+1))``."""
    Q = np.zeros((n, n - 1))
    for k in range(1, n):
        Q[:k, k - 1] = 1.0
        Q[k, k - 1] = -float(k)
        Q[:, k - 1] /= math.sqrt(k * (k + 1))
    return Q


def _dedup(rows: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    out: list[np.ndarray] = []
    for r in rows:
        if not any(np.max(np.abs(r - o)) <= tol for o in out):
            out.append(r)
    return np.array(out) if out else np.zeros((0, rows.shape[1]))


def _canonical(rows: np.ndarray) -> np.ndarray:
    """Rows sorted lexicographically descending (rounded to absorb noise)."""
    if len(rows) == 0:
        return rows
    key = np.round(rows, 9)
    order = np.lexsort(key.T[::-1])[::-1]
    return rows[order]


def _origin_depth(P: np.ndarray) -> float:
    """Largest ``t`` with ``0 = sum l_i p_i``, ``sum l_i = 1``, ``l_i >= t``.

    Positive exactly when 0 is interior to the hull of the rows of a
    full-rank point set.
    """
    k = P.shape[0]
    A_eq = np.zeros((P.shape[1] + 1, k + 1))
    A_eq[:-1, :k] = P.T
    A_eq[-1, :k] = 1.0
    b_eq = np.r_[np.zeros(P.shape[1]), 1.0]
    # l_i - t >= 0
    A_ub = np.hstack([-np.eye(k), np.ones((k, 1))])
    cost = np.zeros(k + 1)
    cost[-1] = -1.0
    res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(k), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * k + [(None, None)], method="highs")
    return float(-res.fun) if res.status == 0 else -np.inf


def facets_from_vertices(points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Facet normals ``a`` (rows) with ``<a, x> <= 1`` for a full-dimensional
    point set in R^d whose hull contains 0 in its interior.

    Every d-subset of points spanning a hyperplane ``<a, x> = 1`` is tested
    for supporting all points.  Above ``BRUTE_FORCE_LIMIT`` subsets the
    candidate hyperplanes come from a Qhull triangulation instead.
    """
    P = np.asarray(points, dtype=float)
    k, d = P.shape
    if d == 1:
        hi, lo = P.max(), P.min()
        if not (hi > tol and lo < -tol):
            raise ValueError("0 is not an interior point")
        return np.array([[1.0 / hi], [1.0 / lo]])
    if np.linalg.matrix_rank(P, tol=tol) < d or _origin_depth(P) <= tol / k:
        raise ValueError("0 is not an interior point")
    if math.comb(k, d) > BRUTE_FORCE_LIMIT:
        from scipy.spatial import ConvexHull

        hull = ConvexHull(P)
        eq = hull.equations  # a.x + b <= 0 with unit a
        if np.any(eq[:, -1] >= -tol):
            raise ValueError("0 is not an interior point")
        return _canonical(_dedup(eq[:, :-1] / (-eq[:, -1:]), tol))

    scale = max(1.0, float(np.abs(P).max()))
    normals = []
    for chunk in _chunks(itertools.combinations(range(k), d), 4096):
        idx = np.array(chunk)
        M = P[idx]  # (m, d, d)
        det = np.linalg.det(M)
        ok = np.abs(det) > 1e-12 * scale**d
        if not np.any(ok):
            continue
        a = np.linalg.solve(M[ok], np.ones((int(ok.sum()), d, 1)))[..., 0]
        vals = a @ P.T  # (m, k)
        good = np.all(vals <= 1.0 + tol, axis=1)
        normals.extend(a[good])
    if not normals:
        raise ValueError("no supporting hyperplanes found; is 0 interior?")
    return _canonical(_dedup(np.array(normals), tol))


def _chunks(it, size):
    buf = []
    for x in it:
        buf.append(x)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


@dataclass
class Polytope:
    """Vertices (rows, ambient coordinates) and facets ``<a, x> <= b``.

    When ``hyperplane`` is true the polytope lies in ``sum x = 0`` and facet
    normals are taken inside that hyperplane.
    """

    ambient_dim: int
    vertices: np.ndarray
    facets: list = field(default_factory=list)
    hyperplane: bool = False

    # --- construction ----------------------------------------------------
    @classmethod
    def from_vertices(cls, vertices, hyperplane: bool = False, prune: bool = True) -> "Polytope":
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        n = V.shape[1]
        if hyperplane:
            if np.max(np.abs(V.sum(axis=1))) > 1e-9 * max(1.0, np.abs(V).max()):
                raise ValueError("vertices do not lie in the hyperplane sum x = 0")
            if n - 1 > MAX_SLICE_DIM:
                raise ValueError(f"slice dimension {n - 1} exceeds {MAX_SLICE_DIM}")
        elif n > MAX_SLICE_DIM:
            raise ValueError(f"dimension {n} exceeds {MAX_SLICE_DIM}")
        V = _dedup(V)
        Q = sum_zero_frame(n) if hyperplane else np.eye(n)
        Y = V @ Q
        A = facets_from_vertices(Y)
        if prune:
            keep = []
            for i, y in enumerate(Y):
                active = A[np.abs(A @ y - 1.0) <= 1e-8]
                if len(active) and np.linalg.matrix_rank(active, tol=1e-8) == Y.shape[1]:
                    keep.append(i)
            V, Y = V[keep], Y[keep]
        facets = []
        for a in A:
            na = float(np.linalg.norm(a))
            facets.append((Q @ (a / na), 1.0 / na))
        return cls(ambient_dim=n, vertices=_canonical(V), facets=facets, hyperplane=hyperplane)

    # --- coordinates -----------------------------------------------------
    @property
    def frame(self) -> np.ndarray:
        return sum_zero_frame(self.ambient_dim) if self.hyperplane else np.eye(self.ambient_dim)

    @property
    def dim(self) -> int:
        return self.ambient_dim - 1 if self.hyperplane else self.ambient_dim

    def slice_vertices(self) -> np.ndarray:
        return self.vertices @ self.frame

    def facet_normals(self) -> np.ndarray:
        """Facet normals scaled by 1/offset, i.e. the polar vertices."""
        return np.array([a / b for a, b in self.facets])

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if self.hyperplane and abs(x.sum()) > tol:
            return False
        return all(float(a @ x) <= b + tol for a, b in self.facets)

    def check(self, tol: float = 1e-10) -> None:
        """Raise ``AssertionError`` if a structural invariant fails."""
        for a, b in self.facets:
            vals = self.vertices @ a
            assert np.all(vals <= b + tol), "vertex violates a facet"
            assert int(np.sum(np.abs(vals - b) <= 1e-8)) >= self.dim, "facet supports too few vertices"

    # --- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "dim": self.ambient_dim,
            "hyperplane": "sum-zero" if self.hyperplane else None,
            "vertices": self.vertices.tolist(),
            "facets": [{"normal": np.asarray(a).tolist(), "offset": float(b)} for a, b in self.facets],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Polytope":
        V = np.asarray(d["vertices"], dtype=float)
        hyper = d.get("hyperplane") == "sum-zero"
        if d.get("facets"):
            facets = [(np.asarray(f["normal"], dtype=float), float(f["offset"])) for f in d["facets"]]
            return cls(ambient_dim=int(d.get("dim", V.shape[1])), vertices=V, facets=facets, hyperplane=hyper)
        return cls.from_vertices(V, hyperplane=hyper)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Polytope":
        return cls.from_dict(json.loads(text))


def orbit_polytope(c) -> Polytope:
    """Convex hull of the coordinate permutations of a traceless ``c``.

    This is the slice of the dual unit ball of the orbit norm of ``c``.
    """
    g = c if isinstance(c, OrbitGauge) else OrbitGauge(c)
    if g.n > MAX_SLICE_DIM + 1:
        raise ValueError(f"n={g.n} too large for vertex enumeration (max {MAX_SLICE_DIM + 1})")
    # recentre exactly: OrbitGauge stores c - mean(c)
    return Polytope.from_vertices(g.permutation_vertices(), hyperplane=True)


def polar_dual(P: Polytope) -> Polytope:
    """Polar ``{y : <y, x> <= 1 for x in P}`` within the affine hull of P.

    Vertices of the polar are the facet normals divided by their offsets;
    facets of the polar come from the vertices of P.
    """
    for _, b in P.facets:
        if b <= GEOM_TOL:
            raise ValueError("0 is not an interior point of the polytope")
    verts = _canonical(P.facet_normals())
    facets = []
    for v in P.vertices:
        nv = float(np.linalg.norm(v))
        facets.append((v / nv, 1.0 / nv))
    return Polytope(ambient_dim=P.ambient_dim, vertices=verts, facets=facets, hyperplane=P.hyperplane)


def hausdorff_vertices(A, B) -> float:
    """Hausdorff distance between two finite point sets."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    D = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=-1)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def extreme_audit(P: Polytope) -> list[int]:
    """Indices of vertices lying in the hull of the remaining ones (should
    be empty).  Feasibility is decided by the in-repo simplex."""
    Y = P.slice_vertices()
    bad = []
    for i in range(len(Y)):
        others = np.delete(Y, i, axis=0)
        if in_convex_hull(Y[i], others):
            bad.append(i)
    return bad


def _pairwise(Y: np.ndarray) -> np.ndarray:
    return np.linalg.norm(Y[:, None, :] - Y[None, :, :], axis=-1)


def is_self_dual(P: Polytope, tol: float = 1e-8):
    """Whether some orthogonal map ``R`` and scale ``s > 0`` give
    ``R P = s P°``.

    Returns ``(True, {"scale": s, "rotation": R, "det": det R})`` with ``R``
    acting on the frame coordinates of the affine hull, or ``(False, None)``.
    """
    D = polar_dual(P)
    A = P.slice_vertices()
    B = D.slice_vertices()
    if len(A) != len(B):
        return False, None
    ra = math.sqrt(float(np.mean(np.sum(A**2, axis=1))))
    rb = math.sqrt(float(np.mean(np.sum(B**2, axis=1))))
    A1, B1 = A / ra, B / rb
    na, nb = np.linalg.norm(A1, axis=1), np.linalg.norm(B1, axis=1)
    if np.max(np.abs(np.sort(na) - np.sort(nb))) > tol:
        return False, None
    DA, DB = _pairwise(A1), _pairwise(B1)
    if np.max(np.abs(np.sort(DA.ravel()) - np.sort(DB.ravel()))) > tol:
        return False, None

    d = A1.shape[1]
    basis = _independent_rows(A1, d)
    Abasis = A1[basis]

    def extend(chosen: list[int]):
        i = len(chosen)
        if i == d:
            Bsel = B1[chosen]
            R = np.linalg.solve(Abasis, Bsel).T  # R @ a_i = b_i
            if np.max(np.abs(R.T @ R - np.eye(d))) > 1e-6:
                return None
            img = A1 @ R.T
            if hausdorff_vertices(img, B1) <= 1e-6:
                return R
            return None
        ai = basis[i]
        for j in range(len(B1)):
            if j in chosen or abs(nb[j] - na[ai]) > 1e-7:
                continue
            if any(abs(DB[j, chosen[t]] - DA[ai, basis[t]]) > 1e-7 for t in range(i)):
                continue
            R = extend(chosen + [j])
            if R is not None:
                return R
        return None

    R = extend([])
    if R is None:
        return False, None
    return True, {"scale": ra / rb, "rotation": R, "det": float(np.linalg.det(R))}


def _independent_rows(A: np.ndarray, d: int) -> list[int]:
    chosen: list[int] = []
    for i in range(len(A)):
        trial = chosen + [i]
        if np.linalg.matrix_rank(A[trial], tol=1e-8) == len(trial):
            chosen = trial
        if len(chosen) == d:
            break
    if len(chosen) < d:
        raise ValueError("polytope is not full-dimensional in its affine hull")
    return chosen


def norming_set(g, x, tol: float = 1e-9) -> np.ndarray:
    """All dual-ball vertices ``u`` with ``<u, x> = g(x)``.

    The norming functionals of ``x`` form the convex hull of the returned
    rows; a single row means ``x`` is a smooth point.  ``g`` is a polytope
    gauge (including orbit, spectral, trace and Ky-Fan gauges), the toast,
    or a :class:`Polytope`.  For orbit gauges and traceless ``x`` the
    computation is done inside the hyperplane ``sum x = 0``.
    """
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        raise ValueError("norming set is only defined at x != 0")
    if isinstance(g, Polytope):
        g = PolytopeGauge(g)
    if isinstance(g, ToastGauge):
        return g.subdifferential_vertices(x)
    if isinstance(g, OrbitGauge):
        traceless = abs(x.sum()) <= 1e-12 * max(1.0, np.abs(x).max())
        V = g.dual_vertices(traceless=traceless)
        val = g.orbit_part(x) if traceless else g.eval(x)
    else:
        V = g.dual_vertices(len(x)) if isinstance(g, Gauge) else None
        if V is None:
            raise TypeError(f"{type(g).__name__} has no finite norming set")
        val = g.eval(x)
    vals = V @ x
    sel = V[np.abs(vals - val) <= tol * max(1.0, abs(val))]
    return _canonical(sel)


def emit_csv(P: Polytope) -> str:
    """Vertex coordinates for plotting: frame coordinates of the affine hull
    when it is 2- or 3-dimensional.  2-D polygons are listed in angular
    order and closed by repeating the first point."""
    Y = P.slice_vertices()
    d = Y.shape[1]
    if d not in (2, 3):
        raise ValueError(f"can only emit 2-D or 3-D slices, got dimension {d}")
    if d == 2:
        order = np.argsort(np.arctan2(Y[:, 1], Y[:, 0]))
        Y = np.vstack([Y[order], Y[order][:1]])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "z"][:d])
    for row in Y:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()
