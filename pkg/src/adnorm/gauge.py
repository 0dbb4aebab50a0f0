"""Permutation-symmetric gauges on R^n.

A gauge is the Minkowski functional of a convex body ``B`` containing 0 in
its interior and invariant under coordinate permutations.  Gauges are
positively homogeneous and subadditive but need not satisfy
``g(-x) = g(x)``; the ones that do are called *fully homogeneous*.

Every gauge exposes

* ``eval(x)``        the Minkowski functional of ``B``,
* ``support(y)``     ``sup {<y, x> : eval(x) <= 1}``, the dual gauge,
* ``subgradient(x)`` one ``u`` with ``<u, x> = eval(x)`` and ``support(u) = 1``,

and polytope-like gauges additionally expose ``dual_vertices()``, the
vertices of the polar body, from which the full subdifferential at any point
can be read off.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

__all__ = [
    "Gauge",
    "PGauge",
    "KyFanGauge",
    "SpectralGauge",
    "TraceGauge",
    "OrbitGauge",
    "PolytopeGauge",
    "EllipseGauge",
    "ToastGauge",
    "OracleGauge",
    "SupportResult",
    "gauge_eval",
    "support",
    "subgradient",
    "is_fully_homogeneous",
    "gauge_from_dict",
    "standard_gauges",
]

TIE_TOL = 1e-10


def _vec(x, n=None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a vector, got shape {x.shape}")
    if n is not None and x.shape[0] != n:
        raise ValueError(f"length mismatch: expected {n}, got {x.shape[0]}")
    return x


def _lex_largest(rows: np.ndarray) -> np.ndarray:
    """Lexicographically largest row; the deterministic tie-break used for
    subgradients at non-smooth points."""
    order = np.lexsort(rows.T[::-1])
    return rows[order[-1]]


@dataclass(frozen=True)
class SupportResult:
    value: float
    lower_bound: bool = False
    spread: float = 0.0


class Gauge:
    """Base class.  Subclasses override ``eval`` and, where available, the
    closed forms for ``support``, ``subgradient`` and ``dual_vertices``."""

    kind = "abstract"
    n: int | None = None
    smooth = False

    # --- interface -----------------------------------------------------
    def eval(self, x) -> float:
        raise NotImplementedError

    def support(self, y) -> float:
        return self.support_report(y).value

    def support_report(self, y) -> SupportResult:
        y = self._check(y)
        return numeric_support(self, y)

    def subgradient(self, x) -> np.ndarray:
        x = self._check(x)
        if not np.any(x):
            raise ValueError("subgradient is only defined at x != 0")
        V = self.dual_vertices(len(x))
        if V is not None:
            return _polytope_subgradient(V, x)
        return numeric_gradient(self, x)

    def dual_vertices(self, n: int | None = None) -> np.ndarray | None:
        """Vertices of the polar body, or ``None`` when it is not a polytope."""
        return None

    @property
    def fully_homogeneous(self) -> bool:
        return True

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params()}

    def params(self) -> dict:
        return {}

    # --- helpers -------------------------------------------------------
    def _check(self, x) -> np.ndarray:
        return _vec(x, self.n)

    def __call__(self, x) -> float:
        return self.eval(x)

    def __repr__(self) -> str:
        p = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({p})"


def _polytope_subgradient(V: np.ndarray, x: np.ndarray) -> np.ndarray:
    vals = V @ x
    top = vals.max()
    tol = TIE_TOL * max(1.0, abs(top))
    return _lex_largest(V[vals >= top - tol]).copy()


def numeric_gradient(g: Gauge, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient rescaled so that ``<u, x> = g(x)``
    exactly (Euler's identity for positively homogeneous functions)."""
    scale = max(1.0, float(np.max(np.abs(x))))
    u = np.empty_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h * scale
        u[i] = (g.eval(x + e) - g.eval(x - e)) / (2 * h * scale)
    gx = g.eval(x)
    dot = float(u @ x)
    if dot > 0:
        u *= gx / dot
    return u


def numeric_support(g: Gauge, y: np.ndarray, starts: int = 32, seed: int = 0) -> SupportResult:
    """``sup <y, d> / g(d)`` over directions ``d`` by multi-start ascent.

    The ratio is quasi-concave on the sphere of directions, so every start
    should reach the same value; a spread above 1e-8 marks the result as a
    lower bound only.
    """
    n = len(y)
    if not np.any(y):
        return SupportResult(0.0)

    def ratio(d):
        gd = g.eval(d)
        if not np.isfinite(gd) or gd <= 0:
            return -np.inf
        return float(y @ d) / gd

    if n == 1:
        return SupportResult(max(ratio(np.array([1.0])), ratio(np.array([-1.0]))))

    if n == 2:
        m = 1440
        th = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
        vals = np.array([ratio(np.array([math.cos(t), math.sin(t)])) for t in th])
        # the two best grid angles bracket the maximizer
        best = np.argsort(vals)[::-1][:2]
        step = 2 * np.pi / m
        found = []
        for b in best:
            res = optimize.minimize_scalar(
                lambda t: -ratio(np.array([math.cos(t), math.sin(t)])),
                bounds=(th[b] - step, th[b] + step),
                method="bounded",
                options={"xatol": 1e-13},
            )
            found.append(max(-res.fun, vals[b]))
        top = max(found)
        spread = float(abs(found[0] - found[1]))
        return SupportResult(float(top), spread > 1e-8, spread)

    rng = np.random.default_rng(seed)
    dirs = [y / np.linalg.norm(y)]
    dirs += list(rng.standard_normal((starts - 1, n)))
    found = []
    for d0 in dirs:
        d0 = d0 / np.linalg.norm(d0)
        res = optimize.minimize(
            lambda d: -ratio(d / np.linalg.norm(d)) if np.any(d) else np.inf,
            d0,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000 * n},
        )
        found.append(-res.fun)
    found = np.array(found)
    top = float(found.max())
    spread = float(top - np.median(found))
    return SupportResult(top, spread > 1e-8, spread)


# ---------------------------------------------------------------------------
# closed-form gauges
# ---------------------------------------------------------------------------


class PGauge(Gauge):
    """The l_p norm, ``1 < p < inf``.  ``p = 2`` gives the Frobenius norm."""

    kind = "p"
    smooth = True

    def __init__(self, p: float, n: int | None = None):
        if not 1.0 < p < np.inf:
            raise ValueError("p must satisfy 1 < p < inf; use TraceGauge/SpectralGauge")
        self.p = float(p)
        self.q = self.p / (self.p - 1.0)
        self.n = n

    def params(self):
        return {"p": self.p} | ({"n": self.n} if self.n else {})

    def eval(self, x):
        return float(np.linalg.norm(self._check(x), self.p))

    def support_report(self, y):
        return SupportResult(float(np.linalg.norm(self._check(y), self.q)))

    def subgradient(self, x):
        x = self._check(x)
        nx = np.linalg.norm(x, self.p)
        if nx == 0:
            raise ValueError("subgradient is only defined at x != 0")
        return np.sign(x) * (np.abs(x) / nx) ** (self.p - 1.0)


class KyFanGauge(Gauge):
    """Sum of the ``k`` largest absolute entries."""

    kind = "ky_fan"

    def __init__(self, k: int, n: int | None = None):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = int(k)
        self.n = n

    def params(self):
        return {"k": self.k} | ({"n": self.n} if self.n else {})

    def _check(self, x):
        x = super()._check(x)
        if self.k > len(x):
            raise ValueError(f"k={self.k} exceeds dimension {len(x)}")
        return x

    def eval(self, x):
        a = np.sort(np.abs(self._check(x)))[::-1]
        return float(a[: self.k].sum())

    def support_report(self, y):
        y = self._check(y)
        return SupportResult(float(max(np.abs(y).sum() / self.k, np.abs(y).max(initial=0.0))))

    def dual_vertices(self, n=None):
        n = n or self.n
        if n is None:
            return None
        rows = []
        for S in itertools.combinations(range(n), self.k):
            for signs in itertools.product((1.0, -1.0), repeat=self.k):
                v = np.zeros(n)
                v[list(S)] = signs
                rows.append(v)
        return np.array(rows)


class SpectralGauge(KyFanGauge):
    """``max |x_i|``."""

    kind = "spectral"

    def __init__(self, n: int | None = None):
        super().__init__(1, n)

    def params(self):
        return {"n": self.n} if self.n else {}

    def eval(self, x):
        return float(np.abs(self._check(x)).max(initial=0.0))

    def support_report(self, y):
        return SupportResult(float(np.abs(self._check(y)).sum()))


class TraceGauge(Gauge):
    """``sum |x_i|``."""

    kind = "trace"

    def __init__(self, n: int | None = None):
        self.n = n

    def params(self):
        return {"n": self.n} if self.n else {}

    def eval(self, x):
        return float(np.abs(self._check(x)).sum())

    def support_report(self, y):
        return SupportResult(float(np.abs(self._check(y)).max(initial=0.0)))

    def subgradient(self, x):
        x = self._check(x)
        if not np.any(x):
            raise ValueError("subgradient is only defined at x != 0")
        tol = TIE_TOL * max(1.0, float(np.abs(x).max()))
        return np.where(x >= -tol, 1.0, -1.0)

    def dual_vertices(self, n=None):
        n = n or self.n
        if n is None:
            return None
        return np.array(list(itertools.product((1.0, -1.0), repeat=n)))


class OrbitGauge(Gauge):
    """Orbit gauge of a traceless, non-zero vector ``c``:
    ``eval(x) = sum c_i^dec x_i^dec + |sum x_i|``.

    On the hyperplane ``sum x_i = 0`` its polar body is the permutation
    polytope ``conv{sigma(c)}``; on all of R^n the polar body is that polytope
    plus the segment ``[-1, 1] * (1, ..., 1)``.
    """

    kind = "orbit"

    def __init__(self, c, normalize: bool = False):
        c = np.asarray(c, dtype=float)
        if c.ndim != 1 or len(c) < 2:
            raise ValueError("c must be a vector of length >= 2")
        c = c - c.mean()
        if np.ptp(c) <= 1e-14 * max(1.0, np.abs(c).max()):
            raise ValueError("degenerate orbit vector: c is a multiple of (1, ..., 1)")
        if normalize:
            c = c / np.linalg.norm(c)
        self.c = np.sort(c)[::-1]
        self.n = len(c)
        self.normalized = bool(normalize)
        self._partial = np.cumsum(self.c)[:-1]  # > 0 for non-degenerate c

    def params(self):
        return {"c": self.c.tolist()}

    @property
    def frobenius_normalized(self) -> bool:
        return abs(np.linalg.norm(self.c) - 1.0) <= 1e-12

    def eval(self, x):
        x = self._check(x)
        return float(self.c @ np.sort(x)[::-1] + abs(x.sum()))

    def orbit_part(self, x) -> float:
        x = self._check(x)
        return float(self.c @ np.sort(x)[::-1])

    def slice_support(self, y) -> float:
        """Minkowski functional of ``conv{sigma(c)}`` at the traceless part of
        ``y``: ``max_m S_m(y0) / S_m(c)`` over the top-m partial sums."""
        y = self._check(y)
        y0 = np.sort(y - y.mean())[::-1]
        return float(max(0.0, np.max(np.cumsum(y0)[:-1] / self._partial)))

    def support_report(self, y):
        y = self._check(y)
        return SupportResult(max(self.slice_support(y), abs(float(y.mean()))))

    def subgradient(self, x):
        x = self._check(x)
        if not np.any(x):
            raise ValueError("subgradient is only defined at x != 0")
        # stable descending order: among tied x the larger c goes first,
        # which is the lexicographically largest maximizer
        order = np.argsort(-x, kind="stable")
        u = np.empty(self.n)
        u[order] = self.c
        s = x.sum()
        tol = TIE_TOL * max(1.0, float(np.abs(x).max()))
        if abs(s) > tol:
            u += np.sign(s)
        return u

    def permutation_vertices(self) -> np.ndarray:
        perms = {tuple(p) for p in itertools.permutations(self.c.tolist())}
        return np.array(sorted(perms, reverse=True))

    def dual_vertices(self, n=None, traceless: bool = False):
        P = self.permutation_vertices()
        if traceless:
            return P
        one = np.ones(self.n)
        return np.vstack([P + one, P - one])

    @property
    def fully_homogeneous(self):
        return bool(np.allclose(self.c, -self.c[::-1], atol=1e-12, rtol=0))


class PolytopeGauge(Gauge):
    """Gauge of a polytope body given by a :class:`adnorm.geometry.Polytope`
    (anything with ``vertices``, ``facets`` and ``hyperplane``).  Facets are
    ``(a, b)`` with ``<a, x> <= b`` and ``b > 0``.  If the polytope lives in
    the hyperplane ``sum x = 0`` the gauge is ``inf`` off that hyperplane."""

    kind = "polytope"

    def __init__(self, polytope):
        self.polytope = polytope
        self.n = polytope.ambient_dim
        A = np.array([a for a, _ in polytope.facets])
        b = np.array([b for _, b in polytope.facets])
        if np.any(b <= 0):
            raise ValueError("0 must be an interior point of the polytope")
        self._normals = A / b[:, None]

    def params(self):
        return {
            "vertices": np.asarray(self.polytope.vertices).tolist(),
            "hyperplane": "sum-zero" if self.polytope.hyperplane else None,
        }

    def eval(self, x):
        x = self._check(x)
        if self.polytope.hyperplane and abs(x.sum()) > 1e-9 * max(1.0, np.abs(x).max()):
            return float("inf")
        return float(max(0.0, np.max(self._normals @ x)))

    def support_report(self, y):
        y = self._check(y)
        if self.polytope.hyperplane:
            y = y - y.mean()
        return SupportResult(float(np.max(np.asarray(self.polytope.vertices) @ y)))

    def dual_vertices(self, n=None):
        return np.array(sorted(map(tuple, self._normals), reverse=True))

    @property
    def fully_homogeneous(self):
        V = np.asarray(self.polytope.vertices)
        return all(abs(self.eval(-v) - 1.0) <= 1e-9 for v in V)


class EllipseGauge(Gauge):
    """Twisted ellipse in R^2: ``sqrt((x+y)^2/a^2 + (x-y)^2/b^2)``."""

    kind = "ellipse"
    smooth = True

    def __init__(self, a: float, b: float):
        if a <= 0 or b <= 0:
            raise ValueError("radii must be positive")
        self.a = float(a)
        self.b = float(b)
        self.n = 2

    def params(self):
        return {"a": self.a, "b": self.b}

    def eval(self, x):
        x, y = self._check(x)
        return float(math.sqrt((x + y) ** 2 / self.a**2 + (x - y) ** 2 / self.b**2))

    def subgradient(self, x):
        x = self._check(x)
        F = self.eval(x)
        if F == 0:
            raise ValueError("subgradient is only defined at x != 0")
        s, d = x[0] + x[1], x[0] - x[1]
        ga = s / self.a**2
        gb = d / self.b**2
        return np.array([ga + gb, ga - gb]) / F


class ToastGauge(Gauge):
    """The 'toast': l_1 off the first quadrant, ``(x^2+y^2)/(x+y)`` on it.

    Not fully homogeneous: its ball is the l_1 diamond with the first-quadrant
    edge replaced by an arc of the circle ``x^2 + y^2 = x + y``.
    """

    kind = "toast"

    def __init__(self):
        self.n = 2

    def eval(self, x):
        x, y = self._check(x)
        if x >= 0 and y >= 0:
            s = x + y
            return 0.0 if s == 0 else float((x * x + y * y) / s)
        return float(abs(x) + abs(y))

    def subgradient(self, v):
        x, y = self._check(v)
        if x == 0 and y == 0:
            raise ValueError("subgradient is only defined at x != 0")
        if x >= 0 and y >= 0:
            s2 = (x + y) ** 2
            return np.array([(x * x + 2 * x * y - y * y) / s2, (y * y + 2 * x * y - x * x) / s2])
        # kinks on the negative half-axes: two active pieces
        cands = []
        if x <= 0 and y >= 0:
            cands.append((-1.0, 1.0))
        if x <= 0 and y <= 0:
            cands.append((-1.0, -1.0))
        if x >= 0 and y <= 0:
            cands.append((1.0, -1.0))
        return _lex_largest(np.array(cands)).copy()

    def subdifferential_vertices(self, v) -> np.ndarray:
        x, y = self._check(v)
        if x > 0 or y > 0:
            return self.subgradient(v)[None, :]
        cands = []
        if x <= 0 and y >= 0:
            cands.append((-1.0, 1.0))
        if x <= 0 and y <= 0:
            cands.append((-1.0, -1.0))
        if x >= 0 and y <= 0:
            cands.append((1.0, -1.0))
        return np.array(cands)

    @property
    def fully_homogeneous(self):
        return False


class OracleGauge(Gauge):
    """Gauge of a body given only by a membership predicate.

    ``inner`` and ``outer`` are radii with ``B(inner) ⊂ body ⊂ B(outer)``;
    evaluation bisects along the ray through ``x`` to relative tolerance
    ``rtol``.  Not serializable.
    """

    kind = "oracle"

    def __init__(self, contains, n: int, inner: float, outer: float, rtol: float = 1e-10,
                 symmetric_hint: bool | None = None):
        if not 0 < inner <= outer:
            raise ValueError("need 0 < inner <= outer")
        self.contains = contains
        self.n = n
        self.inner = float(inner)
        self.outer = float(outer)
        self.rtol = rtol
        self._symmetric_hint = symmetric_hint

    def params(self):
        return {"n": self.n, "inner": self.inner, "outer": self.outer}

    def to_dict(self):
        raise TypeError("oracle gauges are not serializable")

    def eval(self, x):
        x = self._check(x)
        r = float(np.linalg.norm(x))
        if r == 0:
            return 0.0
        d = x / r
        lo, hi = self.inner, self.outer * (1 + 1e-12)
        if not self.contains(lo * d) or self.contains(hi * d):
            raise ValueError("bisection bracket failure: body unbounded or radii wrong")
        while hi - lo > self.rtol * lo:
            mid = 0.5 * (lo + hi)
            if self.contains(mid * d):
                lo = mid
            else:
                hi = mid
        return r / (0.5 * (lo + hi))

    @property
    def fully_homogeneous(self):
        if self._symmetric_hint is not None:
            return self._symmetric_hint
        rng = np.random.default_rng(0)
        probes = [np.eye(self.n)[i] - np.eye(self.n)[j] for i in range(self.n) for j in range(self.n) if i != j]
        probes += list(np.eye(self.n)) + list(rng.standard_normal((16, self.n)))
        return all(abs(self.eval(p) - self.eval(-p)) <= 1e-7 * self.eval(p) for p in probes)


# ---------------------------------------------------------------------------
# functional interface
# ---------------------------------------------------------------------------


def gauge_eval(g: Gauge, x) -> float:
    return g.eval(x)


def support(g: Gauge, y) -> float:
    return g.support(y)


def subgradient(g: Gauge, x) -> np.ndarray:
    return g.subgradient(x)


def is_fully_homogeneous(g: Gauge) -> bool:
    return g.fully_homogeneous


def gauge_from_dict(d: dict) -> Gauge:
    """Build a gauge from ``{"kind": ..., "params": {...}}``.  Parameters may
    also be given at the top level, e.g. ``{"kind": "orbit", "c": [...]}``."""
    kind = d.get("kind")
    p = dict(d.get("params") or {})
    p.update({k: v for k, v in d.items() if k not in ("kind", "params")})
    if kind in ("p", "p_gauge"):
        pv = float(p["p"])
        if pv == 1:
            return TraceGauge(p.get("n"))
        if np.isinf(pv):
            return SpectralGauge(p.get("n"))
        return PGauge(pv, p.get("n"))
    if kind == "frobenius":
        return PGauge(2.0, p.get("n"))
    if kind == "ky_fan":
        return KyFanGauge(int(p["k"]), p.get("n"))
    if kind == "spectral":
        return SpectralGauge(p.get("n"))
    if kind == "trace":
        return TraceGauge(p.get("n"))
    if kind == "orbit":
        return OrbitGauge(p["c"], normalize=bool(p.get("normalize", False)))
    if kind == "ellipse":
        return EllipseGauge(p["a"], p["b"])
    if kind == "toast":
        return ToastGauge()
    if kind == "polytope":
        from .geometry import Polytope

        poly = Polytope.from_vertices(np.asarray(p["vertices"], dtype=float),
                                      hyperplane=p.get("hyperplane") == "sum-zero")
        return PolytopeGauge(poly)
    raise ValueError(f"unknown gauge kind {kind!r}")


def standard_gauges(n: int) -> list[Gauge]:
    """One instance of every closed-form gauge family usable in dimension ``n``."""
    gs: list[Gauge] = [
        PGauge(2.0),
        PGauge(1.5),
        PGauge(3.0),
        SpectralGauge(),
        TraceGauge(),
    ]
    gs += [KyFanGauge(k) for k in range(2, n)]
    gs.append(OrbitGauge(np.arange(n, 0, -1, dtype=float), normalize=True))
    if n >= 3:
        gs.append(OrbitGauge(np.arange(n, 0, -1, dtype=float) ** 2, normalize=True))
    if n >= 3:
        gs.append(OrbitGauge(np.r_[np.ones(n - 1), -(n - 1.0)], normalize=True))
    if n == 2:
        gs += [EllipseGauge(1.0, 2.0), ToastGauge()]
    return gs
