"""Seeded property harness for the sphere geometry of Ad-invariant norms.

Each property is a function ``trial(m, rng, cfg) -> Outcome`` that draws its
own random inputs from ``rng`` and returns a violation normalized by the
scale of the inputs.  Violations up to ``tol`` pass, violations in
``(tol, 10 tol]`` are INCONCLUSIVE and anything larger is a FLAG, which
comes with a dossier holding every input needed to replay the trial.

Every trial draws from its own generator seeded by
``(seed, property, gauge index, n, trial index)``, so reports are
reproducible bit for bit and independent of execution order.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ._simplex import in_convex_hull
from .gauge import (
    EllipseGauge,
    Gauge,
    KyFanGauge,
    PGauge,
    SpectralGauge,
    ToastGauge,
    TraceGauge,
    gauge_from_dict,
    standard_gauges,
)
from .io import matrix_to_dict
from .linalg import (
    ad_exp,
    block_split,
    commutator,
    eigvals,
    frobenius,
    from_eigen,
    haar_unitary,
    random_skew,
    spectral,
    trace_inner,
)
from .majorization import majorizes
from .norms import (
    MatrixNorm,
    block_eigenvalues,
    certify_norming,
    diagonal_averaged_functional,
    norming_matrix,
    permute_within_block,
)

__all__ = [
    "PASS",
    "INCONCLUSIVE",
    "FLAG",
    "ConfigError",
    "TrialReport",
    "CurvatureResult",
    "LateralResult",
    "EqualityFaceVerdict",
    "tol_zero",
    "classify",
    "check_curvature_criterion",
    "curvature_witnesses",
    "check_lateral_derivative",
    "check_monotone_paths",
    "birkhoff_distance",
    "check_equality_face",
    "check_extreme_growth",
    "check_expansive",
    "regular_point",
    "random_target",
    "probe_open_problem",
    "PROPERTIES",
    "DEFAULT_CONFIG",
    "run_suite",
    "suite_to_dict",
    "replay",
]

PASS = "PASS"
INCONCLUSIVE = "INCONCLUSIVE"
FLAG = "FLAG"
_RANK = {PASS: 0, INCONCLUSIVE: 1, FLAG: 2}

HYSTERESIS = 10.0


class ConfigError(ValueError):
    """Invalid suite configuration."""


def tol_zero(scale: float, tol: float = 1e-9) -> float:
    return tol * (1.0 + scale)


def classify(violation: float, tol: float) -> str:
    """Verdict of a non-negative violation against ``tol`` with the
    hysteresis band ``(tol, 10 tol]`` reported as INCONCLUSIVE."""
    if not np.isfinite(violation):
        return FLAG
    if violation <= tol:
        return PASS
    if violation <= HYSTERESIS * tol:
        return INCONCLUSIVE
    return FLAG


def _worst(*verdicts: str) -> str:
    return max(verdicts, key=_RANK.__getitem__)


# ---------------------------------------------------------------------------
# random inputs
# ---------------------------------------------------------------------------


def _unit_skew(n: int, rng) -> np.ndarray:
    X = random_skew(n, rng)
    return X / frobenius(X)


def random_target(n: int, rng, repeated: bool | None = None) -> np.ndarray:
    """Random non-zero ``V`` with unit-scale spectrum; with ``repeated`` the
    spectrum has at least one multiple eigenvalue (and, for ``n >= 3``, at
    least two distinct levels)."""
    if repeated is None:
        repeated = bool(rng.integers(2))
    U = haar_unitary(n, rng)
    if not repeated or n == 1:
        x = rng.standard_normal(n)
    else:
        F = int(rng.integers(2, n)) if n >= 3 else 1
        levels = np.sort(rng.standard_normal(F))[::-1]
        cuts = np.sort(rng.choice(np.arange(1, n), size=F - 1, replace=False)) if F > 1 else []
        mult = np.diff(np.r_[0, cuts, n]).astype(int)
        x = np.repeat(levels, mult)
    if not np.any(x):
        x[0] = 1.0
    V = from_eigen(x, U)
    return V / frobenius(V)


def _mat(A) -> dict:
    return matrix_to_dict(A)


# ---------------------------------------------------------------------------
# Sphere-geometry checks
# ---------------------------------------------------------------------------


@dataclass
class CurvatureResult:
    lhs: float
    commutator_norm: float
    identity_rhs: float
    tol: float
    verdict: str
    dossier: dict | None = None


def check_curvature_criterion(m: MatrixNorm, V, X, tol: float = 1e-9, N=None, expect: bool | None = None) -> CurvatureResult:
    """Compare ``lhs = (N|[X,[X,V]])`` with ``||[X_C, N]||_F``.

    Both are zero or both are non-zero for a norming ``N`` of ``V``; ``lhs``
    must also match ``([N, X_C]|[X_C, V])``.  ``expect`` (True meaning
    "both vanish") adds a check against a known answer.
    """
    V = np.asarray(V)
    X = np.asarray(X)
    N = norming_matrix(m, V).N if N is None else (N.N if hasattr(N, "N") else np.asarray(N))
    sd = spectral(V)
    XC = block_split(X, sd).codiagonal
    lhs = trace_inner(N, commutator(X, commutator(X, V)))
    comm = frobenius(commutator(XC, N))
    rhs = trace_inner(commutator(N, XC), commutator(XC, V))
    sX, sV, sN = frobenius(X), frobenius(V), frobenius(N)
    t_lhs = tol_zero(sX * sX * sV * sN, tol)
    t_comm = tol_zero(sX * sN, tol)

    def zero_state(val, t):
        if val <= t:
            return 0
        if val > HYSTERESIS * t:
            return 1
        return None

    a = zero_state(abs(lhs), t_lhs)
    b = zero_state(comm, t_comm)
    if a is None or b is None:
        verdict = INCONCLUSIVE
    elif a == b:
        verdict = PASS
    else:
        verdict = FLAG
    if verdict == PASS and expect is not None and (a == 0) != expect:
        verdict = FLAG
    verdict = _worst(verdict, classify(abs(lhs - rhs), t_lhs))
    dossier = None
    if verdict == FLAG:
        dossier = {
            "check": "curvature",
            "gauge": m.gauge.to_dict(),
            "V": _mat(V),
            "X": _mat(X),
            "N": _mat(N),
            "lhs": lhs,
            "commutator_norm": comm,
            "identity_rhs": rhs,
            "tolerances": [t_lhs, t_comm],
            "expect_zero": expect,
        }
    return CurvatureResult(lhs, comm, rhs, t_lhs, verdict, dossier)


def curvature_witnesses(m: MatrixNorm, V, rng, N=None) -> list[tuple[np.ndarray, bool]]:
    """Constructed ``X`` for both directions of the equality criterion.

    In the common eigenbasis of ``V`` and ``N`` (entries ``x_j``, ``u_j``) an
    ``X`` supported on index pairs with ``x_j != x_k`` but ``u_j = u_k``
    gives ``lhs = 0`` although ``[X, V] != 0``; pairs with ``u_j != u_k``
    give a strictly negative ``lhs``.  A random block-diagonal part is added
    to both, which must not change the answer.
    """
    V = np.asarray(V)
    n = V.shape[0]
    sd = spectral(V)
    if N is None:
        N = norming_matrix(m, V, spectrum=sd).N
    U = sd.U
    x = sd.eigenvalues
    u = np.real(np.diag(-1j * (U.conj().T @ N @ U)))
    tol = 1e-9 * (1 + np.abs(u).max())
    XD = block_split(random_skew(n, rng), sd).diagonal
    out = []
    for equal in (True, False):
        E = np.zeros((n, n), dtype=complex)
        found = False
        for j in range(n):
            for k in range(j + 1, n):
                if abs(x[j] - x[k]) <= sd.cluster_tol:
                    continue
                if (abs(u[j] - u[k]) <= tol) == equal:
                    a = rng.standard_normal() + 1j * rng.standard_normal()
                    E[j, k] = a
                    E[k, j] = -np.conj(a)
                    found = True
        if found:
            out.append((U @ E @ U.conj().T + XD, equal))
    # X_C = 0: always in the zero class
    out.append((XD, True))
    return out


@dataclass
class LateralResult:
    fd: float
    analytic: float
    exact: bool
    quotients: list
    left_quotients: list
    monotone_violation: float
    one_sided_violation: float


def _norming_vertices(m: MatrixNorm, x: np.ndarray) -> tuple[np.ndarray, bool]:
    """Extreme points of the subdifferential of the gauge at ``x`` and
    whether that list is exhaustive."""
    g = m.gauge
    if isinstance(g, ToastGauge):
        return g.subdifferential_vertices(x), True
    if g.smooth:
        return g.subgradient(x)[None, :], True
    Vt = g.dual_vertices(len(x))
    if Vt is not None:
        vals = Vt @ x
        gx = g.eval(x)
        act = vals >= gx - 1e-9 * (1 + abs(gx))
        return Vt[act], True
    return g.subgradient(x)[None, :], False


def lateral_analytic(m: MatrixNorm, X, Y) -> tuple[float, bool]:
    """``max (N|Y)`` over norming ``N`` of ``X``, from the eigenvalues of the
    compressions of ``Y`` to the eigenspaces of ``X``."""
    sd = spectral(X)
    d = np.concatenate(block_eigenvalues(Y, sd))
    U, exact = _norming_vertices(m, sd.eigenvalues)
    if not exact:
        # finite family: the constructed functional with tied entries rearranged
        u = U[0]
        for sl in sd.block_slices():
            u[sl] = np.sort(u[sl])[::-1]
        best = float(u @ d)
        return best, False
    # d is sorted within each block; the best arrangement of u inside a block
    # is the aligned (decreasing) one
    vals = []
    for u in U:
        u = u.copy()
        for sl in sd.block_slices():
            u[sl] = np.sort(u[sl])[::-1]
        vals.append(float(u @ d))
    return max(vals), True


def check_lateral_derivative(m: MatrixNorm, X, Y, hs=(1e-3, 1e-4, 1e-5)) -> LateralResult:
    """One-sided derivative of ``t -> ||X + tY||`` at ``0+``: Richardson
    extrapolation of difference quotients against the analytic value."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    nX = m(X)
    hs = sorted(hs, reverse=True)
    q = [(m(X + h * Y) - nX) / h for h in hs]
    ql = [(nX - m(X - h * Y)) / h for h in hs]
    h1, h2 = hs[-2], hs[-1]
    fd = (h1 * q[-1] - h2 * q[-2]) / (h1 - h2)
    an, exact = lateral_analytic(m, X, Y)
    slack = 1e-9 * (1 + frobenius(Y)) / min(hs)
    mono = max([0.0] + [q[i + 1] - q[i] - slack for i in range(len(q) - 1)])
    one_sided = max([0.0] + [ql[i] - q[i] - slack for i in range(len(q))])
    return LateralResult(float(fd), an, exact, q, ql, mono, one_sided)


def check_monotone_paths(m: MatrixNorm, V, X, grid=None, tol: float = 1e-9) -> dict:
    """Monotonicity of ``s -> ||V - s[X,[X,V]]||`` on ``s >= 0`` and of
    ``t -> ||V + t[X,V]||`` away from ``t = 0`` in both directions."""
    if grid is None:
        grid = np.round(np.arange(0.0, 2.0 + 1e-12, 0.1), 12)
    grid = np.asarray(sorted(grid), dtype=float)
    V = np.asarray(V)
    X = np.asarray(X)
    C1 = commutator(X, V)
    C2 = commutator(X, C1)
    nV = m(V)
    g = np.array([m(V - s * C2) for s in grid])
    hp = np.array([m(V + t * C1) for t in grid])
    hm = np.array([m(V - t * C1) for t in grid])
    scale = frobenius(V) + frobenius(C2) * grid.max() + frobenius(C1) * grid.max()
    t = tol_zero(scale, tol)
    viol = 0.0
    for seq in (g, hp, hm):
        viol = max(viol, float(np.max(np.r_[0.0, seq[:-1] - seq[1:]])))
        viol = max(viol, float(nV - seq.min()))
    return {
        "violation": viol,
        "tol": t,
        "verdict": classify(viol, t),
        "g": g.tolist(),
        "h_plus": hp.tolist(),
        "h_minus": hm.tolist(),
    }


def birkhoff_distance(m: MatrixNorm, V, X, bracket=(-10.0, 10.0), max_expand: int = 6):
    """``min_s ||V - s[X,V]||`` and its minimizer (bounded Brent on a convex
    function, bracket doubled while the minimizer sits on its boundary)."""
    V = np.asarray(V)
    C = commutator(X, V)
    if not np.any(V):
        raise ValueError("V must be non-zero")
    if frobenius(C) <= 1e-14 * (1 + frobenius(V)):
        return m(V), 0.0
    lo, hi = bracket
    for _ in range(max_expand + 1):
        res = optimize.minimize_scalar(
            lambda s: m(V - s * C), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        edge = 1e-6 * (hi - lo)
        if lo + edge < res.x < hi - edge:
            break
        lo, hi = 2 * lo, 2 * hi
    else:
        raise RuntimeError("Birkhoff distance: bracket expansion failed")
    best = min(res.fun, m(V))
    s = float(res.x) if res.fun <= m(V) else 0.0
    return float(best), s


@dataclass
class EqualityFaceVerdict:
    norm_equal: bool
    commuting_norming: bool | None
    exhaustive: bool
    margin: float
    contradiction: bool
    verdict: str
    same_face: bool | None = None
    notes: dict = field(default_factory=dict)


def _norming_family(m: MatrixNorm, W) -> tuple[list[np.ndarray], bool]:
    """Norming matrices of ``W``: all vertex functionals when ``W`` is regular
    and the gauge exposes its subdifferential (the norming set is then their
    convex hull), otherwise the constructed functional and its rearrangements
    inside tied blocks."""
    sd = spectral(W)
    x = sd.eigenvalues
    Us, exact = _norming_vertices(m, x)
    if exact and (sd.is_regular() or m.gauge.smooth):
        return [from_eigen(u, sd.U) for u in Us], True
    N = norming_matrix(m, W, spectrum=sd).N
    fam = [N]
    for b, sl in enumerate(sd.block_slices()):
        size = sl.stop - sl.start
        if size > 1:
            fam.append(permute_within_block(N, sd, b, np.arange(size)[::-1]))
    return fam, False


def check_equality_face(m: MatrixNorm, V, X, tol: float = 1e-9, strict_expected: bool | None = None) -> EqualityFaceVerdict:
    """Cross-check the equivalent equality conditions for ``V + [X, V]``.

    (a) ``||V + [X,V]|| = ||V||``; (b) some norming ``N`` of ``V + [X,V]``
    has ``[N, X_C] = 0``.  For an exhaustively known norming set (b) is
    decided by a feasibility LP over the convex hull of the vertex
    functionals; otherwise only a positive answer is conclusive.  With
    ``strict_expected`` the inequality must be strict whenever
    ``[X, V] != 0``.
    """
    V = np.asarray(V)
    X = np.asarray(X)
    C = commutator(X, V)
    W = V + C
    margin = m(W) - m(V)
    scale = frobenius(V) + frobenius(C)
    t = tol_zero(scale, tol)
    a = margin <= t
    XC = block_split(X, spectral(V)).codiagonal
    fam, exhaustive = _norming_family(m, W)
    pts = np.array([commutator(N, XC).ravel() for N in fam])
    pts = np.concatenate([pts.real, pts.imag], axis=1)
    tc = tol_zero(frobenius(X) * max(frobenius(N) for N in fam), tol)
    if np.min(np.linalg.norm(pts, axis=1)) <= tc:
        b: bool | None = True
    elif exhaustive:
        b = bool(in_convex_hull(np.zeros(pts.shape[1]), pts)) if len(fam) > 1 else False
    else:
        b = None
    same_face = None
    if a:
        # a functional norming both V and W witnesses a common face
        same_face = any(
            abs(trace_inner(N, V) - m(V)) <= t and abs(trace_inner(N, W) - m(W)) <= t for N in fam
        ) or None
    contradiction = (b is True and margin > HYSTERESIS * t) or (a and b is False and exhaustive)
    strict_fail = bool(strict_expected) and frobenius(C) > 1e-8 and margin <= t
    if contradiction or strict_fail:
        verdict = FLAG
    elif (b is True and t < margin <= HYSTERESIS * t):
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    return EqualityFaceVerdict(bool(a), b, exhaustive, float(margin), bool(contradiction), verdict, same_face,
                           {"tol": t, "strict_fail": strict_fail})


def extreme_target(kind: str, n: int, rng) -> np.ndarray:
    """Extreme-point families: eigenvalues ``+-lambda`` (both signs present)
    or ``i lambda P`` with ``P`` a rank-one projection."""
    U = haar_unitary(n, rng)
    lam = float(rng.uniform(0.5, 2.0))
    if kind == "pm":
        s = np.ones(n)
        neg = rng.choice(n, size=int(rng.integers(1, n)), replace=False)
        s[neg] = -1.0
        return from_eigen(lam * s, U)
    x = np.zeros(n)
    x[0] = lam * rng.choice((-1.0, 1.0))
    return from_eigen(x, U)


def check_extreme_growth(kind, n: int = 3, trials: int = 100, seed=0, tol: float = 1e-9) -> "TrialReport":
    """Strict growth ``||V + [X,V]|| > ||V||`` at the extreme-point families
    of the spectral, trace and Ky-Fan norms, for random ``X`` with
    ``[X, V] != 0``.  ``kind`` is ``"spectral"``, ``"trace"`` or
    ``("ky_fan", k)``."""
    if isinstance(kind, (tuple, list)):
        g: Gauge = KyFanGauge(int(kind[1]))
        families = ("pm", "rank_one")
    elif kind == "spectral":
        g, families = SpectralGauge(), ("pm",)
    elif kind == "trace":
        g, families = TraceGauge(), ("rank_one",)
    else:
        raise ValueError(f"unknown extreme-point kind {kind!r}")
    m = MatrixNorm(g, n)
    worst = 0.0
    worst_case: dict = {}
    min_margin = np.inf
    flags = 0
    dossiers = []
    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        fam = families[t % len(families)]
        V = extreme_target(fam, n, rng)
        X = _unit_skew(n, rng)
        C = commutator(X, V)
        for D in (C, -commutator(X, C)):
            margin = m(V + D) - m(V)
            scale = frobenius(V) + frobenius(D)
            # strictness is relative to the size of the perturbation
            rel = margin / (frobenius(D) ** 2 + 1e-300)
            min_margin = min(min_margin, rel)
            viol = 0.0 if margin > tol_zero(scale, tol) else tol_zero(scale, tol) - margin + tol
            if viol > worst:
                worst = viol
                worst_case = {"V": _mat(V), "X": _mat(X), "margin": margin, "trial": t}
            if viol > 0:
                flags += 1
                dossiers.append({"check": "extreme_growth", "kind": str(kind), "V": _mat(V), "X": _mat(X),
                                 "margin": margin})
    rep = TrialReport(f"extreme_growth/{g.kind}{'' if g.kind != 'ky_fan' else g.k}/n={n}", trials, worst, tol,
                      int(seed), worst_case, flags=flags, dossiers=dossiers)
    rep.info["min_relative_margin"] = float(min_margin)
    return rep


def check_expansive(m: MatrixNorm, X, s_grid=None, trials: int = 20, seed=0, tol: float = 1e-9) -> "TrialReport":
    """Expansivity of ``1 - s ad^2 X`` (``s >= 0``) and ``1 + s ad X`` (all
    ``s``) over random ``V``, and invariance of the norm under
    ``V -> e^{sX} V e^{-sX}``."""
    if s_grid is None:
        s_grid = np.round(np.arange(0.0, 2.0 + 1e-12, 0.1), 12)
    X = np.asarray(X)
    n = X.shape[0]
    worst = 0.0
    worst_case: dict = {}
    flags = 0
    for t in range(trials):
        rng = np.random.default_rng([int(seed), t])
        V = random_target(n, rng)
        v = _expansive_violation(m, X, V, s_grid)
        viol = v / (1 + frobenius(V))
        if viol > worst:
            worst = viol
            worst_case = {"V": _mat(V), "X": _mat(X), "trial": t}
        if classify(viol, tol) == FLAG:
            flags += 1
    return TrialReport("expansive", trials, worst, tol, int(seed), worst_case, flags=flags)


def _expansive_violation(m: MatrixNorm, X, V, s_grid) -> float:
    nV = m(V)
    C1 = commutator(X, V)
    C2 = commutator(X, C1)
    viol = 0.0
    for s in s_grid:
        viol = max(viol, nV - m(V - s * C2), nV - m(V + s * C1), nV - m(V - s * C1))
        viol = max(viol, abs(m(ad_exp(s, X, V)) - nV))
    return viol / (1 + frobenius(X) ** 2 * max(s_grid, default=0.0))


def probe_open_problem(m: MatrixNorm, V, X, ts=None) -> dict:
    """Norm profile ``t -> ||V + t[X,V]||`` for inputs where the commuting
    hypothesis ``[N, X_C] = 0`` holds for the constructed norming family of
    ``V``.  Nothing is asserted."""
    if ts is None:
        ts = np.linspace(-0.1, 0.1, 21)
    V = np.asarray(V)
    X = np.asarray(X)
    XC = block_split(X, spectral(V)).codiagonal
    fam, exhaustive = _norming_family(m, V)
    hyp = all(frobenius(commutator(N, XC)) <= 1e-9 * (1 + frobenius(X)) for N in fam)
    C = commutator(X, V)
    prof = [m(V + t * C) - m(V) for t in ts]
    return {
        "hypothesis_holds": hyp,
        "family_exhaustive": exhaustive,
        "t": list(map(float, ts)),
        "excess": prof,
    }


# ---------------------------------------------------------------------------
# per-trial properties for the suite
# ---------------------------------------------------------------------------


@dataclass
class Outcome:
    violation: float
    verdict: str
    case: dict
    info: dict = field(default_factory=dict)


def _outcome(viol: float, tol: float, case: dict, **info) -> Outcome:
    return Outcome(float(viol), classify(viol, tol), case, info)


def _prop_dissipative(m, rng, cfg):
    n = m.n
    V = random_target(n, rng)
    N = norming_matrix(m, V).N
    X = _unit_skew(n, rng)
    Y = _unit_skew(n, rng)
    a = abs(trace_inner(N, commutator(X, V)))
    b = max(0.0, trace_inner(N, commutator(Y, commutator(Y, V))))
    viol = max(a, b) / (1 + frobenius(V) * frobenius(N))
    return _outcome(viol, cfg["zero"], {"V": _mat(V), "X": _mat(X), "Y": _mat(Y)})


def _prop_ordering(m, rng, cfg):
    n = m.n
    V = random_target(n, rng, repeated=True)
    sd = spectral(V)
    nm = norming_matrix(m, V, spectrum=sd)
    cands = [nm.N]
    # intra-block rotation and a rearrangement of tied eigenprojections
    R = np.eye(n, dtype=complex)
    for sl in sd.block_slices():
        k = sl.stop - sl.start
        if k > 1:
            Q = sd.U[:, sl]
            R += Q @ (haar_unitary(k, rng) - np.eye(k)) @ Q.conj().T
    cands.append(R @ nm.N @ R.conj().T)
    for b, sl in enumerate(sd.block_slices()):
        k = sl.stop - sl.start
        if k > 1:
            cands.append(permute_within_block(nm.N, sd, b, rng.permutation(k)))
    viol = 0.0
    for N in cands:
        blocks = block_eigenvalues(N, sd)
        for j in range(len(blocks)):
            for k in range(j + 1, len(blocks)):
                viol = max(viol, blocks[k].max() - blocks[j].min())
        cert = certify_norming(m, V, N, strict=False)
        r = cert.residuals
        viol = max(viol, r["pairing"] / (1 + frobenius(V)), r["dual_norm"], r["commutator"] / (1 + frobenius(V)))
    return _outcome(viol, cfg["zero"], {"V": _mat(V)})


def _prop_commutator_identity(m, rng, cfg):
    n = m.n
    V = random_target(n, rng)
    X = _unit_skew(n, rng)
    r = check_curvature_criterion(m, V, X, cfg["zero"])
    viol = abs(r.lhs - r.identity_rhs) / (1 + frobenius(V))
    return _outcome(viol, cfg["zero"], {"V": _mat(V), "X": _mat(X)})


def _prop_curvature(m, rng, cfg):
    n = m.n
    V = random_target(n, rng)
    N = norming_matrix(m, V).N
    cases = [(_unit_skew(n, rng), None)] + curvature_witnesses(m, V, rng, N)
    verdict = PASS
    worst = 0.0
    dossier = None
    for X, expect in cases:
        r = check_curvature_criterion(m, V, X, cfg["zero"], N=N, expect=expect)
        verdict = _worst(verdict, r.verdict)
        worst = max(worst, abs(r.lhs - r.identity_rhs) / (1 + frobenius(V)))
        if r.dossier and dossier is None:
            dossier = r.dossier
    out = Outcome(worst, _worst(verdict, classify(worst, cfg["zero"])), {"V": _mat(V)})
    if dossier:
        out.info["dossier"] = dossier
    return out


def _prop_block_average(m, rng, cfg):
    n = m.n
    V = random_target(n, rng, repeated=True)
    sd = spectral(V)
    N = norming_matrix(m, V, spectrum=sd)
    N_avg = diagonal_averaged_functional(m, V, N).N
    lam = np.real([np.trace(-1j * P @ N_avg) / d for P, d in zip(sd.projections, sd.multiplicities)])
    viol = max(0.0, float(np.max(np.r_[0.0, np.diff(lam)])))
    # witnesses: X commuting with N_avg (block-diagonal for N_avg's levels) and random X
    sN = spectral(N_avg)
    R = random_skew(n, rng)
    X0 = block_split(R, sN).diagonal
    verdict = PASS
    for X, expect in ((X0, True), (_unit_skew(n, rng), None)):
        lhs = trace_inner(N_avg, commutator(X, commutator(X, V)))
        comm = frobenius(commutator(X, N_avg))
        sX = frobenius(X)
        t1 = tol_zero(sX * sX * frobenius(V), cfg["zero"])
        t2 = tol_zero(sX, cfg["zero"])
        z1 = abs(lhs) <= t1
        z2 = comm <= t2
        amb = (t1 < abs(lhs) <= HYSTERESIS * t1) or (t2 < comm <= HYSTERESIS * t2)
        if amb:
            verdict = _worst(verdict, INCONCLUSIVE)
        elif z1 != z2 or (expect is not None and z1 != expect):
            verdict = FLAG
    return Outcome(viol, _worst(verdict, classify(viol, cfg["zero"])), {"V": _mat(V)},
                   {"block_means": list(map(float, lam))})


def _prop_monotone_paths(m, rng, cfg):
    n = m.n
    V = random_target(n, rng)
    X = _unit_skew(n, rng)
    r = check_monotone_paths(m, V, X, cfg["grid"], cfg["zero"])
    viol = r["violation"] / (r["tol"] / cfg["zero"])
    return _outcome(viol, cfg["zero"], {"V": _mat(V), "X": _mat(X)})


def _prop_majorization(m, rng, cfg):
    n = m.n
    V = random_target(n, rng)
    X = _unit_skew(n, rng)
    C1 = commutator(X, V)
    C2 = commutator(X, C1)
    v = eigvals(V)
    viol = 0.0
    for s in cfg["grid"]:
        for D in (s * C1, -s * C1, -s * C2):
            rep = majorizes(eigvals(V + D), v)
            viol = max(viol, -float(rep.partial_gaps[:-1].min(initial=0.0)), abs(rep.trace_gap))
    viol /= 1 + np.abs(v).sum()
    return _outcome(viol, cfg["zero"], {"V": _mat(V), "X": _mat(X)})


def _prop_birkhoff(m, rng, cfg):
    n = m.n
    V = random_target(n, rng)
    X = _unit_skew(n, rng)
    val, s = birkhoff_distance(m, V, X)
    viol = abs(val - m(V)) / (1 + m(V))
    return _outcome(viol, cfg["birkhoff"], {"V": _mat(V), "X": _mat(X)}, argmin=s)


def _prop_expansive(m, rng, cfg):
    n = m.n
    V = random_target(n, rng)
    X = _unit_skew(n, rng)
    viol = _expansive_violation(m, X, V, cfg["grid"]) / (1 + frobenius(V))
    return _outcome(viol, cfg["zero"], {"V": _mat(V), "X": _mat(X)})


def regular_point(m: MatrixNorm, rng, min_gap: float = 0.05, attempts: int = 200) -> np.ndarray:
    """Random unit ``X`` whose eigenvalues are separated by at least
    ``min_gap`` and, for vertex-type gauges, whose best and second-best dual
    vertices differ by at least ``min_gap``: finite differences with steps
    down to 1e-3 then stay inside one smooth piece of the norm."""
    n = m.n
    for _ in range(attempts):
        X = random_target(n, rng, repeated=False)
        x = eigvals(X)
        if n > 1 and np.min(-np.diff(x)) < min_gap:
            continue
        Vt = m.gauge.dual_vertices(n)
        if Vt is not None and len(Vt) > 1:
            vals = np.sort(Vt @ x)[::-1]
            if vals[0] - vals[1] < min_gap:
                continue
        if isinstance(m.gauge, ToastGauge) and min(abs(x)) < min_gap:
            continue
        return X
    raise RuntimeError("could not sample a regular point")


def _prop_lateral(m, rng, cfg):
    n = m.n
    X = regular_point(m, rng)
    Y = _unit_skew(n, rng)
    r = check_lateral_derivative(m, X, Y)
    if r.exact:
        gap = abs(r.fd - r.analytic)
    else:
        gap = max(0.0, r.analytic - r.fd)
    viol = max(gap / cfg["lateral"], (r.monotone_violation + r.one_sided_violation) / cfg["zero"])
    # reported on the scale of the derivative tolerance
    return _outcome(viol * cfg["lateral"], cfg["lateral"], {"X": _mat(X), "Y": _mat(Y)},
                    exact=r.exact, fd=r.fd, analytic=r.analytic)


def _prop_equality_face(m, rng, cfg):
    n = m.n
    V = random_target(n, rng)
    X = _unit_skew(n, rng)
    strict = isinstance(m.gauge, (PGauge, EllipseGauge))
    r = check_equality_face(m, V, X, cfg["zero"], strict_expected=strict)
    return Outcome(0.0 if r.verdict == PASS else r.margin, r.verdict, {"V": _mat(V), "X": _mat(X)},
                   {"margin": r.margin, "commuting_norming": r.commuting_norming})


def _prop_extreme_growth(m, rng, cfg):
    g = m.gauge
    n = m.n
    if isinstance(g, SpectralGauge):
        fam = "pm"
    elif isinstance(g, TraceGauge):
        fam = "rank_one"
    elif isinstance(g, KyFanGauge) and 1 < g.k < n:
        fam = ("pm", "rank_one")[int(rng.integers(2))]
    else:
        return Outcome(0.0, PASS, {}, {"skipped": True})
    if n < 2:
        return Outcome(0.0, PASS, {}, {"skipped": True})
    V = extreme_target(fam, n, rng)
    X = _unit_skew(n, rng)
    C = commutator(X, V)
    viol = 0.0
    for D in (C, -commutator(X, C)):
        margin = m(V + D) - m(V)
        t = tol_zero(frobenius(V) + frobenius(D), cfg["zero"])
        if frobenius(D) > 1e-8 and margin <= t:
            viol = max(viol, HYSTERESIS * 2 * cfg["zero"])
    return _outcome(viol, cfg["zero"], {"V": _mat(V), "X": _mat(X), "family": fam})


PROPERTIES = {
    "dissipative": _prop_dissipative,
    "ordering": _prop_ordering,
    "commutator_identity": _prop_commutator_identity,
    "curvature": _prop_curvature,
    "block_average": _prop_block_average,
    "monotone_paths": _prop_monotone_paths,
    "majorization": _prop_majorization,
    "birkhoff": _prop_birkhoff,
    "expansive": _prop_expansive,
    "lateral": _prop_lateral,
    "equality_face": _prop_equality_face,
    "extreme_growth": _prop_extreme_growth,
}


# ---------------------------------------------------------------------------
# suite runner
# ---------------------------------------------------------------------------


@dataclass
class TrialReport:
    property_id: str
    trials: int
    max_violation: float
    tolerance: float
    seed: int
    worst_case: dict
    flags: int = 0
    inconclusive: int = 0
    dossiers: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.flags == 0 and self.max_violation <= HYSTERESIS * self.tolerance

    def to_dict(self) -> dict:
        return {
            "property_id": self.property_id,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "flags": self.flags,
            "inconclusive": self.inconclusive,
            "passed": self.passed,
            "worst_case": self.worst_case,
            "dossiers": self.dossiers,
            "info": self.info,
        }


DEFAULT_CONFIG = {
    "gauges": "standard",
    "n": [2, 3, 4],
    "seeds": [1],
    "trials": 500,
    "properties": list(PROPERTIES),
    "tolerances": {"zero": 1e-9, "lateral": 1e-5, "birkhoff": 1e-8},
    "grid": {"start": 0.0, "stop": 2.0, "step": 0.1},
}


def _code(name: str) -> int:
    return zlib.crc32(name.encode())


def _normalize_config(config: dict | None) -> dict:
    cfg = {**DEFAULT_CONFIG, **(config or {})}
    unknown = set(cfg) - set(DEFAULT_CONFIG) - {"seed"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "seed" in cfg:
        cfg["seeds"] = [cfg.pop("seed")]
    try:
        cfg["n"] = [int(k) for k in np.atleast_1d(cfg["n"])]
        cfg["seeds"] = [int(s) for s in np.atleast_1d(cfg["seeds"])]
        cfg["trials"] = int(cfg["trials"])
        tols = {**DEFAULT_CONFIG["tolerances"], **(cfg.get("tolerances") or {})}
        tols = {k: float(v) for k, v in tols.items()}
        grid = {**DEFAULT_CONFIG["grid"], **(cfg.get("grid") or {})}
        grid = {k: float(v) for k, v in grid.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc
    if any(k < 1 for k in cfg["n"]) or cfg["trials"] < 0:
        raise ConfigError("n must be positive and trials non-negative")
    if any(v <= 0 for v in tols.values()):
        raise ConfigError("tolerances must be positive")
    if grid["step"] <= 0 or grid["stop"] < grid["start"] or grid["start"] < 0:
        raise ConfigError("grid must satisfy 0 <= start <= stop and step > 0")
    bad = [p for p in cfg["properties"] if p not in PROPERTIES]
    if bad:
        raise ConfigError(f"unknown properties: {bad}")
    g = cfg["gauges"]
    if g != "standard":
        if not isinstance(g, list):
            raise ConfigError("'gauges' must be \"standard\" or a list of gauge descriptions")
        try:
            [gauge_from_dict(d) for d in g]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid gauge description: {exc}") from exc
    cfg["tolerances"] = tols
    cfg["grid"] = grid
    return cfg


def _gauges_for(cfg: dict, n: int) -> list[tuple[int, Gauge]]:
    if cfg["gauges"] == "standard":
        return list(enumerate(standard_gauges(n)))
    out = []
    for i, d in enumerate(cfg["gauges"]):
        g = gauge_from_dict(d)
        if g.n is None or g.n == n:
            out.append((i, g))
    return out


def _grid(cfg: dict) -> np.ndarray:
    gr = cfg["grid"]
    k = int(math.floor((gr["stop"] - gr["start"]) / gr["step"] + 1e-9))
    return np.round(gr["start"] + gr["step"] * np.arange(k + 1), 12)


def _trial_cfg(cfg: dict) -> dict:
    return {**cfg["tolerances"], "grid": _grid(cfg)}


def _entropy(seed: int, prop: str, gi: int, n: int, t: int) -> list[int]:
    return [int(seed), _code(prop), int(gi), int(n), int(t)]


def run_suite(config: dict | None = None) -> list[TrialReport]:
    """Run every configured property for every gauge, dimension and seed.

    Config keys (all optional): ``gauges`` ("standard" or a list of gauge
    descriptions), ``n``, ``seeds`` (or ``seed``), ``trials`` per
    (property, gauge, n, seed), ``properties``, ``tolerances``
    (``zero``, ``lateral``, ``birkhoff``) and ``grid`` (``start``, ``stop``,
    ``step`` for the ``s`` grids).
    """
    cfg = _normalize_config(config)
    tcfg = _trial_cfg(cfg)
    reports: list[TrialReport] = []
    for prop in cfg["properties"]:
        fn = PROPERTIES[prop]
        for n in cfg["n"]:
            for gi, g in _gauges_for(cfg, n):
                m = MatrixNorm(g, n)
                for seed in cfg["seeds"]:
                    rep = TrialReport(f"{prop}/{g.kind}#{gi}/n={n}", cfg["trials"], 0.0,
                                      tcfg.get(_TOL_KEY.get(prop, "zero")), seed, {})
                    rep.info["gauge"] = g.to_dict()
                    for t in range(cfg["trials"]):
                        ent = _entropy(seed, prop, gi, n, t)
                        out = fn(m, np.random.default_rng(ent), tcfg)
                        if out.verdict == FLAG:
                            rep.flags += 1
                            rep.dossiers.append({"entropy": ent, "gauge": g.to_dict(), "n": n,
                                                 "case": out.case, **out.info})
                        elif out.verdict == INCONCLUSIVE:
                            rep.inconclusive += 1
                        if out.violation > rep.max_violation or not rep.worst_case:
                            rep.max_violation = out.violation
                            rep.worst_case = {"entropy": ent, "violation": out.violation, **out.case}
                        if out.info.get("exact") is False:
                            rep.info["lower_bound_only"] = True
                    reports.append(rep)
    return reports


_TOL_KEY = {"lateral": "lateral", "birkhoff": "birkhoff"}


def replay(report_entry: dict, config: dict | None = None) -> float:
    """Recompute the violation of a worst case or dossier from its entropy."""
    cfg = _normalize_config(config)
    tcfg = _trial_cfg(cfg)
    prop = report_entry["property_id"].split("/")[0] if "property_id" in report_entry else report_entry["property"]
    wc = report_entry.get("worst_case", report_entry)
    seed, _, gi, n, _t = wc["entropy"]
    g = gauge_from_dict(report_entry["info"]["gauge"]) if "info" in report_entry else gauge_from_dict(wc["gauge"])
    out = PROPERTIES[prop](MatrixNorm(g, n), np.random.default_rng(wc["entropy"]), tcfg)
    return out.violation


def suite_to_dict(reports: list[TrialReport], config: dict | None = None) -> dict:
    cfg = _normalize_config(config)
    flags = sum(r.flags for r in reports)
    return {
        "config": {**cfg, "grid": cfg["grid"]},
        "cluster_tol": "1e-8 * max(1, ||X||_F)",
        "flags": flags,
        "inconclusive": sum(r.inconclusive for r in reports),
        "passed": flags == 0 and all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
