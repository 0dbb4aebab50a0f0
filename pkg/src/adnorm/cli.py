"""Command-line front end.

Machine-readable JSON goes to stdout, human summaries to stderr.  Exit
codes: 0 success, 1 I/O or parse error, 2 FLAG verdicts in ``verify``,
3 invalid configuration, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import geometry, majorization, norms, verify
from .gauge import OrbitGauge, gauge_from_dict
from .io import dump_json, load_json, load_matrix, load_vector_or_matrix, matrix_to_dict
from .linalg import NumericalError, eigvals

EXIT_OK, EXIT_IO, EXIT_FLAG, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _info(msg: str) -> None:
    sys.stderr.write(msg + "\n")


def _read_json_arg(text: str):
    """Inline JSON, ``@path`` or a plain path."""
    try:
        if text.lstrip().startswith(("{", "[")):
            return json.loads(text)
        return load_json(text[1:] if text.startswith("@") else text)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read JSON from {text!r}: {exc}", EXIT_IO) from exc


def _matrix(path: str) -> np.ndarray:
    try:
        return load_matrix(path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise CliError(f"cannot load matrix {path!r}: {exc}", EXIT_IO) from exc


def _norm(args, n: int) -> norms.MatrixNorm:
    desc = _read_json_arg(args.gauge)
    try:
        return norms.MatrixNorm.from_dict({"gauge": desc} if "gauge" not in desc else desc, n=n)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"invalid gauge description: {exc}", EXIT_CONFIG) from exc


def _polytope_arg(args) -> geometry.Polytope:
    if getattr(args, "polytope", None):
        try:
            return geometry.Polytope.from_dict(_read_json_arg(args.polytope))
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"invalid polytope: {exc}", EXIT_CONFIG) from exc
    if getattr(args, "c", None):
        try:
            return geometry.orbit_polytope(OrbitGauge(json.loads(args.c), normalize=args.normalize))
        except (json.JSONDecodeError, ValueError) as exc:
            raise CliError(f"invalid orbit vector: {exc}", EXIT_CONFIG) from exc
    raise CliError("give --polytope or --c", EXIT_CONFIG)


def _write_outputs(args, P: geometry.Polytope) -> dict:
    d = P.to_dict()
    if getattr(args, "out", None):
        dump_json(d, args.out)
    if getattr(args, "emit_csv", None):
        try:
            Path(args.emit_csv).write_text(geometry.emit_csv(P), encoding="utf-8")
        except ValueError as exc:
            raise CliError(str(exc), EXIT_CONFIG) from exc
    return d


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_norm(args):
    X = _matrix(args.matrix)
    m = _norm(args, X.shape[0])
    val = m(X)
    _info(f"norm = {val:.12g}")
    return {"value": val, "gauge": m.gauge.to_dict(), "n": m.n}


def cmd_dual(args):
    X = _matrix(args.matrix)
    m = _norm(args, X.shape[0])
    rep = m.gauge.support_report(eigvals(X))
    _info(f"dual norm = {rep.value:.12g}" + (" (lower bound)" if rep.lower_bound else ""))
    return {"value": rep.value, "lower_bound": rep.lower_bound, "spread": rep.spread}


def cmd_norming(args):
    V = _matrix(args.matrix)
    m = _norm(args, V.shape[0])
    if args.ky_fan_distinguished:
        k = getattr(m.gauge, "k", None)
        if m.gauge.kind not in ("ky_fan", "spectral") or k is None:
            raise CliError("--ky-fan-distinguished needs a ky_fan gauge", EXIT_CONFIG)
        nm = norms.ky_fan_distinguished_norming(V, k, tol=args.tol)
    else:
        nm = norms.norming_matrix(m, V, tol=args.tol)
    _info(f"norming matrix certified: (N|V) = {nm.value_at_target:.12g}, dual norm = {nm.certified_dual_norm:.12g}")
    return {
        "value": m(V),
        "N": matrix_to_dict(nm.N),
        "certified_dual_norm": nm.certified_dual_norm,
        "value_at_target": nm.value_at_target,
        "certificates": nm.residuals,
    }


def cmd_taylor(args):
    A = _matrix(args.a)
    B = _matrix(args.b)
    m = _norm(args, A.shape[0])
    r = norms.taylor_norm_report(m, A, B, grid=args.grid)
    _info(f"Taylor norm = {r.value:.12g} at t = {r.t:.6g}")
    return {"value": r.value, "t": r.t, "grid_points": r.grid_points}


def cmd_birkhoff(args):
    V = _matrix(args.v)
    X = _matrix(args.x)
    m = _norm(args, V.shape[0])
    val, s = verify.birkhoff_distance(m, V, X)
    nV = m(V)
    _info(f"min_s ||V - s[X,V]|| = {val:.12g} (||V|| = {nV:.12g}) at s = {s:.6g}")
    return {"min_value": val, "argmin_s": s, "norm": nV, "gap": val - nV}


def cmd_majorize(args):
    try:
        z = load_vector_or_matrix(args.z)
        w = load_vector_or_matrix(args.w)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise CliError(f"cannot load vectors: {exc}", EXIT_IO) from exc
    try:
        rep = majorization.majorizes(w, z, args.tol)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc
    out = rep.to_dict()
    if args.witness and rep.holds:
        out["witness"] = majorization.ds_witness(w, z, args.tol).tolist()
    _info("z is majorized by w" if rep.holds else "z is NOT majorized by w")
    return out


def cmd_hull(args):
    Z = _matrix(args.Z)
    W = _matrix(args.W)
    if Z.shape != W.shape:
        raise CliError("Z and W have different dimensions", EXIT_CONFIG)
    inside = majorization.in_orbit_hull(Z, W, args.tol)
    out = {"in_hull": inside}
    if inside:
        dec = majorization.hull_decomposition(Z, W, args.tol)
        out.update({"count": dec.count, "residual": dec.residual, "birkhoff_terms": dec.birkhoff_terms,
                     "weights": dec.weights.tolist()})
        if args.emit_decomposition:
            dump_json(dec.to_dict(), args.emit_decomposition)
        _info(f"Z is in co(orbit of W): {dec.count} terms, residual {dec.residual:.3e}")
    else:
        _info("Z is not in the convex hull of the unitary orbit of W")
    return out


def cmd_polytope(args):
    P = _polytope_arg(args)
    _info(f"polytope: {len(P.vertices)} vertices, {len(P.facets)} facets")
    return _write_outputs(args, P)


def cmd_polar(args):
    try:
        D = geometry.polar_dual(_polytope_arg(args))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc
    _info(f"polar dual: {len(D.vertices)} vertices, {len(D.facets)} facets")
    return _write_outputs(args, D)


def cmd_selfdual(args):
    P = _polytope_arg(args)
    ok, tr = geometry.is_self_dual(P, args.tol)
    _info("self-dual" if ok else "not self-dual")
    out = {"self_dual": ok}
    if ok:
        out.update({"scale": tr["scale"], "det": tr["det"], "rotation": tr["rotation"].tolist()})
    return out


def cmd_verify(args):
    cfg = {}
    if args.config:
        cfg = _read_json_arg(args.config)
        if not isinstance(cfg, dict):
            raise CliError("config must be a JSON object", EXIT_CONFIG)
    env_seed = os.environ.get("ADNORM_SEED")
    seed = args.seed if args.seed is not None else env_seed
    if seed is not None:
        try:
            cfg = {k: v for k, v in cfg.items() if k != "seed"}
            cfg["seeds"] = [int(seed)]
        except ValueError as exc:
            raise CliError(f"invalid seed {seed!r}", EXIT_CONFIG) from exc
    try:
        reports = verify.run_suite(cfg)
        result = verify.suite_to_dict(reports, cfg)
    except verify.ConfigError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc
    if args.out:
        dump_json(result, args.out)
    failed = [r for r in reports if not r.passed]
    _info(f"{len(reports)} reports, {result['flags']} FLAG, {result['inconclusive']} INCONCLUSIVE, "
          f"{len(failed)} failing")
    for r in failed:
        _info(f"  FAIL {r.property_id}: max violation {r.max_violation:.3e} (tol {r.tolerance:.1e})")
    summary = {"passed": result["passed"], "flags": result["flags"], "inconclusive": result["inconclusive"],
               "reports": len(reports)}
    code = EXIT_FLAG if result["flags"] else EXIT_OK
    return summary, code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adnorm", description="Ad-invariant Finsler norms on u(n).")
    sub = p.add_subparsers(dest="command", required=True)

    def gauge_cmd(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--gauge", required=True, help='gauge JSON, e.g. \'{"kind":"p","p":3}\', or a file')
        return s

    s = gauge_cmd("norm", "evaluate the norm of a matrix")
    s.add_argument("--matrix", required=True)
    s.set_defaults(func=cmd_norm)

    s = gauge_cmd("dual", "evaluate the dual norm")
    s.add_argument("--matrix", required=True)
    s.set_defaults(func=cmd_dual)

    s = gauge_cmd("norming", "certified norming matrix of V")
    s.add_argument("--matrix", required=True)
    s.add_argument("--tol", type=float, default=norms.CERT_TOL)
    s.add_argument("--ky-fan-distinguished", action="store_true",
                   help="use the polar-decomposition functional for a Ky-Fan gauge")
    s.set_defaults(func=cmd_norming)

    s = gauge_cmd("taylor", "Taylor norm of A + iB")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--grid", type=int, default=720)
    s.set_defaults(func=cmd_taylor)

    s = gauge_cmd("birkhoff", "min over s of ||V - s[X,V]||")
    s.add_argument("--v", required=True)
    s.add_argument("--x", required=True)
    s.set_defaults(func=cmd_birkhoff)

    s = sub.add_parser("majorize", help="test z ≺ w (vectors or matrices)")
    s.add_argument("--z", required=True)
    s.add_argument("--w", required=True)
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--witness", action="store_true", help="include a doubly stochastic witness")
    s.set_defaults(func=cmd_majorize)

    s = sub.add_parser("hull", help="decompose Z as a convex combination of conjugates of W")
    s.add_argument("Z")
    s.add_argument("W")
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--emit-decomposition", metavar="PATH")
    s.set_defaults(func=cmd_hull)

    for name, fn, help_ in (
        ("polytope", cmd_polytope, "orbit polytope of c, or re-normalize a polytope file"),
        ("polar", cmd_polar, "polar dual of a polytope"),
        ("selfdual", cmd_selfdual, "self-duality test"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--polytope", help="polytope JSON or file")
        s.add_argument("--c", help="orbit vector as a JSON list")
        s.add_argument("--normalize", action="store_true", help="scale c to unit Euclidean norm")
        if name == "selfdual":
            s.add_argument("--tol", type=float, default=1e-8)
        else:
            s.add_argument("--out", help="also write the polytope JSON here")
            s.add_argument("--emit-csv", metavar="PATH", help="write 2-D/3-D vertex coordinates as CSV")
        s.set_defaults(func=fn)

    s = sub.add_parser("verify", help="run the property suite")
    s.add_argument("--config")
    s.add_argument("--out")
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        res = args.func(args)
    except CliError as exc:
        _info(f"error: {exc}")
        return exc.code
    except (NumericalError, norms.CertificationError, RuntimeError, np.linalg.LinAlgError) as exc:
        _info(f"numerical failure: {exc}")
        return EXIT_NUMERIC
    except ValueError as exc:
        _info(f"error: {exc}")
        return EXIT_CONFIG
    code = EXIT_OK
    if isinstance(res, tuple):
        res, code = res
    _emit(res)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
