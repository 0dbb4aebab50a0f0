"""JSON serialization of matrices, vectors, gauges and polytopes."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .linalg import skew_hermitian

__all__ = [
    "matrix_to_dict",
    "matrix_from_dict",
    "load_matrix",
    "save_matrix",
    "load_json",
    "dump_json",
    "load_vector_or_matrix",
]


def matrix_to_dict(A) -> dict:
    A = np.asarray(A, dtype=complex)
    return {"n": int(A.shape[0]), "re": A.real.tolist(), "im": A.imag.tolist()}


def matrix_from_dict(d: dict, validate: bool = True, tol: float = 1e-9) -> np.ndarray:
    """Inverse of :func:`matrix_to_dict`.  With ``validate`` the matrix must
    be skew-Hermitian within ``tol`` and is returned exactly symmetrized."""
    try:
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if re.shape != im.shape or re.ndim != 2:
        raise ValueError("'re' and 'im' must be equal-shape 2-D arrays")
    if "n" in d and int(d["n"]) != re.shape[0]:
        raise ValueError(f"declared n={d['n']} does not match data shape {re.shape}")
    A = re + 1j * im
    return skew_hermitian(A, tol) if validate else A


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj, path=None, indent: int = 2) -> str:
    text = json.dumps(obj, indent=indent, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


def load_matrix(path, tol: float = 1e-9) -> np.ndarray:
    return matrix_from_dict(load_json(path), tol=tol)


def save_matrix(A, path) -> None:
    dump_json(matrix_to_dict(A), path)


def load_vector_or_matrix(path) -> np.ndarray:
    """A real vector (plain list, or ``{"vector": [...]}``) or a matrix file,
    returned as the eigenvalue vector of ``-iA`` in the latter case."""
    from .linalg import eigvals

    d = load_json(path)
    if isinstance(d, list):
        return np.asarray(d, dtype=float)
    if "vector" in d:
        return np.asarray(d["vector"], dtype=float)
    return eigvals(matrix_from_dict(d))
