import math

import numpy as np
import pytest

from adnorm.gauge import KyFanGauge, OrbitGauge, PGauge, SpectralGauge, TraceGauge, standard_gauges
from adnorm.linalg import commutator, eigvals, frobenius, from_eigen, haar_unitary, random_skew, trace_inner
from adnorm.majorization import hull_decomposition
from adnorm.norms import (
    CertificationError,
    MatrixNorm,
    block_eigenvalues,
    c_radius_norm,
    certify_norming,
    diagonal_averaged_functional,
    ky_fan_distinguished_norming,
    norming_matrix,
    orbit_norm,
    permute_within_block,
    taylor_norm,
    taylor_norm_report,
)
from adnorm.linalg import spectral

SQ2 = math.sqrt(2.0)


def test_matrix_norm_examples(rng):
    assert MatrixNorm(SpectralGauge(), 3)(from_eigen([1, -1, 1])) == pytest.approx(1.0)
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    v /= np.linalg.norm(v)
    P = np.outer(v, v.conj())
    assert MatrixNorm(TraceGauge(), 3)(1j * -2.5 * P) == pytest.approx(2.5)
    c = np.array([1.0, 0.0, -1.0]) / SQ2
    m = MatrixNorm(OrbitGauge(c), 3)
    for _ in range(5):
        U = haar_unitary(3, rng)
        assert m(from_eigen(c, U)) == pytest.approx(1.0, abs=1e-12)


def test_orbit_norm_examples(rng):
    c = np.array([3.0, -1.0, -2.0])
    c /= np.linalg.norm(c)
    assert orbit_norm(c, from_eigen(c, haar_unitary(3, rng))) == pytest.approx(1.0, abs=1e-12)
    assert orbit_norm(c, 1j * 0.7 * np.eye(3)) == pytest.approx(2.1)
    assert orbit_norm(c, 1j * -0.7 * np.eye(3)) == pytest.approx(2.1)
    with pytest.raises(ValueError):
        orbit_norm([1.0, 1.0, 1.0], np.zeros((3, 3)))
    with pytest.raises(ValueError):
        orbit_norm(c, np.zeros((2, 2)))


def test_orbit_norm_dominates_sampled_unitaries(rng):
    c = np.array([2.0, 0.5, -2.5])
    C = from_eigen(c - c.mean())
    X = random_skew(3, rng)
    Us = haar_unitary(3, rng, size=2000)
    vals = np.real(np.einsum("kij,ij->k", Us @ C @ Us.conj().transpose(0, 2, 1), X.conj()))
    closed = orbit_norm(c, X) - abs(np.trace(X))
    assert vals.max() <= closed + 1e-12
    # the aligning unitary attains it
    sx = spectral(X)
    Ualign = sx.U
    assert trace_inner(Ualign @ C @ Ualign.conj().T, X) == pytest.approx(closed, abs=1e-12)


def test_c_radius_norm(rng):
    C = from_eigen([2.0, 0.0, -1.0])
    X = from_eigen([1.0, 0.5, 0.2])
    assert c_radius_norm(C, X) == pytest.approx(max(2 * 1 - 0.2, 1 * 1 - 2 * 0.2))
    U = haar_unitary(3, rng)
    samples = [abs(np.trace(C @ V.conj().T @ X @ V)) for V in haar_unitary(3, rng, size=500)]
    assert max(samples) <= c_radius_norm(C, U @ X @ U.conj().T) + 1e-12


def test_dual_norm_examples(rng):
    assert MatrixNorm(PGauge(2), 2).dual(from_eigen([3.0, 4.0])) == pytest.approx(5.0)
    for n in (3, 4):
        for k in range(1, n + 1):
            m = MatrixNorm(KyFanGauge(k), n)
            X = random_skew(n, rng)
            x = np.abs(eigvals(X))
            assert m.dual(X) == pytest.approx(max(x.sum() / k, x.max()), rel=1e-12)
    c = np.array([1.0, 0.0, -1.0]) / SQ2
    m = MatrixNorm(OrbitGauge(c), 3)
    for _ in range(20):
        X = random_skew(3, rng)
        X -= np.trace(X) / 3 * np.eye(3)
        assert m.dual(X) >= m(X) - 1e-12


def test_ad_invariance_all_gauges(rng):
    for n in (2, 3, 4):
        for g in standard_gauges(n):
            m = MatrixNorm(g, n)
            for _ in range(20):
                X = random_skew(n, rng)
                U = haar_unitary(n, rng)
                assert abs(m(U @ X @ U.conj().T) - m(X)) <= 1e-9


def test_majorization_monotonicity(rng):
    for n in (2, 3, 4):
        for _ in range(10):
            W = random_skew(n, rng)
            Us = haar_unitary(n, rng, size=3)
            lam = rng.dirichlet(np.ones(3))
            Z = sum(l * U @ W @ U.conj().T for l, U in zip(lam, Us))
            for g in standard_gauges(n):
                m = MatrixNorm(g, n)
                assert m(Z) <= m(W) + 1e-9


def test_frobenius_norming_is_normalized_target(rng):
    m = MatrixNorm(PGauge(2), 4)
    V = random_skew(4, rng)
    nm = norming_matrix(m, V)
    assert np.allclose(nm.N, V / frobenius(V), atol=1e-12)


def test_p_norming_formula():
    p = 3.0
    x = np.array([2.0, -1.0, 0.5])
    V = from_eigen(x)
    nm = norming_matrix(MatrixNorm(PGauge(p), 3), V)
    expect = from_eigen(np.sign(x) * np.abs(x) ** (p - 1) / np.linalg.norm(x, p) ** (p - 1))
    assert np.allclose(nm.N, expect, atol=1e-12)


def test_orbit_norming_is_aligned_conjugate(rng):
    c = np.array([3.0, -1.0, -2.0]) / math.sqrt(14)
    m = MatrixNorm(OrbitGauge(c), 3)
    U = haar_unitary(3, rng)
    V = from_eigen([0.3, 1.2, -0.4], U)
    nm = norming_matrix(m, V)
    # eigenvalue 1.2 pairs with 3, 0.3 with -1, -0.4 with -2; the positive
    # trace adds the identity term of |tr X|
    expect = from_eigen(np.array([-1.0, 3.0, -2.0]) / math.sqrt(14) + 1.0, U)
    assert np.allclose(nm.N, expect, atol=1e-10)
    assert nm.value_at_target == pytest.approx(orbit_norm(c, V), abs=1e-12)


def test_norming_certificates_all_gauges(rng):
    for n in (2, 3, 4):
        for g in standard_gauges(n):
            m = MatrixNorm(g, n)
            for repeated in (False, True):
                if repeated and n > 2:
                    x = np.r_[1.0, 1.0, rng.standard_normal(n - 2)]
                else:
                    x = rng.standard_normal(n)
                V = from_eigen(x, haar_unitary(n, rng))
                nm = norming_matrix(m, V)
                assert nm.residuals["pairing"] <= 1e-9 * (1 + frobenius(V))
                assert nm.residuals["dual_norm"] <= 2e-9
                assert nm.residuals["commutator"] <= 1e-9 * (1 + frobenius(V))


def test_block_ordering(rng):
    n = 4
    for g in standard_gauges(n):
        m = MatrixNorm(g, n)
        V = from_eigen([1.5, 1.5, -0.2, -0.2], haar_unitary(n, rng))
        nm = norming_matrix(m, V)
        sd = spectral(V)
        blocks = block_eigenvalues(nm.N, sd)
        for k in range(len(blocks)):
            for j in range(k + 1, len(blocks)):
                assert blocks[k].min() >= blocks[j].max() - 1e-9
        # permuting tied eigenprojections gives another norming matrix
        N2 = permute_within_block(nm.N, sd, 0, [1, 0])
        certify_norming(m, V, N2)


def test_norming_rejects_zero_and_bad_candidate():
    m = MatrixNorm(PGauge(2), 2)
    with pytest.raises(ValueError):
        norming_matrix(m, np.zeros((2, 2), dtype=complex))
    V = from_eigen([1.0, 0.0])
    with pytest.raises(CertificationError) as info:
        certify_norming(m, V, from_eigen([0.0, 1.0]))
    assert info.value.residuals["pairing"] == pytest.approx(1.0)
    rep = certify_norming(m, V, from_eigen([0.0, 1.0]), strict=False)
    assert rep.residuals["pairing"] == pytest.approx(1.0)


def test_ky_fan_distinguished(rng):
    for n in (3, 4):
        for k in range(1, n + 1):
            V = random_skew(n, rng)
            nm = ky_fan_distinguished_norming(V, k)
            x = eigvals(V)
            assert nm.value_at_target == pytest.approx(np.sort(np.abs(x))[::-1][:k].sum(), rel=1e-12)
            assert max(nm.residuals.values()) <= 1e-12 * (1 + frobenius(V))


def test_diagonal_average_example():
    m = MatrixNorm(KyFanGauge(2), 3)
    V = from_eigen([2.0, 1.0, 1.0])
    for a in (0.0, 0.3, 1.0):
        # lower block eigenvalues (a, 1 - a) rotated off the diagonal
        R = np.array([[1, 1], [-1, 1]]) / SQ2
        B = R @ np.diag([a, 1 - a]) @ R.T
        H = np.zeros((3, 3))
        H[0, 0] = 1.0
        H[1:, 1:] = B
        N = 1j * H
        certify_norming(m, V, N)
        out = diagonal_averaged_functional(m, V, N)
        assert out.residuals["block_means"] == pytest.approx([1.0, 0.5])
        assert np.allclose(out.N, from_eigen([1.0, 0.5, 0.5]))


def test_diagonal_average_keeps_diagonal(rng):
    m = MatrixNorm(PGauge(3), 3)
    V = random_skew(3, rng)
    nm = norming_matrix(m, V)
    out = diagonal_averaged_functional(m, V, nm)
    assert np.allclose(out.N, nm.N, atol=1e-10)


def test_diagonal_average_random(rng):
    for g in standard_gauges(4):
        m = MatrixNorm(g, 4)
        V = from_eigen([1.0, 1.0, 1.0, -0.5], haar_unitary(4, rng))
        out = diagonal_averaged_functional(m, V, norming_matrix(m, V))
        lam = out.residuals["block_means"]
        assert all(lam[i] >= lam[i + 1] - 1e-12 for i in range(len(lam) - 1))
        assert abs(m.dual(out.N) - 1) <= 1e-9
        assert abs(trace_inner(out.N, V) - m(V)) <= 1e-9


def test_taylor_norm(rng):
    m = MatrixNorm(PGauge(2), 3)
    A = random_skew(3, rng)
    B = random_skew(3, rng)
    assert taylor_norm(m, A, np.zeros_like(A)) == pytest.approx(m(A), rel=1e-12)
    assert taylor_norm(m, np.zeros_like(A), B) == pytest.approx(m(B), rel=1e-12)
    U = haar_unitary(3, rng)
    t1 = taylor_norm(m, A, B)
    t2 = taylor_norm(m, U @ A @ U.conj().T, U @ B @ U.conj().T)
    assert t1 == pytest.approx(t2, abs=1e-8)
    rep = taylor_norm_report(m, A, B)
    assert rep.grid_points == 720
    assert rep.value >= max(m(A), m(B)) - 1e-12


def test_taylor_frobenius_closed_form(rng):
    # ||A cos t - B sin t||_F^2 is a quadratic form in (cos t, sin t)
    m = MatrixNorm(PGauge(2), 3)
    A = random_skew(3, rng)
    B = random_skew(3, rng)
    G = np.array([[trace_inner(A, A), -trace_inner(A, B)], [-trace_inner(A, B), trace_inner(B, B)]])
    assert taylor_norm(m, A, B) == pytest.approx(math.sqrt(np.linalg.eigvalsh(G).max()), rel=1e-10)


def test_matrix_norm_serialization():
    m = MatrixNorm(OrbitGauge([1.0, 0.0, -1.0]), 3)
    m2 = MatrixNorm.from_dict(m.to_dict())
    X = from_eigen([0.4, -0.1, 0.3])
    assert m2(X) == pytest.approx(m(X))
    with pytest.raises(ValueError):
        MatrixNorm(OrbitGauge([1.0, 0.0, -1.0]), 4)
    with pytest.raises(ValueError):
        MatrixNorm.from_dict({"gauge": {"kind": "spectral"}})


def test_hull_combination_obeys_norm_bound(rng):
    W = from_eigen([1.0, 0.2, -1.2], haar_unitary(3, rng))
    Z = from_eigen([0.5, 0.0, -0.5], haar_unitary(3, rng))
    dec = hull_decomposition(Z, W)
    m = MatrixNorm(SpectralGauge(), 3)
    assert m(dec.reconstruct(W)) <= sum(l * m(W) for l in dec.weights) + 1e-12
