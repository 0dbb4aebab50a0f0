import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adnorm.linalg import (
    ad_exp,
    block_split,
    commutator,
    eigvals,
    from_eigen,
    haar_unitary,
    is_skew_hermitian,
    random_skew,
    skew_hermitian,
    spectral,
    trace_inner,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 6)


def test_trace_inner_unit_and_orthogonal():
    A = from_eigen(np.array([1, 0, -1]) / np.sqrt(2))
    assert trace_inner(A, A) == pytest.approx(1.0, abs=1e-15)
    assert trace_inner(from_eigen([1, -1]), from_eigen([1, 1])) == 0.0


def test_trace_inner_is_minus_real_trace(rng):
    A, B = random_skew(4, rng), random_skew(4, rng)
    assert trace_inner(A, B) == pytest.approx(-np.trace(A @ B).real, abs=1e-12)
    assert trace_inner(A, B) == pytest.approx(trace_inner(B, A), abs=1e-12)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        trace_inner(np.zeros((2, 2)), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        commutator(np.zeros((2, 2)), np.zeros((3, 3)))


def test_commutator_examples(rng):
    X = random_skew(3, rng)
    assert np.allclose(commutator(X, X), 0)
    assert np.allclose(commutator(from_eigen([1, 2]), from_eigen([5, -3])), 0)
    # hand multiplication: XY = [[0, i], [i, 0]], YX = -XY
    X = np.diag([1j, -1j])
    Y = np.array([[0, 1], [-1, 0]], dtype=complex)
    assert np.array_equal(commutator(X, Y), np.array([[0, 2j], [2j, 0]]))


def test_skew_hermitian_validation():
    A = from_eigen([1.0, 2.0])
    A[0, 1] = 1e-12
    S = skew_hermitian(A)
    assert np.array_equal(S, -S.conj().T)
    with pytest.raises(ValueError):
        skew_hermitian(np.eye(2))
    with pytest.raises(ValueError):
        skew_hermitian(np.zeros((2, 3)))
    assert not is_skew_hermitian(np.ones(3))


def test_spectral_examples():
    sd = spectral(from_eigen([2, 2, 1]))
    assert np.allclose(sd.values, [2, 1])
    assert sd.multiplicities == (2, 1)
    assert np.linalg.matrix_rank(sd.projections[0]) == 2
    sd0 = spectral(np.zeros((3, 3)))
    assert sd0.values.tolist() == [0.0]
    assert np.allclose(sd0.projections[0], np.eye(3))


def test_spectral_round_trip_haar():
    U = haar_unitary(3, 7)
    X = from_eigen([3, 1, -1], U)
    sd = spectral(X)
    assert np.allclose(sd.values, [3, 1, -1], atol=1e-12)
    assert sd.is_regular()
    assert np.linalg.norm(sd.reconstruct() - X) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 8), seed=seeds)
def test_spectral_invariants(n, seed):
    rng = np.random.default_rng(seed)
    # integer levels force genuine repetitions
    x = rng.integers(-2, 3, size=n).astype(float)
    X = from_eigen(x, haar_unitary(n, rng))
    sd = spectral(X)
    I = np.eye(n)
    assert np.allclose(sum(sd.projections), I, atol=1e-10)
    for j, P in enumerate(sd.projections):
        assert np.allclose(P @ P, P, atol=1e-10)
        assert np.allclose(P, P.conj().T)
        for Q in sd.projections[j + 1 :]:
            assert np.allclose(P @ Q, 0, atol=1e-10)
    assert np.all(np.diff(sd.values) < -sd.cluster_tol)
    assert np.linalg.norm(sd.reconstruct() - X) <= 1e-10 * max(1, np.linalg.norm(X))


def test_clustering_merges_close_eigenvalues():
    sd = spectral(from_eigen([1.0, 1.0 + 1e-12, -1.0]))
    assert sd.multiplicities == (2, 1)
    sd = spectral(from_eigen([1.0, 1.0 + 1e-3, -1.0]))
    assert sd.multiplicities == (1, 1, 1)


def test_block_split_examples(rng):
    V = from_eigen([3, 1, -2])
    D = from_eigen([5, -1, 2])
    assert np.allclose(block_split(D, spectral(V)).codiagonal, 0)

    V = from_eigen([1, 1, -2])
    X = np.zeros((3, 3), dtype=complex)
    X[0, 2], X[1, 2] = 1 + 1j, 2
    X[2, 0], X[2, 1] = -np.conj(X[0, 2]), -np.conj(X[1, 2])
    assert np.allclose(block_split(X, spectral(V)).diagonal, 0)


@settings(max_examples=40, deadline=None)
@given(n=dims, seed=seeds)
def test_block_split_invariants(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.integers(-1, 2, size=n).astype(float)
    V = from_eigen(x, haar_unitary(n, rng))
    sd = spectral(V)
    X = random_skew(n, rng)
    bs = block_split(X, sd)
    assert np.allclose(bs.diagonal + bs.codiagonal, X, rtol=0, atol=1e-15)
    for P in sd.projections:
        assert np.allclose(P @ bs.codiagonal @ P, 0, atol=1e-10)
    assert np.allclose(commutator(bs.diagonal, V), 0, atol=1e-10)
    assert np.allclose(commutator(X, V), commutator(bs.codiagonal, V), atol=1e-10)
    again = block_split(bs.diagonal, sd)
    assert np.allclose(again.codiagonal, 0, atol=1e-10)


def test_haar_unitary_basics():
    u = haar_unitary(1, 3)
    assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-14
    U = haar_unitary(5, 3)
    assert np.allclose(U @ U.conj().T, np.eye(5), atol=1e-12)
    assert np.array_equal(haar_unitary(4, 11), haar_unitary(4, 11))
    Us = haar_unitary(3, 1, size=10)
    assert np.allclose(Us @ np.conj(np.swapaxes(Us, 1, 2)), np.eye(3), atol=1e-12)


def test_haar_average_of_conjugates():
    C = from_eigen([1.0, 0.0, -1.0])
    Us = haar_unitary(3, 5, size=10_000)
    mean = np.mean(Us @ C @ np.conj(np.swapaxes(Us, 1, 2)), axis=0)
    assert np.max(np.abs(mean)) <= 0.05
    Cs = from_eigen([2.0, 1.0, 0.0])
    mean = np.mean(Us @ Cs @ np.conj(np.swapaxes(Us, 1, 2)), axis=0)
    assert np.max(np.abs(mean - 1j * np.eye(3))) <= 0.05


def test_ad_exp(rng):
    X, V = random_skew(3, rng), random_skew(3, rng)
    assert np.allclose(ad_exp(0.0, X, V), V)
    D = from_eigen([1, 2, 3])
    assert np.allclose(ad_exp(0.7, D, from_eigen([4, 5, 6])), from_eigen([4, 5, 6]))
    errs = [np.linalg.norm((ad_exp(h, X, V) - V) / h - commutator(X, V)) for h in (1e-3, 1e-4)]
    assert errs[1] < errs[0] / 5
    assert np.allclose(eigvals(ad_exp(1.3, X, V)), eigvals(V), atol=1e-10)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(2, 5), seed=seeds)
def test_cyclic_identities(n, seed):
    rng = np.random.default_rng(seed)
    V, X, Y = (random_skew(n, rng) for _ in range(3))
    a = trace_inner(V, commutator(X, Y))
    assert abs(a - trace_inner(Y, commutator(V, X))) <= 1e-10
    assert abs(a - trace_inner(X, commutator(Y, V))) <= 1e-10
    # ad X is skew-adjoint
    assert abs(trace_inner(V, commutator(X, Y)) + trace_inner(commutator(X, V), Y)) <= 1e-10


def test_cyclic_identities_bulk():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        V, X, Y = (random_skew(4, rng) for _ in range(3))
        a = trace_inner(V, commutator(X, Y))
        worst = max(worst, abs(a - trace_inner(Y, commutator(V, X))), abs(a - trace_inner(X, commutator(Y, V))))
    assert worst <= 1e-10
