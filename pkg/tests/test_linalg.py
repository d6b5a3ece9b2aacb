import numpy as np
import pytest
from conftest import assert_allclose, random_hermitian
from hypothesis import given
from hypothesis import strategies as st

from picolsd.errors import DimMismatch, InvalidMatrix, NotPsd, SingularSystem
from picolsd.generators import haar_unitary, werner_state
from picolsd.linalg import (
    eig_hermitian,
    frobenius_inner,
    fro_norm,
    is_psd,
    kron,
    psd_sqrt,
    rank_eps,
    solve_hermitian_linear,
)
from picolsd.qubits import PAULI, PHI_PLUS, partial_transpose_1, pauli_basis, projector

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
dims = st.integers(min_value=1, max_value=12)


def test_identity_spectrum():
    values, vectors = eig_hermitian(np.eye(4))
    assert_allclose(values, np.ones(4), 1e-15)
    assert_allclose(vectors.conj().T @ vectors, np.eye(4), 1e-12)


def test_pauli_x_spectrum():
    assert_allclose(eig_hermitian(PAULI[1]).values, [-1.0, 1.0], 1e-14)


def test_recovers_prescribed_spectrum(rng):
    q = haar_unitary(rng, 4)
    lam = np.array([0.1, 0.2, 0.3, 0.4])
    values, _ = eig_hermitian(q @ np.diag(lam) @ q.conj().T)
    assert_allclose(values, lam, 1e-10)


@given(seeds, dims)
def test_spectral_reconstruction(seed, dim):
    a = random_hermitian(np.random.default_rng(seed), dim)
    values, vectors = eig_hermitian(a)
    scale = max(1.0, fro_norm(a))
    assert np.all(np.diff(values) >= 0)
    assert fro_norm(vectors @ np.diag(values) @ vectors.conj().T - a) <= 1e-10 * scale
    assert fro_norm(vectors.conj().T @ vectors - np.eye(dim)) <= 1e-12
    residuals = np.linalg.norm(a @ vectors - vectors * values, axis=0)
    assert np.all(residuals <= 1e-10 * fro_norm(a) + 1e-300)


@given(seeds)
def test_eig_is_bitwise_deterministic(seed):
    a = random_hermitian(np.random.default_rng(seed), 6)
    first = eig_hermitian(a)
    second = eig_hermitian(a.copy())
    assert np.array_equal(first.values, second.values)
    assert np.array_equal(first.vectors, second.vectors)


def test_degenerate_cluster_is_orthonormal(rng):
    q = haar_unitary(rng, 4)
    a = q @ np.diag([1.0, 1.0, 1.0, 2.0]) @ q.conj().T
    _, vectors = eig_hermitian(a)
    assert_allclose(vectors.conj().T @ vectors, np.eye(4), 1e-12)


def test_non_finite_input_is_rejected():
    a = np.eye(2)
    a[0, 1] = np.nan
    with pytest.raises(InvalidMatrix):
        eig_hermitian(a)


def test_non_square_input_is_rejected():
    with pytest.raises(DimMismatch):
        eig_hermitian(np.ones((2, 3)))


def test_is_psd():
    assert is_psd(np.eye(4), 1e-9)
    assert not is_psd(np.diag([1.0, -0.5]), 1e-9)
    assert not is_psd(partial_transpose_1(projector(PHI_PLUS)), 1e-9)


def test_is_psd_rejects_negative_tolerance():
    with pytest.raises(ValueError):
        is_psd(np.eye(2), -1.0)


def test_psd_sqrt_examples():
    assert_allclose(psd_sqrt(np.eye(4)), np.eye(4), 1e-14)
    assert_allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), 1e-13)


@given(seeds)
def test_psd_sqrt_squares_back(seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    a = m.conj().T @ m
    b = psd_sqrt(a)
    assert fro_norm(b @ b - a) <= 1e-9 * fro_norm(a)
    assert is_psd(b, 1e-12)


@given(seeds, st.integers(min_value=1, max_value=3))
def test_psd_sqrt_fixes_projectors(seed, rank):
    q = haar_unitary(np.random.default_rng(seed), 4)
    p = q[:, :rank] @ q[:, :rank].conj().T
    assert fro_norm(psd_sqrt(p) - p) <= 1e-10


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPsd):
        psd_sqrt(np.diag([1.0, -1.0]))


def test_rank_eps():
    assert rank_eps(np.eye(4), 1e-9) == 4
    assert rank_eps(projector(PHI_PLUS), 1e-9) == 1
    assert rank_eps(werner_state(0.5), 1e-9) == 4


def test_frobenius_inner_examples():
    assert frobenius_inner(np.eye(4), np.eye(4)) == pytest.approx(4.0)
    basis = pauli_basis()
    gram = np.array([[frobenius_inner(e, f) for f in basis] for e in basis])
    assert_allclose(gram, 4.0 * np.eye(16), 1e-12)


@given(seeds)
def test_frobenius_inner_matches_double_loop(seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, 4)
    b = random_hermitian(rng, 4)
    naive = sum(a[i, j] * b[j, i] for i in range(4) for j in range(4)).real
    assert frobenius_inner(a, b) == pytest.approx(naive, abs=1e-12)
    assert frobenius_inner(a, b) == pytest.approx(frobenius_inner(b, a), abs=1e-12)
    c = random_hermitian(rng, 4)
    assert frobenius_inner(2.0 * a + c, b) == pytest.approx(
        2.0 * frobenius_inner(a, b) + frobenius_inner(c, b), abs=1e-11
    )


def test_frobenius_inner_dimension_mismatch():
    with pytest.raises(DimMismatch):
        frobenius_inner(np.eye(2), np.eye(4))


def test_kron():
    assert_allclose(kron(np.eye(2), np.eye(2)), np.eye(4), 0)
    assert_allclose(kron(PAULI[3], np.eye(2)), np.diag([1, 1, -1, -1]), 0)
    xx = kron(PAULI[1], PAULI[1])
    assert_allclose(xx @ xx, np.eye(4), 0)


def test_solve_examples():
    b = np.array([1.0, -2.0, 3.0])
    assert_allclose(solve_hermitian_linear(np.eye(3), b), b, 1e-15)
    assert_allclose(
        solve_hermitian_linear(np.diag([2.0, 4.0]), np.array([2.0, 4.0])), [1, 1], 1e-15
    )


@given(seeds)
def test_solve_residual(seed):
    rng = np.random.default_rng(seed)
    q = haar_unitary(rng, 5)
    a = q @ np.diag(rng.uniform(0.5, 2.0, size=5) * rng.choice([-1, 1], 5)) @ q.conj().T
    b = rng.normal(size=5) + 1j * rng.normal(size=5)
    x = solve_hermitian_linear(a, b)
    assert np.linalg.norm(a @ x - b) <= 1e-9 * np.linalg.norm(b)


def test_solve_real_system_stays_real():
    x = solve_hermitian_linear(np.array([[2.0, 1.0], [1.0, 3.0]]), np.array([1.0, 2.0]))
    assert np.isrealobj(x)


def test_solve_singular():
    with pytest.raises(SingularSystem):
        solve_hermitian_linear(np.diag([1.0, 0.0]), np.array([1.0, 1.0]))
