import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entdist import linalg
from entdist.errors import DimensionMismatch, NegativeEigenvalue, NotHermitian, NotSquare
from entdist.states import bell_state, random_density

from conftest import random_hermitian

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def test_eigen_identity():
    e = linalg.hermitian_eigen(np.eye(2))
    assert np.allclose(e.eigenvalues, [1, 1])


def test_eigen_diagonal_keeps_standard_basis():
    e = linalg.hermitian_eigen(np.diag([0.25, 0.75]))
    assert np.allclose(e.eigenvalues, [0.25, 0.75])
    assert np.allclose(e.eigenvectors, np.eye(2))


def test_eigen_pauli_x():
    # characteristic polynomial x^2 - 1
    e = linalg.hermitian_eigen(PAULI_X)
    assert np.allclose(e.eigenvalues, [-1, 1])
    assert np.allclose(e.reconstruct(), PAULI_X, atol=1e-12)


def test_phase_convention_largest_component_real_positive(rng):
    e = linalg.hermitian_eigen(random_hermitian(5, rng))
    for k in range(5):
        v = e.eigenvectors[:, k]
        lead = v[np.argmax(np.abs(v))]
        assert abs(lead.imag) < 1e-12 and lead.real > 0


def test_eigen_rejects_bad_input():
    with pytest.raises(NotSquare):
        linalg.hermitian_eigen(np.ones((2, 3)))
    with pytest.raises(NotHermitian):
        linalg.hermitian_eigen(np.array([[0, 1], [0, 0]]))


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_eigen_reconstructs_random_hermitian(d, seed):
    m = random_hermitian(d, np.random.default_rng(seed))
    for solver in (linalg.hermitian_eigen, linalg.jacobi_eigen):
        e = solver(m)
        assert np.linalg.norm(e.reconstruct() - m) < 1e-10
        assert np.linalg.norm(e.eigenvectors.conj().T @ e.eigenvectors - np.eye(d)) < 1e-10
        assert np.all(np.diff(e.eigenvalues) >= 0)


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_jacobi_agrees_with_lapack(d, seed):
    m = random_hermitian(d, np.random.default_rng(seed))
    assert np.allclose(linalg.jacobi_eigen(m).eigenvalues, linalg.hermitian_eigen(m).eigenvalues, atol=1e-11)


def test_jacobi_handles_degenerate_spectrum():
    u = linalg.random_unitary(4, np.random.default_rng(3))
    m = u @ np.diag([1.0, 1.0, 2.0, 2.0]) @ u.conj().T
    e = linalg.jacobi_eigen(m)
    assert np.allclose(e.eigenvalues, [1, 1, 2, 2], atol=1e-12)
    assert np.linalg.norm(e.reconstruct() - m) < 1e-10


def test_log_examples():
    assert np.allclose(linalg.matrix_log_on_support(np.eye(3)), 0)
    assert np.allclose(linalg.matrix_log_on_support(np.diag([math.e, math.e**2])), np.diag([1, 2]))
    assert np.allclose(linalg.matrix_log_on_support(np.eye(2) / 2), -math.log(2) * np.eye(2))


def test_log_is_zero_on_kernel():
    out = linalg.matrix_log_on_support(np.diag([0.5, 0.5, 0.0]))
    assert np.allclose(out, np.diag([-math.log(2), -math.log(2), 0.0]))


@given(st.integers(0, 2**32 - 1))
def test_exp_log_round_trip(seed):
    rho = random_density([2, 2], seed).matrix
    log_rho = linalg.matrix_log_on_support(rho)
    back = linalg.matrix_function(log_rho, np.exp)
    assert np.linalg.norm(back - rho) < 1e-9


def test_sqrt_examples():
    assert np.allclose(linalg.matrix_sqrt(np.eye(2)), np.eye(2))
    assert np.allclose(linalg.matrix_sqrt(np.diag([4.0, 9.0])), np.diag([2, 3]))
    p = bell_state("phi+").projector()
    assert np.allclose(linalg.matrix_sqrt(p), p, atol=1e-8)
    with pytest.raises(NegativeEigenvalue):
        linalg.matrix_sqrt(np.diag([1.0, -0.1]))


def test_kron_examples():
    assert np.allclose(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(linalg.kron(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))
    proj = linalg.kron(np.diag([1, 0]), np.diag([0, 1]))
    e01 = np.zeros(4)
    e01[1] = 1
    assert np.allclose(proj, np.outer(e01, e01))


def test_partial_trace_examples(rng):
    a = random_density([2], rng).matrix
    b = random_density([3], rng).matrix
    assert np.allclose(linalg.partial_trace(np.kron(a, b), [2, 3], [0]), a)
    assert np.allclose(linalg.partial_trace(np.kron(a, b), [2, 3], [1]), b)
    # expanding the four terms of the Bell projector leaves I/2
    assert np.allclose(linalg.partial_trace(bell_state("phi+").projector(), [2, 2], [0]), np.eye(2) / 2)
    assert np.allclose(linalg.partial_trace(np.eye(4) / 4, [2, 2], [1]), np.eye(2) / 2)


def test_partial_trace_linear(rng):
    x = random_density([2, 2], rng).matrix
    y = random_density([2, 2], rng).matrix
    lhs = linalg.partial_trace(0.3 * x + 0.7 * y, [2, 2], [0])
    rhs = 0.3 * linalg.partial_trace(x, [2, 2], [0]) + 0.7 * linalg.partial_trace(y, [2, 2], [0])
    assert np.allclose(lhs, rhs)


def test_partial_trace_tripartite_keeps_order(rng):
    a, b, c = (random_density([2], rng).matrix for _ in range(3))
    m = linalg.kron(a, b, c)
    assert np.allclose(linalg.partial_trace(m, [2, 2, 2], [0, 2]), np.kron(a, c))


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        linalg.partial_trace(np.eye(4), [2, 3], [0])


def test_partial_transpose_examples(rng):
    a = random_density([2], rng).matrix
    b = random_density([2], rng).matrix
    assert np.allclose(linalg.partial_transpose(np.kron(a, b), [2, 2], 1), np.kron(a, b.T))
    m = random_density([2, 3], rng).matrix
    assert np.allclose(linalg.partial_transpose(linalg.partial_transpose(m, [2, 3]), [2, 3]), m)
    pt = linalg.partial_transpose(bell_state("phi+").projector(), [2, 2])
    assert np.linalg.eigvalsh(pt)[0] == pytest.approx(-0.5, abs=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_partial_transpose_preserves_hermiticity_and_trace(seed):
    m = random_density([3, 2], seed).matrix
    pt = linalg.partial_transpose(m, [3, 2], 0)
    assert np.allclose(pt, pt.conj().T)
    assert np.trace(pt) == pytest.approx(1.0)


def test_permute_subsystems(rng):
    a = random_density([2], rng).matrix
    b = random_density([3], rng).matrix
    assert np.allclose(linalg.permute_subsystems(np.kron(a, b), [2, 3], [1, 0]), np.kron(b, a))


def test_random_unitary_is_unitary(rng):
    u = linalg.random_unitary(4, rng)
    assert np.allclose(u.conj().T @ u, np.eye(4))
