import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entdist import states
from entdist.errors import DimensionMismatch, InvalidState, InvalidWeights, NotNormalized, OutOfRange
from entdist.linalg import partial_trace
from entdist.measures import von_neumann_entropy

S = 1 / math.sqrt(2)


def same_up_to_phase(u, v):
    return abs(abs(np.vdot(u, v)) - 1.0) < 1e-12


def test_phi_plus_amplitudes():
    assert np.allclose(states.bell_state("phi+").amplitudes, [S, 0, 0, S])


def test_psi_minus_is_10_minus_01():
    v = states.bell_state("psi-").amplitudes
    # (|10> - |01>)/sqrt2, index 1 is |01>, index 2 is |10>
    assert np.allclose(v, [0, -S, S, 0])
    assert same_up_to_phase(v, np.array([0, S, -S, 0]))


def test_bell_states_orthonormal():
    b = states.bell_basis()
    assert np.allclose(b.conj().T @ b, np.eye(4))


def test_bell_basis_order():
    b = states.bell_basis()
    for k, name in enumerate(["psi+", "psi-", "phi+", "phi-"]):
        assert np.allclose(b[:, k], states.bell_state(name).amplitudes)


def test_unknown_bell_state():
    with pytest.raises(ValueError):
        states.bell_state("chi")


def test_bell_diagonal_examples():
    assert np.allclose(states.bell_diagonal((1, 0, 0, 0)).matrix, states.bell_state("psi+").projector())
    assert np.allclose(states.bell_diagonal((0.25,) * 4).matrix, np.eye(4) / 4)
    spec = states.bell_diagonal((0.7, 0.1, 0.1, 0.1)).eigenvalues()
    assert np.allclose(np.sort(spec), [0.1, 0.1, 0.1, 0.7])


def test_bell_diagonal_spec_validation():
    with pytest.raises(InvalidWeights):
        states.BellDiagonalSpec((0.5, 0.5, 0.1, 0.0))
    with pytest.raises(InvalidWeights):
        states.BellDiagonalSpec((1.2, -0.2, 0.0, 0.0))
    with pytest.raises(InvalidWeights):
        states.BellDiagonalSpec((1.0, 0.0, 0.0))


@given(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4).filter(lambda x: sum(x) > 1e-3))
def test_bell_weights_recover_lambdas(raw):
    lam = np.array(raw) / sum(raw)
    lam[3] = 1.0 - lam[:3].sum()
    if lam[3] < 0:
        return
    assert np.allclose(states.bell_weights(states.bell_diagonal(lam)), lam, atol=1e-12)


def test_werner_examples():
    assert np.allclose(states.werner_state(1.0).matrix, states.bell_state("psi+").projector())
    assert np.allclose(states.werner_state(0.25).matrix, np.eye(4) / 4)
    assert np.allclose(np.sort(states.werner_state(0.625).eigenvalues()), [0.125, 0.125, 0.125, 0.625])
    with pytest.raises(OutOfRange):
        states.werner_state(1.5)


@given(st.floats(0.0, 1.0))
def test_werner_marginals_maximally_mixed(f):
    m = states.werner_state(f).matrix
    assert np.allclose(partial_trace(m, [2, 2], [0]), np.eye(2) / 2)
    assert np.allclose(partial_trace(m, [2, 2], [1]), np.eye(2) / 2)


def test_pure_two_qubit_examples():
    assert np.allclose(states.pure_two_qubit(1, 0).amplitudes, [1, 0, 0, 0])
    assert np.allclose(states.pure_two_qubit(S, S).amplitudes, states.bell_state("phi+").amplitudes)
    psi = states.pure_two_qubit(math.sqrt(0.9), math.sqrt(0.1))
    red = partial_trace(psi.projector(), [2, 2], [0])
    assert np.allclose(np.linalg.eigvalsh(red), [0.1, 0.9])
    with pytest.raises(NotNormalized):
        states.pure_two_qubit(1, 1)


def test_density_validation():
    with pytest.raises(InvalidState):
        states.DensityMatrix(np.diag([1.0, 1.0]))
    with pytest.raises(InvalidState):
        states.DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(InvalidState):
        states.DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(DimensionMismatch):
        states.DensityMatrix(np.eye(4) / 4, (2, 3))
    with pytest.raises(InvalidState):
        states.DensityMatrix(np.ones((2, 3)) / 2)


def test_density_is_immutable():
    rho = states.DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_random_density_contract():
    a = states.random_density([2, 2], 7)
    b = states.random_density([2, 2], 7)
    assert np.array_equal(a.matrix, b.matrix)
    assert np.trace(a.matrix).real == pytest.approx(1.0, abs=1e-10)


def test_random_density_positive_over_many_seeds():
    lows = [states.random_density([2, 2], s).eigenvalues()[0] for s in range(1000)]
    assert min(lows) >= 0.0 or min(lows) > -1e-14


def test_random_product_pure():
    psi = states.random_product_pure([2, 2], 3)
    for keep in ([0], [1]):
        red = partial_trace(psi.projector(), [2, 2], keep)
        assert von_neumann_entropy(states.DensityMatrix(red)) < 1e-9
    q = states.random_product_pure([2], 4)
    assert q.amplitudes.shape == (2,)
    assert np.linalg.norm(q.amplitudes) == pytest.approx(1.0)


def test_product_overlap_with_phi_plus_at_most_half():
    phi = states.bell_state("phi+").amplitudes
    best = max(abs(np.vdot(phi, states.random_product_pure([2, 2], s).amplitudes)) ** 2 for s in range(1000))
    assert best <= 0.5 + 1e-9
