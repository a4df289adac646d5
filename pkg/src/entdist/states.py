"""State containers and constructors: Bell basis, Bell-diagonal and Werner
states, Schmidt-form pure states, and seeded random states."""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidState, InvalidWeights, NotNormalized, OutOfRange
from .linalg import HERMITIAN_TOL, kron

STATE_TOL = 1e-10

BELL_LABELS = ("psi+", "psi-", "phi+", "phi-")


def _dims_tuple(dims, size: int) -> tuple[int, ...]:
    if dims is None:
        return (size,)
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims) or int(np.prod(dims)) != size:
        raise DimensionMismatch(f"dims {list(dims)} do not match dimension {size}")
    return dims


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive semidefinite operator with a subsystem signature."""

    matrix: np.ndarray
    dims: tuple[int, ...] = field(default=None)
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidState(f"density matrix must be square, got shape {m.shape}")
        dims = _dims_tuple(self.dims, m.shape[0])
        if check:
            asym = np.max(np.abs(m - m.conj().T))
            if asym > HERMITIAN_TOL:
                raise InvalidState(f"not Hermitian (asymmetry {asym:.3g})")
            tr = np.trace(m).real
            if abs(tr - 1.0) > STATE_TOL:
                raise InvalidState(f"trace is {tr:.12g}, expected 1")
            lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
            if lo < -STATE_TOL:
                raise InvalidState(f"negative eigenvalue {lo:.3g}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class PureState:
    """Unit vector together with its subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...] = field(default=None)
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        dims = _dims_tuple(self.dims, v.size)
        if check and abs(np.linalg.norm(v) - 1.0) > STATE_TOL:
            raise NotNormalized(f"state norm is {np.linalg.norm(v):.12g}")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "dims", dims)

    def projector(self) -> np.ndarray:
        v = self.amplitudes
        return np.outer(v, v.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector(), self.dims, check=False)


@dataclass(frozen=True)
class BellDiagonalSpec:
    """Weights on the Bell basis in the order (psi+, psi-, phi+, phi-)."""

    lambdas: tuple[float, float, float, float]

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lambdas)
        if len(lam) != 4:
            raise InvalidWeights(f"need four weights, got {len(lam)}")
        if any(x < -1e-12 or x > 1 + 1e-12 for x in lam):
            raise InvalidWeights(f"weights must lie in [0, 1]: {lam}")
        if abs(sum(lam) - 1.0) > 1e-12:
            raise InvalidWeights(f"weights sum to {sum(lam):.15g}, expected 1")
        object.__setattr__(self, "lambdas", lam)


def as_density(state, dims=None) -> DensityMatrix:
    """Coerce a DensityMatrix, PureState or raw array into a DensityMatrix."""
    if isinstance(state, DensityMatrix):
        if dims is not None and tuple(dims) != state.dims:
            return DensityMatrix(state.matrix, dims, check=False)
        return state
    if isinstance(state, PureState):
        return DensityMatrix(state.projector(), dims if dims is not None else state.dims, check=False)
    m = np.asarray(state, dtype=complex)
    if m.ndim == 1:
        m = np.outer(m, m.conj())
    return DensityMatrix(m, dims)


def bell_state(which: str) -> PureState:
    """One of the four Bell states, named ``phi+``, ``phi-``, ``psi+``, ``psi-``.

    ``phi±`` = (|00> ± |11>)/sqrt2 and ``psi±`` = (|10> ± |01>)/sqrt2.
    """
    key = which.lower().replace("ψ", "psi").replace("φ", "phi").replace("Φ", "phi").replace("Ψ", "psi")
    s = 1 / np.sqrt(2)
    vecs = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, -s, s, 0],
    }
    if key not in vecs:
        raise ValueError(f"unknown Bell state {which!r}; expected one of {sorted(vecs)}")
    return PureState(np.array(vecs[key], dtype=complex), (2, 2))


def bell_basis() -> np.ndarray:
    """Columns are the Bell states in the order (psi+, psi-, phi+, phi-)."""
    return np.column_stack([bell_state(k).amplitudes for k in BELL_LABELS])


def bell_diagonal(spec: BellDiagonalSpec | Sequence[float]) -> DensityMatrix:
    if not isinstance(spec, BellDiagonalSpec):
        spec = BellDiagonalSpec(tuple(spec))
    b = bell_basis()
    lam = np.clip(np.array(spec.lambdas), 0.0, None)
    return DensityMatrix((b * lam) @ b.conj().T, (2, 2))


def bell_weights(rho) -> np.ndarray:
    """Diagonal of a two-qubit state in the Bell basis (psi+, psi-, phi+, phi-)."""
    m = np.asarray(as_density(rho).matrix)
    b = bell_basis()
    return np.real(np.einsum("ki,kl,li->i", b.conj(), m, b))


def werner_state(fidelity: float) -> DensityMatrix:
    """Bell-diagonal state with weight ``fidelity`` on psi+ and the rest spread evenly."""
    f = float(fidelity)
    if not 0.0 <= f <= 1.0:
        raise OutOfRange(f"fidelity {f} outside [0, 1]")
    r = (1.0 - f) / 3.0
    return bell_diagonal(BellDiagonalSpec((f, r, r, 1.0 - f - 2 * r)))


def pure_two_qubit(alpha: complex, beta: complex) -> PureState:
    """alpha|00> + beta|11>."""
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > STATE_TOL:
        raise NotNormalized(f"|alpha|^2 + |beta|^2 = {norm:.12g}")
    return PureState(np.array([alpha, 0, 0, beta], dtype=complex), (2, 2))


def rng_for(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_density(dims: Sequence[int], seed) -> DensityMatrix:
    """G G^dagger / tr with G an i.i.d. complex Gaussian square matrix."""
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionMismatch("dims must be nonempty")
    rng = rng_for(seed)
    d = int(np.prod(dims))
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T) / np.trace(m).real
    return DensityMatrix(m, dims)


def random_unit_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_product_pure(dims: Sequence[int], seed) -> PureState:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionMismatch("dims must be nonempty")
    rng = rng_for(seed)
    v = kron(*[random_unit_vector(d, rng) for d in dims]).reshape(-1)
    return PureState(v / np.linalg.norm(v), dims)
