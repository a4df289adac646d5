"""Correlated local Kraus maps  rho -> sum_i (A_i x B_i) rho (A_i x B_i)^dagger.

Random channels are drawn from the one-way family in which {A_i} is a
complete measurement on one side and every B_i is unitary on the other, so
sum_i A_i^dagger A_i x B_i^dagger B_i = I holds exactly. Two such maps in
opposite directions can be composed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidChannel
from .linalg import random_unitary
from .separable import ProductEnsemble, SeparabilityVerdict, Status, ppt_test, realize
from .states import DensityMatrix, as_density, rng_for

COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True)
class KrausChannel:
    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        pairs = tuple((np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)) for a, b in self.pairs)
        if not pairs:
            raise InvalidChannel("channel needs at least one Kraus pair")
        object.__setattr__(self, "pairs", pairs)

    @property
    def dims(self) -> tuple[int, int]:
        a, b = self.pairs[0]
        return a.shape[1], b.shape[1]

    def operators(self) -> list[np.ndarray]:
        return [np.kron(a, b) for a, b in self.pairs]

    def then(self, other: "KrausChannel") -> "KrausChannel":
        """The map ``other`` applied after ``self``."""
        return KrausChannel(tuple((a2 @ a1, b2 @ b1) for a1, b1 in self.pairs for a2, b2 in other.pairs))


def _check_pair_dims(ch: KrausChannel, dims: Sequence[int]):
    da, db = (int(d) for d in dims)
    for a, b in ch.pairs:
        if a.shape != (da, da) or b.shape != (db, db):
            raise DimensionMismatch(f"Kraus pair of shapes {a.shape}, {b.shape} does not act on dims [{da}, {db}]")


def completeness_residual(ch: KrausChannel) -> float:
    total = sum(np.kron(a.conj().T @ a, b.conj().T @ b) for a, b in ch.pairs)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def validate(ch: KrausChannel, dims: Sequence[int]) -> bool:
    """True iff sum_i A_i^dagger A_i x B_i^dagger B_i equals the identity."""
    _check_pair_dims(ch, dims)
    return completeness_residual(ch) <= COMPLETENESS_TOL


def apply(ch: KrausChannel, rho) -> DensityMatrix:
    rho = as_density(rho)
    if len(rho.dims) != 2:
        raise DimensionMismatch(f"expected a bipartite state, got dims {list(rho.dims)}")
    _check_pair_dims(ch, rho.dims)
    if not validate(ch, rho.dims):
        raise InvalidChannel(f"Kraus pairs are not complete (residual {completeness_residual(ch):.3g})")
    m = rho.matrix
    out = sum(k @ m @ k.conj().T for k in ch.operators())
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(out / np.trace(out).real, rho.dims)


def apply_to_separable(ch: KrausChannel, e: ProductEnsemble, certify: bool = False) -> SeparabilityVerdict:
    """Push a separable state through the channel and test the image."""
    return ppt_test(apply(ch, realize(e)), certify=certify)


def maps_separable_to_separable(ch: KrausChannel, e: ProductEnsemble) -> bool:
    return apply_to_separable(ch, e).status is Status.SEPARABLE


def _random_measurement(d: int, n: int, rng: np.random.Generator) -> list[np.ndarray]:
    """n Kraus operators K_i S^{-1/2} with S = sum K_i^dagger K_i, K_i Ginibre."""
    ks = [rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(n)]
    s = sum(k.conj().T @ k for k in ks)
    w, v = np.linalg.eigh(s)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return [k @ inv_sqrt for k in ks]


def random_one_way(dims: Sequence[int], n_pairs: int, seed, direction: str = "A->B") -> KrausChannel:
    """Measure one side, then apply an outcome-dependent unitary on the other."""
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    da, db = (int(d) for d in dims)
    rng = rng_for(seed)
    if direction == "A->B":
        meas = _random_measurement(da, n_pairs, rng)
        return KrausChannel(tuple((a, random_unitary(db, rng)) for a in meas))
    if direction == "B->A":
        meas = _random_measurement(db, n_pairs, rng)
        return KrausChannel(tuple((random_unitary(da, rng), b) for b in meas))
    raise ValueError(f"direction must be 'A->B' or 'B->A', got {direction!r}")


def random_locc(dims: Sequence[int], n_pairs: int, seed, rounds: int = 1) -> KrausChannel:
    """Random channel of the correlated product form.

    ``rounds=1`` gives a one-way A->B map with ``n_pairs`` Kraus pairs;
    ``rounds=2`` follows it with an independent B->A map, giving up to
    ``n_pairs**2`` pairs.
    """
    if rounds not in (1, 2):
        raise ValueError("rounds must be 1 or 2")
    rng = rng_for(seed)
    ch = random_one_way(dims, n_pairs, rng, "A->B")
    if rounds == 2:
        ch = ch.then(random_one_way(dims, n_pairs, rng, "B->A"))
    return ch


def local_unitary_channel(ua, ub) -> KrausChannel:
    return KrausChannel(((np.asarray(ua), np.asarray(ub)),))


def identity_channel(dims: Sequence[int]) -> KrausChannel:
    da, db = dims
    return KrausChannel(((np.eye(da), np.eye(db)),))


def local_depolarizing_a() -> KrausChannel:
    """Fully depolarizing qubit channel on A: Kraus set (1/2){I, X, Y, Z} paired with I."""
    paulis = [
        np.eye(2),
        np.array([[0, 1], [1, 0]]),
        np.array([[0, -1j], [1j, 0]]),
        np.array([[1, 0], [0, -1]]),
    ]
    return KrausChannel(tuple((0.5 * p, np.eye(2)) for p in paulis))
