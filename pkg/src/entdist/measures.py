"""Entropic and fidelity-based functionals of density matrices.

All logarithms are natural, so every entropy is in nats.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, IncompletePOVM, NotBipartite
from .linalg import SUPPORT_CUTOFF, matrix_sqrt, partial_trace
from .states import as_density

# overlap of sigma's support with the kernel of rho that makes S(sigma||rho) infinite
KERNEL_LEAK_TOL = 1e-8


def _entropy_of_spectrum(p: np.ndarray) -> float:
    p = p[p > SUPPORT_CUTOFF]
    return float(-np.sum(p * np.log(p)))


def von_neumann_entropy(rho) -> float:
    """-tr(rho ln rho)."""
    w = np.linalg.eigvalsh(as_density(rho).matrix)
    return max(0.0, _entropy_of_spectrum(w))


def marginals(rho) -> tuple[np.ndarray, np.ndarray]:
    rho = as_density(rho)
    if len(rho.dims) != 2:
        raise NotBipartite(f"expected two subsystems, got dims {list(rho.dims)}")
    return partial_trace(rho.matrix, rho.dims, [0]), partial_trace(rho.matrix, rho.dims, [1])


def mutual_information(rho_ab) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB)."""
    rho_ab = as_density(rho_ab)
    ra, rb = marginals(rho_ab)
    return (
        _entropy_of_spectrum(np.linalg.eigvalsh(ra))
        + _entropy_of_spectrum(np.linalg.eigvalsh(rb))
        - _entropy_of_spectrum(np.linalg.eigvalsh(rho_ab.matrix))
    )


def _same_dims(sigma, rho):
    sigma, rho = as_density(sigma), as_density(rho)
    if sigma.dim != rho.dim:
        raise DimensionMismatch(f"states have dimensions {sigma.dim} and {rho.dim}")
    if len(sigma.dims) > 1 and len(rho.dims) > 1 and sigma.dims != rho.dims:
        raise DimensionMismatch(f"subsystem dims differ: {list(sigma.dims)} vs {list(rho.dims)}")
    return sigma, rho


def relative_entropy(sigma, rho) -> float:
    """S(sigma||rho) = tr sigma (ln sigma - ln rho); ``math.inf`` when the support
    of sigma is not contained in that of rho."""
    sigma, rho = _same_dims(sigma, rho)
    ws, vs = np.linalg.eigh(sigma.matrix)
    wr, vr = np.linalg.eigh(rho.matrix)
    # |<s_k|r_l>|^2
    overlap = np.abs(vs.conj().T @ vr) ** 2
    s_supp = ws > SUPPORT_CUTOFF
    r_supp = wr > SUPPORT_CUTOFF
    leak = overlap[np.ix_(s_supp, ~r_supp)]
    if leak.size and np.max(ws[s_supp][:, None] * leak) > KERNEL_LEAK_TOL:
        return math.inf
    ps = ws[s_supp]
    cross = ws[s_supp][:, None] * overlap[np.ix_(s_supp, r_supp)] * np.log(wr[r_supp])[None, :]
    value = float(np.sum(ps * np.log(ps)) - np.sum(cross))
    return max(value, 0.0)


def fidelity(sigma, rho) -> float:
    """Uhlmann fidelity [tr sqrt(sqrt(rho) sigma sqrt(rho))]^2."""
    sigma, rho = _same_dims(sigma, rho)
    sr = matrix_sqrt(rho.matrix)
    mu = np.linalg.eigvalsh(sr @ sigma.matrix @ sr)
    mu = np.where(mu > -1e-10, np.clip(mu, 0.0, None), mu)
    if np.any(mu < 0):
        raise ValueError(f"sqrt(rho) sigma sqrt(rho) has eigenvalue {mu.min():.3g}")
    return float(min(1.0, np.sum(np.sqrt(mu)) ** 2))


def bures_distance(sigma, rho) -> float:
    """2 - 2 sqrt(F)."""
    return max(0.0, 2.0 - 2.0 * math.sqrt(fidelity(sigma, rho)))


def measurement_fidelity_bound(sigma, rho, povm: Sequence) -> float:
    """sum_i sqrt(tr sigma E_i) sqrt(tr rho E_i) for a measurement with
    operators A_i, where E_i = A_i^dagger A_i.

    The square of this overlap is never below the fidelity and reaches it
    for an optimal measurement.
    """
    sigma, rho = _same_dims(sigma, rho)
    ops = [np.asarray(a, dtype=complex) for a in povm]
    if not ops:
        raise IncompletePOVM("empty measurement")
    d = sigma.dim
    if any(a.shape != (d, d) for a in ops):
        raise DimensionMismatch(f"measurement operators must be {d}x{d}")
    effects = [a.conj().T @ a for a in ops]
    if np.max(np.abs(sum(effects) - np.eye(d))) > 1e-9:
        raise IncompletePOVM("sum of A_i^dagger A_i differs from the identity")
    p = np.array([max(0.0, np.trace(sigma.matrix @ e).real) for e in effects])
    q = np.array([max(0.0, np.trace(rho.matrix @ e).real) for e in effects])
    return float(np.sum(np.sqrt(p * q)))


def fuchs_caves_povm(sigma, rho) -> list[np.ndarray]:
    """Projective measurement attaining the fidelity in the bound above.

    Measures in the eigenbasis of rho^{-1/2} (rho^{1/2} sigma rho^{1/2})^{1/2} rho^{-1/2};
    requires rho to be full rank.
    """
    sigma, rho = _same_dims(sigma, rho)
    sr = matrix_sqrt(rho.matrix)
    inv = np.linalg.inv(sr)
    m = inv @ matrix_sqrt(sr @ sigma.matrix @ sr) @ inv
    _, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return [np.outer(v[:, k], v[:, k].conj()) for k in range(v.shape[1])]
