"""Dense linear algebra for small Hermitian matrices.

Everything here works on plain ``numpy`` complex arrays. Subsystem layout
follows the usual convention: for ``dims = [d0, d1, ...]`` the first factor
is the most significant index of the Kronecker product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, NegativeEigenvalue, NotHermitian, NotSquare

HERMITIAN_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12
JACOBI_TOL = 1e-12


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues in ascending order and eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    asym = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if asym > tol:
        raise NotHermitian(f"matrix is not Hermitian (max asymmetry {asym:.3g})")
    return m


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    try:
        _check_hermitian(m, tol)
    except (NotSquare, NotHermitian):
        return False
    return True


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made real positive
    idx = np.argmax(np.abs(vecs), axis=0)
    lead = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(lead) / lead)


def hermitian_eigen(m) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix (LAPACK ``heevd`` backend).

    Eigenvalues are returned ascending; each eigenvector has its
    largest-magnitude component real and positive.
    """
    m = _check_hermitian(m)
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    return HermitianEigen(w, _fix_phases(v))


def jacobi_eigen(m, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> HermitianEigen:
    """Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Sweeps the upper triangle in row order, annihilating each off-diagonal
    element with a complex Givens rotation, until the off-diagonal Frobenius
    norm drops below ``tol`` (relative to the matrix norm when that exceeds 1).
    Used as an independent cross-check of :func:`hermitian_eigen`.
    """
    a = _check_hermitian(m).copy()
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, np.linalg.norm(a))
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag < 1e-300:
                    continue
                phase = b / mag
                theta = 0.5 * np.arctan2(2.0 * mag, (a[q, q] - a[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                # columns p, q of the rotation
                jp = np.array([c, -s * np.conj(phase)])
                jq = np.array([s * phase, c])
                cols = a[:, [p, q]]
                a[:, p] = cols @ jp
                a[:, q] = cols @ jq
                rows = a[[p, q], :]
                a[p, :] = np.conj(jp) @ rows
                a[q, :] = np.conj(jq) @ rows
                a[p, q] = a[q, p] = 0.0
                vc = v[:, [p, q]]
                v[:, p] = vc @ jp
                v[:, q] = vc @ jq
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return HermitianEigen(w[order], _fix_phases(v[:, order]))


def matrix_function(m, func: Callable[[np.ndarray], np.ndarray], cutoff: float | None = None) -> np.ndarray:
    """Apply ``func`` to the spectrum of Hermitian ``m``.

    With ``cutoff`` set, eigenvalues at or below it are treated as kernel and
    contribute nothing.
    """
    eig = hermitian_eigen(m)
    w, v = eig.eigenvalues, eig.eigenvectors
    if cutoff is not None:
        keep = w > cutoff
        w, v = w[keep], v[:, keep]
    if w.size == 0:
        return np.zeros(np.shape(m), dtype=complex)
    return (v * func(w)) @ v.conj().T


def matrix_log_on_support(m, cutoff: float = SUPPORT_CUTOFF) -> np.ndarray:
    """Natural logarithm of a PSD matrix restricted to its support."""
    return matrix_function(m, np.log, cutoff)


def matrix_sqrt(m) -> np.ndarray:
    eig = hermitian_eigen(m)
    w, v = eig.eigenvalues, eig.eigenvectors
    if w.size and w[0] < -HERMITIAN_TOL:
        raise NegativeEigenvalue(f"eigenvalue {w[0]:.3g} below zero")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def kron(*mats) -> np.ndarray:
    return reduce(np.kron, [np.asarray(x, dtype=complex) for x in mats])


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    if not dims or any(d < 1 for d in dims) or int(np.prod(dims)) != m.shape[0]:
        raise DimensionMismatch(f"dims {dims} do not match matrix of size {m.shape[0]}")
    return dims


def partial_trace(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems stay in their original order.
    """
    m = np.asarray(m, dtype=complex)
    dims = _check_dims(m, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatch(f"keep indices {keep} out of range for {n} subsystems")
    t = m.reshape(dims + dims)
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    t = np.einsum(t, row + col, out)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d, d)


def partial_transpose(m, dims: Sequence[int], subsystem: int = 1) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    dims = _check_dims(m, dims)
    n = len(dims)
    if not 0 <= subsystem < n:
        raise DimensionMismatch(f"subsystem {subsystem} out of range for {n} subsystems")
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[subsystem], axes[n + subsystem] = axes[n + subsystem], axes[subsystem]
    return t.transpose(axes).reshape(m.shape)


def permute_subsystems(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator so factor ``order[k]`` lands in slot ``k``."""
    m = np.asarray(m, dtype=complex)
    dims = _check_dims(m, dims)
    n = len(dims)
    order = list(order)
    t = m.reshape(dims + dims).transpose(order + [n + k for k in order])
    return t.reshape(m.shape)


def permute_vector(v, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v.reshape(list(dims)).transpose(list(order)).reshape(-1)


def trace_distance(a, b) -> float:
    w = np.linalg.eigvalsh(np.asarray(a) - np.asarray(b))
    return 0.5 * float(np.sum(np.abs(w)))


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
