"""Separable states as explicit product ensembles, separability tests, and the
closed-form relative entropy of entanglement of Bell-diagonal states."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import xlogy

from .errors import InvalidWeights, NotBipartite, NotTwoQubits
from .linalg import kron, partial_transpose, trace_distance
from .measures import marginals, relative_entropy
from .states import (
    BellDiagonalSpec,
    DensityMatrix,
    PureState,
    as_density,
    bell_state,
    rng_for,
)

WEIGHT_TOL = 1e-10
PPT_TOL = 1e-10
CERTIFICATE_TOL = 1e-7


def singleton_groups(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple((k,) for k in range(n))


@dataclass(frozen=True)
class ProductTerm:
    """One weighted product pure state.

    ``groups`` lists the subsystems each factor lives on, so a factor may
    span several subsystems (e.g. an AB pair times a C state). By default
    each factor covers one subsystem, in order.
    """

    weight: float
    factors: tuple[PureState, ...]
    groups: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.groups is None:
            object.__setattr__(self, "groups", singleton_groups(len(self.factors)))
        else:
            object.__setattr__(self, "groups", tuple(tuple(int(i) for i in g) for g in self.groups))
        if len(self.groups) != len(self.factors):
            raise ValueError("one group per factor required")

    def vector(self, dims: Sequence[int]) -> np.ndarray:
        order = [i for g in self.groups for i in g]
        if sorted(order) != list(range(len(dims))):
            raise ValueError(f"groups {self.groups} do not partition {len(dims)} subsystems")
        for f, g in zip(self.factors, self.groups):
            if f.amplitudes.size != int(np.prod([dims[i] for i in g])):
                raise ValueError(f"factor on subsystems {g} has wrong dimension")
        v = kron(*[f.amplitudes for f in self.factors]).reshape([dims[i] for i in order])
        return v.transpose(np.argsort(order)).reshape(-1)


@dataclass(frozen=True)
class ProductEnsemble:
    """Convex combination of product pure states."""

    terms: tuple[ProductTerm, ...]
    dims: tuple[int, ...]
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if not self.check:
            return
        w = np.array([t.weight for t in self.terms])
        if w.size == 0:
            raise InvalidWeights("ensemble has no terms")
        if np.any(w < 0):
            raise InvalidWeights("negative ensemble weight")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise InvalidWeights(f"weights sum to {w.sum():.15g}")
        cap = int(np.prod(self.dims)) ** 2
        if len(self.terms) > cap:
            raise InvalidWeights(f"{len(self.terms)} terms exceed the cap of {cap}")
        for t in self.terms:
            t.vector(self.dims)

    @property
    def weights(self) -> np.ndarray:
        return np.array([t.weight for t in self.terms])

    def vectors(self) -> np.ndarray:
        """Term vectors as rows."""
        return np.array([t.vector(self.dims) for t in self.terms])

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "terms": [
                {
                    "weight": t.weight,
                    "groups": [list(g) for g in t.groups],
                    "factors": [[[z.real, z.imag] for z in f.amplitudes] for f in t.factors],
                }
                for t in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProductEnsemble":
        dims = tuple(data["dims"])
        terms = []
        for t in data["terms"]:
            groups = tuple(tuple(g) for g in t["groups"])
            factors = tuple(
                PureState(
                    np.array([complex(re, im) for re, im in f]),
                    tuple(dims[i] for i in g),
                )
                for f, g in zip(t["factors"], groups)
            )
            terms.append(ProductTerm(t["weight"], factors, groups))
        return cls(tuple(terms), dims)


def realize(e: ProductEnsemble) -> DensityMatrix:
    """sum_i p_i |v_i><v_i| for the product vectors v_i of the ensemble."""
    v = e.vectors()
    m = (v.T * e.weights) @ v.conj()
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real, e.dims)


def ensemble_from_vectors(weights, factor_lists, dims, groups=None, check=True) -> ProductEnsemble:
    """Build an ensemble from raw weights and per-term factor amplitude lists."""
    dims = tuple(dims)
    w = np.clip(np.asarray(weights, dtype=float), 0.0, None)
    w = w / w.sum()
    terms = []
    for k, (p, facs) in enumerate(zip(w, factor_lists)):
        g = groups[k] if groups is not None else singleton_groups(len(facs))
        states = tuple(
            PureState(np.asarray(f) / np.linalg.norm(f), tuple(dims[i] for i in gi))
            for f, gi in zip(facs, g)
        )
        terms.append(ProductTerm(p, states, g))
    return ProductEnsemble(tuple(terms), dims, check=check)


class Status(enum.Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SeparabilityVerdict:
    status: Status
    witness: float | None = None
    witness_vector: np.ndarray | None = None
    certificate: ProductEnsemble | None = None
    certificate_distance: float | None = None


def ppt_test(rho, certify: bool = True, seed: int = 0) -> SeparabilityVerdict:
    """Partial-transpose separability test.

    Definitive for 2x2 and 2x3 systems. For a separable verdict a product
    ensemble realizing the state is attached unless ``certify`` is False.
    """
    rho = as_density(rho)
    if len(rho.dims) != 2:
        raise NotBipartite(f"expected two subsystems, got dims {list(rho.dims)}")
    pt = partial_transpose(rho.matrix, rho.dims, 1)
    w, v = np.linalg.eigh(0.5 * (pt + pt.conj().T))
    if w[0] < -PPT_TOL:
        return SeparabilityVerdict(Status.ENTANGLED, float(w[0]), v[:, 0])
    if rho.dim > 6:
        return SeparabilityVerdict(Status.INCONCLUSIVE, float(w[0]))
    if not certify:
        return SeparabilityVerdict(Status.SEPARABLE, float(w[0]))
    cert, dist = separable_certificate(rho, seed=seed)
    return SeparabilityVerdict(Status.SEPARABLE, float(w[0]), certificate=cert, certificate_distance=dist)


def separable_certificate(rho, seed: int = 0) -> tuple[ProductEnsemble, float]:
    """Product ensemble reproducing a separable ``rho``.

    Runs the relative-entropy solver to a tight gap, then refines weights and
    factor vectors by nonlinear least squares on the matrix residual.
    """
    from scipy.optimize import least_squares

    from .solver import SolverConfig, ree

    rho = as_density(rho)
    res = ree(rho, SolverConfig(gap_tolerance=1e-7, seed=seed))
    ens = res.minimizer
    dims = rho.dims
    target = rho.matrix
    n_terms = len(ens.terms)
    sizes = list(dims)
    vecs0 = [[f.amplitudes for f in t.factors] for t in ens.terms]

    def unpack(x):
        w = x[:n_terms] ** 2
        z = x[n_terms:].reshape(n_terms, -1)
        facs, pos = [], 0
        for d in sizes:
            f = z[:, pos : pos + d] + 1j * z[:, pos + d : pos + 2 * d]
            pos += 2 * d
            facs.append(f / np.linalg.norm(f, axis=1, keepdims=True))
        return w, facs

    def model(x):
        w, facs = unpack(x)
        vs = facs[0]
        for f in facs[1:]:
            vs = (vs[:, :, None] * f[:, None, :]).reshape(n_terms, -1)
        return (vs.T * w) @ vs.conj()

    iu = np.triu_indices(rho.dim)

    def resid(x):
        r = (model(x) - target)[iu]
        return np.concatenate([r.real, r.imag])

    parts = [np.sqrt(ens.weights)]
    for fl in vecs0:
        for z in fl:
            parts += [z.real, z.imag]
    x0 = np.concatenate(parts)
    best = (trace_distance(realize(ens).matrix, target), ens)
    if best[0] > 1e-12:
        sol = least_squares(resid, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        w, facs = unpack(sol.x)
        if w.sum() > 0:
            cand = ensemble_from_vectors(w, [[f[k] for f in facs] for k in range(n_terms)], dims)
            dist = trace_distance(realize(cand).matrix, target)
            if dist < best[0]:
                best = (dist, cand)
    return best[1], best[0]


def bell_diagonal_separable(spec: BellDiagonalSpec | Sequence[float]) -> bool:
    if not isinstance(spec, BellDiagonalSpec):
        spec = BellDiagonalSpec(tuple(spec))
    return max(spec.lambdas) <= 0.5 + 1e-12


def _polar_unitary(m: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def max_entangled_overlap(
    rho, restarts: int = 50, iterations: int = 200, seed: int = 0, tol: float = 1e-10
) -> float:
    """max over local unitaries of <e|rho|e> with |e> = (U_A x U_B)|phi+>.

    Alternating ascent: each step replaces U_A (then U_B) by the unitary
    polar factor of the gradient of the quadratic form, which never
    decreases it since rho is positive semidefinite.
    """
    rho = as_density(rho)
    if rho.dims != (2, 2):
        raise NotTwoQubits(f"expected dims [2, 2], got {list(rho.dims)}")
    rng = rng_for(seed)
    m = rho.matrix
    e0 = np.eye(2) / np.sqrt(2)

    def value(ua, ub):
        e = (ua @ e0 @ ub.T).reshape(-1)
        return float(np.real(e.conj() @ m @ e))

    def random_u():
        z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        return _polar_unitary(z)

    best = -np.inf
    for _ in range(restarts):
        ua, ub = random_u(), random_u()
        cur = value(ua, ub)
        for _ in range(iterations):
            # gradient w.r.t. conj(U_A) of vec(E)^dag m vec(E), E = U_A C
            c = e0 @ ub.T
            r = (m @ (ua @ c).reshape(-1)).reshape(2, 2)
            ua = _polar_unitary(r @ c.conj().T)
            # E = D U_B^T, gradient w.r.t. conj(U_B) is R^T conj(D)
            dmat = ua @ e0
            r = (m @ (dmat @ ub.T).reshape(-1)).reshape(2, 2)
            ub = _polar_unitary(r.T @ dmat.conj())
            new = value(ua, ub)
            if new - cur < tol:
                cur = max(cur, new)
                break
            cur = new
        best = max(best, cur)
    return best


def _sorted_spec(spec) -> tuple[np.ndarray, int]:
    if not isinstance(spec, BellDiagonalSpec):
        spec = BellDiagonalSpec(tuple(spec))
    lam = np.array(spec.lambdas)
    return lam, int(np.argmax(lam))


def bell_diagonal_ree(spec: BellDiagonalSpec | Sequence[float]) -> tuple[float, BellDiagonalSpec]:
    """Closed-form relative entropy of entanglement of a Bell-diagonal state.

    Returns the value in nats and the weights of the closest separable
    Bell-diagonal state. The largest weight plays the role of lambda_1.
    When it equals 1 the remaining mass 1/2 is split evenly.
    """
    lam, top = _sorted_spec(spec)
    l1 = lam[top]
    if l1 <= 0.5:
        return 0.0, BellDiagonalSpec(tuple(lam))
    value = xlogy(l1, l1) + xlogy(1 - l1, 1 - l1) + math.log(2)
    rest = np.delete(np.arange(4), top)
    p = np.empty(4)
    p[top] = 0.5
    if 1 - l1 > 0:
        p[rest] = lam[rest] / (2 * (1 - l1))
    else:
        p[rest] = 0.5 / 3
    p = p / p.sum()
    return float(value), BellDiagonalSpec(tuple(p))


def classical_correlations(rho_star) -> float:
    """Relative entropy between a state and the product of its marginals."""
    rho_star = as_density(rho_star)
    ra, rb = marginals(rho_star)
    prod = DensityMatrix(np.kron(ra, rb), rho_star.dims, check=False)
    return relative_entropy(rho_star, prod)


def phi_plus_projector() -> np.ndarray:
    return bell_state("phi+").projector()


def random_separable(dims: Sequence[int], n_terms: int, seed) -> ProductEnsemble:
    """Dirichlet-weighted mixture of ``n_terms`` random product pure states."""
    from .states import random_unit_vector

    rng = rng_for(seed)
    w = rng.dirichlet(np.ones(n_terms))
    facs = [[random_unit_vector(d, rng) for d in dims] for _ in range(n_terms)]
    return ensemble_from_vectors(w, facs, dims)
