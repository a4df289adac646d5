"""Randomized invariant suites for the entanglement measures.

Each suite returns a :class:`SuiteReport` with one record per trial. Trial
``t`` of a suite run with seed ``s`` draws all of its randomness from
``numpy.random.default_rng([s, suite_tag, t])``, so any failing trial can be
replayed on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linalg import random_unitary
from .locc import apply, random_locc
from .measures import mutual_information
from .separable import Status, ppt_test, random_separable, realize
from .solver import SolverConfig, bures_entanglement, ree
from .states import DensityMatrix, pure_two_qubit, random_density, random_unit_vector

SEPARABLE_ZERO_TOL = 1e-5
ENTANGLED_MIN_VALUE = 1e-3
ENTANGLED_WITNESS = -0.01
LOCAL_UNITARY_TOL = 2e-3
REE_MONOTONE_SLACK = 2e-3
BURES_MONOTONE_SLACK = 5e-3
MI_INCREASE = 0.01
PURE_CONJECTURE_TOL = 2e-3
CHANNELS_PER_STATE = 10

DEFAULT_TRIALS = {
    "axioms": 100,
    "monotonicity": 500,
    "pure-conjecture": 9,
}

_TAGS = {"sep": 1, "ent": 2, "lu": 3, "mono": 4, "pure": 5}


@dataclass
class TrialRecord:
    suite: str
    check: str
    trial: int
    seed: int
    passed: bool
    values: dict = field(default_factory=dict)
    state: np.ndarray | None = field(default=None, repr=False)

    def row(self) -> dict:
        out = {"suite": self.suite, "check": self.check, "trial": self.trial, "seed": self.seed,
               "passed": self.passed}
        out.update(self.values)
        return out


@dataclass
class SuiteReport:
    suite: str
    records: list[TrialRecord] = field(default_factory=list)
    requirements: dict[str, bool] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records) and all(self.requirements.values())

    def failures(self) -> list[TrialRecord]:
        return [r for r in self.records if not r.passed]


def _rng(seed: int, tag: str, trial: int, extra: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed, _TAGS[tag], trial, extra])


def _local_unitary(sigma: DensityMatrix, rng) -> DensityMatrix:
    u = np.kron(random_unitary(sigma.dims[0], rng), random_unitary(sigma.dims[1], rng))
    return DensityMatrix(u @ sigma.matrix @ u.conj().T, sigma.dims, check=False)


def random_ppt_entangled(rng, witness: float = ENTANGLED_WITNESS, max_draws: int = 10_000) -> tuple[DensityMatrix, float]:
    """Draw random two-qubit states until the partial transpose has an
    eigenvalue below ``witness``."""
    for _ in range(max_draws):
        s = random_density([2, 2], rng)
        v = ppt_test(s, certify=False)
        if v.status is Status.ENTANGLED and v.witness < witness:
            return s, v.witness
    raise RuntimeError("no sufficiently entangled state found")


def condition_separable_zero(trials: int, seed: int = 0, config: SolverConfig | None = None) -> list[TrialRecord]:
    out = []
    for t in range(trials):
        rng = _rng(seed, "sep", t)
        n_terms = int(rng.integers(1, 17))
        sigma = realize(random_separable([2, 2], n_terms, rng))
        val = ree(sigma, config).value
        out.append(TrialRecord("axioms", "separable-zero", t, seed, val < SEPARABLE_ZERO_TOL,
                               {"terms": n_terms, "value": val}, sigma.matrix))
    return out


def condition_entangled_positive(trials: int, seed: int = 0, config: SolverConfig | None = None) -> list[TrialRecord]:
    out = []
    for t in range(trials):
        sigma, wit = random_ppt_entangled(_rng(seed, "ent", t))
        val = ree(sigma, config).value
        out.append(TrialRecord("axioms", "entangled-positive", t, seed, val > ENTANGLED_MIN_VALUE,
                               {"witness": wit, "value": val}, sigma.matrix))
    return out


def condition_local_unitary(trials: int, seed: int = 0, config: SolverConfig | None = None) -> list[TrialRecord]:
    out = []
    for t in range(trials):
        rng = _rng(seed, "lu", t)
        sigma = random_density([2, 2], rng)
        e0 = ree(sigma, config).value
        e1 = ree(_local_unitary(sigma, rng), config).value
        diff = abs(e1 - e0)
        out.append(TrialRecord("axioms", "local-unitary", t, seed, diff <= LOCAL_UNITARY_TOL,
                               {"value": e0, "rotated": e1, "diff": diff}, sigma.matrix))
    return out


def harness_state(index: int, rng) -> tuple[str, DensityMatrix]:
    """States for the monotonicity harness, cycling through five families.

    Product and separable states give the mutual-information contrast room
    to grow; noisy pure states supply strongly entangled inputs.
    """
    kind = index % 5
    if kind == 0:
        a = random_density([2], rng).matrix
        b = random_density([2], rng).matrix
        return "product", DensityMatrix(np.kron(a, b), (2, 2))
    if kind == 2:
        psi = random_unit_vector(4, rng)
        p = rng.uniform(0.5, 1.0)
        m = p * np.outer(psi, psi.conj()) + (1 - p) * np.eye(4) / 4
        return "noisy-pure", DensityMatrix(m, (2, 2))
    if kind == 3:
        return "separable", realize(random_separable([2, 2], int(rng.integers(2, 6)), rng))
    return "random", random_density([2, 2], rng)


def monotonicity(trials: int, seed: int = 0, config: SolverConfig | None = None,
                 bures: bool = True, progress: Callable[[int], None] | None = None) -> SuiteReport:
    """E(channel(sigma)) <= E(sigma) for relative entropy and Bures measures,
    plus a search for a mutual-information increase under the same maps."""
    report = SuiteReport("monotonicity")
    n_states = math.ceil(trials / CHANNELS_PER_STATE)
    t = 0
    for i in range(n_states):
        rng = _rng(seed, "mono", i)
        kind, sigma = harness_state(i, rng)
        r0 = ree(sigma, config)
        b0 = bures_entanglement(sigma, config, warm_start=r0.minimizer).value if bures else None
        mi0 = mutual_information(sigma)
        for j in range(CHANNELS_PER_STATE):
            if t >= trials:
                break
            crng = _rng(seed, "mono", i, 1 + j)
            ch = random_locc([2, 2], int(crng.integers(1, 5)), crng, rounds=int(crng.integers(1, 3)))
            out = apply(ch, sigma)
            r1 = ree(out, config)
            values = {"kind": kind, "pairs": len(ch.pairs), "ree_in": r0.value, "ree_out": r1.value}
            ok = r1.value <= r0.value + REE_MONOTONE_SLACK
            if bures:
                b1 = bures_entanglement(out, config, warm_start=r1.minimizer).value
                values.update(bures_in=b0, bures_out=b1)
                ok = ok and b1 <= b0 + BURES_MONOTONE_SLACK
            mi1 = mutual_information(out)
            values.update(mi_in=mi0, mi_out=mi1, mi_increase=mi1 - mi0)
            report.records.append(TrialRecord("monotonicity", "channel", t, seed, ok, values, sigma.matrix))
            t += 1
            if progress:
                progress(t)
    if trials > 0:
        report.requirements["mutual-information-increase-found"] = any(
            r.values["mi_increase"] > MI_INCREASE for r in report.records
        )
    return report


def pure_conjecture(trials: int = 9, seed: int = 0, config: SolverConfig | None = None) -> list[TrialRecord]:
    """REE of sqrt(t)|00> + sqrt(1-t)|11> against the binary entropy of t."""
    out = []
    for k, t in enumerate(np.linspace(0.1, 0.9, 9)[:trials]):
        state = pure_two_qubit(math.sqrt(t), math.sqrt(1 - t))
        val = ree(state, config).value
        h = -t * math.log(t) - (1 - t) * math.log(1 - t)
        out.append(TrialRecord("pure-conjecture", "schmidt", k, seed, abs(val - h) <= PURE_CONJECTURE_TOL,
                               {"t": float(t), "value": val, "entropy": h, "diff": abs(val - h)}))
    return out


def axioms(trials: int = 100, seed: int = 0, config: SolverConfig | None = None) -> SuiteReport:
    report = SuiteReport("axioms")
    report.records += condition_separable_zero(trials, seed, config)
    report.records += condition_entangled_positive(trials, seed, config)
    report.records += condition_local_unitary(max(trials // 2, min(trials, 1)), seed, config)
    return report


def run_suite(name: str, trials: int | None = None, seed: int = 0, config: SolverConfig | None = None) -> SuiteReport:
    if name not in DEFAULT_TRIALS:
        raise ValueError(f"unknown suite {name!r}")
    if trials is None:
        trials = DEFAULT_TRIALS[name]
    if name == "axioms":
        report = axioms(trials, seed, config)
    elif name == "monotonicity":
        report = monotonicity(trials, seed, config)
    elif name == "pure-conjecture":
        report = SuiteReport("pure-conjecture", pure_conjecture(trials, seed, config))
        report.warnings.append("pure-state conjecture: numerical evidence only, not a proven property")
    if trials == 0:
        report.warnings.append(f"{name}: zero trials requested, suite passes vacuously")
    return report
