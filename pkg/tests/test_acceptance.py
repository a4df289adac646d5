"""One test per acceptance criterion; each records a single PASS/FAIL line."""

import math
import statistics
import time

import numpy as np
import pytest

from entdist import checks
from entdist.separable import bell_diagonal_ree, random_separable, realize
from entdist.solver import SolverConfig, bures_entanglement, product_oracle, quantum_classical_split, ree, tripartite_ree
from entdist.states import DensityMatrix, PureState, bell_diagonal, bell_state, bell_weights, random_product_pure, werner_state

from acceptance_log import record
from conftest import random_hermitian
from oracles import grid_product_min

LN2 = math.log(2)


@pytest.fixture(scope="module")
def monotonicity_report():
    start = time.perf_counter()
    rep = checks.monotonicity(500, seed=0)
    return rep, time.perf_counter() - start


def test_criterion_01_bell_states():
    errs, gaps, times = [], [], []
    for name in ("phi+", "phi-", "psi+", "psi-"):
        start = time.perf_counter()
        r = ree(bell_state(name))
        times.append(time.perf_counter() - start)
        errs.append(abs(r.value - LN2))
        gaps.append(r.gap)
    ok = max(errs) <= 1e-3 and max(gaps) < 1e-6 and max(times) < 10
    record(1, "Bell states: E = ln 2 within 1e-3, gap < 1e-6, < 10 s each", ok,
           f"max err {max(errs):.2g}, max gap {max(gaps):.2g}, slowest {max(times):.2f} s")
    assert ok


def test_criterion_02_bell_diagonal_sweep():
    start = time.perf_counter()
    worst, worst_sep = 0.0, 0.0
    for l1 in np.linspace(0.26, 0.99, 40):
        r3 = (1 - l1) / 3
        lam = (l1, r3, r3, 1 - l1 - 2 * r3)
        truth, _ = bell_diagonal_ree(lam)
        val = ree(bell_diagonal(lam)).value
        worst = max(worst, abs(val - truth))
        if l1 <= 0.5:
            worst_sep = max(worst_sep, val)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-3 and worst_sep <= 1e-5 and elapsed < 300
    record(2, "Bell-diagonal sweep, 40 points: |err| <= 1e-3, value <= 1e-5 where lambda1 <= 1/2, < 5 min", ok,
           f"max err {worst:.2g}, max separable value {worst_sep:.2g}, {elapsed:.1f} s")
    assert ok


def test_criterion_03_minimizer_weights():
    w = bell_weights(ree(bell_diagonal((0.7, 0.1, 0.1, 0.1))).realized_minimizer)
    dev = float(np.max(np.abs(w - [0.5, 1 / 6, 1 / 6, 1 / 6])))
    ok = dev <= 1e-2
    record(3, "closest separable state of (0.7,0.1,0.1,0.1) has Bell weights (1/2,1/6,1/6,1/6) within 1e-2", ok,
           f"weights {np.round(w, 5).tolist()}, max dev {dev:.2g}")
    assert ok


def test_criterion_04_werner():
    val = ree(werner_state(0.625)).value
    ok = abs(val - 0.0316) <= 1e-3
    record(4, "Werner F = 0.625: E = 0.0316 nats within 1e-3", ok,
           f"E = {val:.6f} nats = {val / LN2:.4f} ln 2; quoted figure 0.04 ln 2 = {0.04 * LN2:.4f} nats not enforced")
    assert ok


def test_criterion_05a_separable_states_vanish():
    recs = checks.condition_separable_zero(100, seed=0)
    worst = max(r.values["value"] for r in recs)
    ok = all(r.passed for r in recs)
    record("5a", "condition 1, separable half: 100 random separable states give E < 1e-5", ok, f"max E {worst:.2g}")
    assert ok


def test_criterion_05b_entangled_states_positive():
    recs = checks.condition_entangled_positive(100, seed=0)
    bad = [r for r in recs if not r.passed]
    low = min(r.values["value"] for r in recs)
    ok = not bad
    record("5b", "condition 1, entangled half: 100 PPT-entangled states (witness < -0.01) give E > 1e-3", ok,
           f"{len(bad)} of 100 below 1e-3, min E {low:.2g}")
    assert ok


def test_criterion_06_local_unitary_invariance():
    recs = checks.condition_local_unitary(50, seed=0)
    worst = max(r.values["diff"] for r in recs)
    ok = all(r.passed for r in recs)
    record(6, "condition 2: 50 local-unitary pairs, |dE| <= 2e-3", ok, f"max |dE| {worst:.2g}")
    assert ok


def test_criterion_07_monotonicity(monotonicity_report):
    rep, elapsed = monotonicity_report
    rows = [r.values for r in rep.records]
    d_ree = max(v["ree_out"] - v["ree_in"] for v in rows)
    d_bures = max(v["bures_out"] - v["bures_in"] for v in rows)
    d_mi = max(v["mi_increase"] for v in rows)
    ok = len(rows) == 500 and rep.passed and elapsed < 1800
    record(7, "condition 3: 500 LOCC trials, REE slack 2e-3, Bures slack 5e-3, mutual information rises > 0.01 somewhere, < 30 min",
           ok, f"max REE rise {d_ree:.2g}, max Bures rise {d_bures:.2g}, max MI rise {d_mi:.3g}, {elapsed:.0f} s")
    assert ok


def test_criterion_08_pure_state_conjecture():
    recs = checks.pure_conjecture(9)
    worst = max(r.values["diff"] for r in recs)
    ok = all(r.passed for r in recs)
    record(8, "pure-state conjecture (numerical evidence): |E - H(t)| <= 2e-3 for t = 0.1..0.9", ok,
           f"max diff {worst:.2g}")
    assert ok


def test_criterion_09_bures(monotonicity_report):
    bell = bures_entanglement(bell_state("phi+")).value
    sep = [bures_entanglement(realize(random_separable([2, 2], k, k))).value for k in range(1, 6)]
    rep, _ = monotonicity_report
    mono = all(v["bures_out"] <= v["bures_in"] + checks.BURES_MONOTONE_SLACK for v in (r.values for r in rep.records))
    ok = abs(bell - (2 - math.sqrt(2))) <= 1e-3 and max(sep) < 1e-4 and mono
    record(9, "Bures: 2 - sqrt 2 on Phi+ within 1e-3, < 1e-4 on separable states, monotone under criterion 7 channels", ok,
           f"Phi+ {bell:.6f}, max separable {max(sep):.2g}")
    assert ok


def test_criterion_10_oracle_vs_grid():
    worst = 0.0
    for seed in range(20):
        g = random_hermitian(4, np.random.default_rng([10, seed]))
        pi = product_oracle(g, [2, 2])
        val = np.vdot(pi.amplitudes, g @ pi.amplitudes).real
        worst = max(worst, abs(val - grid_product_min(g)))
    ok = worst <= 1e-4
    record(10, "product oracle vs 10^6-point grid search on 20 random objectives within 1e-4", ok, f"max diff {worst:.2g}")
    assert ok


def test_criterion_11_tripartite():
    zero = np.array([1.0, 0.0])
    ab_c = DensityMatrix(np.kron(bell_state("phi+").projector(), np.outer(zero, zero)), (2, 2, 2))
    zeros = [tripartite_ree(ab_c).value]
    zeros += [tripartite_ree(random_product_pure([2, 2, 2], s).density()).value for s in range(3)]
    ghz = np.zeros(8)
    ghz[0] = ghz[7] = 1 / math.sqrt(2)
    ghz_rho = PureState(ghz, (2, 2, 2)).density()
    vals = [tripartite_ree(ghz_rho, SolverConfig(seed=s)).value for s in range(5)]
    mid = statistics.median(vals)
    spread = max(abs(v - mid) for v in vals)
    ok = max(zeros) < 1e-4 and min(vals) > 0 and spread <= 1e-3
    record(11, "tripartite: Phi+ x |0> and product states < 1e-4; GHZ positive, stable within 1e-3 over 5 seeds", ok,
           f"max zero-case {max(zeros):.2g}, GHZ {mid:.6f} nats, spread {spread:.2g}")
    assert ok


def test_criterion_12_split():
    q, c, _ = quantum_classical_split(bell_diagonal((0.7, 0.1, 0.1, 0.1)))
    ok = abs(q - 0.0823) <= 1e-3 and abs(c - 0.1438) <= 1e-3
    record(12, "split of (0.7,0.1,0.1,0.1): (0.0823, 0.1438) within 1e-3", ok, f"quantum {q:.6f}, classical {c:.6f}")
    assert ok
