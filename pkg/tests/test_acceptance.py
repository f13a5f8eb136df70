"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``.
"""

import math
import subprocess
import sys
import time
from dataclasses import replace

import numpy as np
import pytest
from conftest import default_channels

from sagsense.harness.config import parse_config
from sagsense.harness.experiment import run_experiment, summarize, trial_channels
from sagsense.harness.io import strip_column
from sagsense.harness.oracle import brute_force_oracle
from sagsense.optimizer import OptimizerConfig, Strategy, alternate, transmit_system, update_auxiliary, update_receive, update_transmit
from sagsense.sensing import NoiseModel, build_sinr_parts, surrogate_f2, target_sinr

pytestmark = pytest.mark.acceptance

TRIALS = 100
RANDOM_SCENARIOS = 1000


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"criterion {number}: {detail}"

    return emit


def mean_by_strategy(records, value=None):
    means = summarize(records)
    return {s: m for (v, s), m in means.items() if value is None or v == value}


def random_instance(rng):
    """Default geometry with a fresh seed plus a random feasible (t, u)."""
    ch = default_channels(int(rng.integers(2**32)))
    t = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    t *= math.sqrt(rng.uniform(0.1, 1.0)) / np.linalg.norm(t)
    u = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    return ch, t, u / np.linalg.norm(u)


@pytest.fixture(scope="module")
def default_spec():
    return parse_config("paper_default.cfg")


@pytest.fixture(scope="module")
def altitude_means():
    spec = parse_config("altitude_sweep.cfg")
    assert spec.trials >= TRIALS
    records = run_experiment(spec)
    assert all(r.ok for r in records)
    return {v: mean_by_strategy(records, v) for v in spec.sweep.values}


def test_criterion_01_convergence_speed(default_spec, report):
    spec = default_spec
    start = time.perf_counter()
    iters, worst_drop = [], 0.0
    for trial in range(TRIALS):
        ch, _ = trial_channels(spec, trial, math.nan)
        _, trace = alternate(ch, spec.noise, spec.opt, spec.scenario.target_index)
        s = np.array([trace.initial_sinr, *trace.sinr_per_iteration])
        worst_drop = max(worst_drop, float(np.max((s[:-1] - s[1:]) / s[1:])))
        iters.append(trace.iterations)
    elapsed = time.perf_counter() - start
    med, top = float(np.median(iters)), max(iters)
    ok = med <= 5 and top <= 10 and worst_drop <= 1e-9 and elapsed < 10
    report(1, ok, f"median {med:g} / max {top} iterations, worst relative drop {worst_drop:.1e}, {elapsed:.2f} s")


def test_criterion_02_strategy_ordering(default_spec, report):
    records = run_experiment(default_spec)
    assert all(r.ok for r in records) and default_spec.trials >= TRIALS
    m = mean_by_strategy(records)
    j, r, t, x = m["joint"], m["receive_only"], m["transmit_only"], m["random"]
    ok = j >= r >= t >= x and j - r >= 0 and r - x > 3
    report(2, ok, f"joint {j:.2f} >= receive {r:.2f} >= transmit {t:.2f} >= random {x:.2f} dB; receive-random {r - x:.2f} dB")


def test_criterion_03_bistatic_vs_transceiving(altitude_means, report):
    alts = sorted(altitude_means)
    joint = [altitude_means[a]["joint"] for a in alts]
    mono = [altitude_means[a]["transceiving"] for a in alts]
    above = all(j > x for j, x in zip(joint, mono))
    decreasing = all(np.diff(joint) < 0) and all(np.diff(mono) < 0)
    detail = ", ".join(f"{a:g} km: {j:.2f} vs {x:.2f}" for a, j, x in zip(alts, joint, mono))
    report(3, above and decreasing, f"joint vs transceiving [dB] {detail}")


def test_criterion_04_receive_gap_narrows(altitude_means, report):
    alts = sorted(altitude_means)
    gaps = np.array([altitude_means[a]["joint"] - altitude_means[a]["receive_only"] for a in alts])
    rises = np.diff(gaps)[np.diff(gaps) > 0]
    ok = len(rises) == 0 or (len(rises) == 1 and rises[0] <= 0.1)
    report(4, ok, "gaps [dB] " + ", ".join(f"{g:.3f}" for g in gaps))


def test_criterion_05_power_antenna_interaction(report):
    spec = parse_config("antenna_sweep.cfg")
    powers = (0.1, 1.0, 10.0)
    grid = {}
    for p in powers:
        sub = replace(spec, opt=replace(spec.opt, tx_power=p), strategies=(Strategy.JOINT,))
        records = run_experiment(sub)
        assert all(r.ok for r in records)
        for (m, _), mean in summarize(records).items():
            grid[int(m), p] = mean
    antennas = sorted({m for m, _ in grid})
    mono_m = all(grid[a, p] < grid[b, p] for p in powers for a, b in zip(antennas, antennas[1:]))
    mono_p = all(grid[m, a] < grid[m, b] for m in antennas for a, b in zip(powers, powers[1:]))
    inc_hi = grid[antennas[-1], 10.0] - grid[antennas[0], 10.0]
    inc_lo = grid[antennas[-1], 0.1] - grid[antennas[0], 0.1]
    ok = mono_m and mono_p and inc_hi >= inc_lo
    report(5, ok, f"monotone in M_t {mono_m}, in P_t {mono_p}; 4->32 gain {inc_hi:.2f} dB at 10 W vs {inc_lo:.2f} dB at 0.1 W")


def test_criterion_06_receive_filter_closed_form(report):
    rng = np.random.default_rng(6)
    noise = NoiseModel()
    worst = 1.0
    for _ in range(RANDOM_SCENARIOS):
        ch, t, _ = random_instance(rng)
        parts = build_sinr_parts(ch, t, noise, 0)
        u = update_receive(parts)
        ref = np.linalg.solve(parts.D, ch.cascaded[0] @ t)
        worst = min(worst, abs(np.vdot(ref / np.linalg.norm(ref), u)) / np.linalg.norm(u))
    report(6, worst >= 1 - 1e-8, f"min cosine similarity 1 - {1 - worst:.1e} over {RANDOM_SCENARIOS} scenarios")


def test_criterion_07_kkt_certificate(report):
    rng = np.random.default_rng(7)
    noise = NoiseModel()
    cfg = OptimizerConfig()
    worst_res, worst_pow, active = 0.0, 0.0, 0
    for _ in range(RANDOM_SCENARIOS):
        ch, t0, u = random_instance(rng)
        varpi = update_auxiliary(ch, t0, u, noise, 0)
        t, lam = update_transmit(ch, u, varpi, cfg, 0)
        xi, rhs = transmit_system(ch, u, varpi, 0)
        worst_res = max(worst_res, np.linalg.norm(rhs - xi @ t - lam * t) / np.linalg.norm(rhs))
        if lam > 0:
            active += 1
            p = np.vdot(t, t).real / cfg.tx_power
            if not 1 - 1e-6 <= p <= 1 + 1e-8:
                worst_pow = max(worst_pow, abs(p - 1))
    ok = worst_res <= 1e-8 and worst_pow == 0.0
    report(7, ok, f"max relative stationarity residual {worst_res:.1e}; {active} active constraints all within power band")


def test_criterion_08_brute_force_equivalence(report):
    spec = parse_config("oracle_small.cfg")
    assert (spec.scenario.tx_antennas, spec.scenario.rx_antennas, spec.scenario.num_aircraft) == (2, 2, 2)
    start = time.perf_counter()
    ratios = []
    for trial in range(50):
        ch, _ = trial_channels(spec, trial, math.nan)
        _, trace = alternate(ch, spec.noise, spec.opt, 0)
        ratios.append(trace.final_sinr / brute_force_oracle(ch, spec.noise, spec.opt, 0, 64))
    elapsed = time.perf_counter() - start
    worst = min(ratios)
    report(8, worst >= 0.98 and elapsed < 60, f"min alternating/oracle ratio {worst:.6f} on 50 instances, {elapsed:.1f} s")


def test_criterion_09_quadratic_transform_tightness(report):
    rng = np.random.default_rng(9)
    noise = NoiseModel()
    worst = 0.0
    for _ in range(RANDOM_SCENARIOS):
        ch, t, u = random_instance(rng)
        varpi = update_auxiliary(ch, t, u, noise, 0)
        exact = target_sinr(ch, t, u, noise, 0)
        worst = max(worst, abs(surrogate_f2(ch, t, u, varpi, noise, 0) - exact) / exact)
    report(9, worst <= 1e-10, f"max relative gap {worst:.1e} on {RANDOM_SCENARIOS} (t, u) pairs")


def test_criterion_10_determinism(tmp_path, report):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        cmd = [sys.executable, "-m", "sagsense.harness.cli", "run", "paper_default.cfg", "--seed", "42", "--out", str(out)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs.append(strip_column(out / "paper_default.csv"))
    rows = outs[0].count("\n") - 1
    report(10, outs[0] == outs[1], f"{rows} rows identical modulo wall_time_ms")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
