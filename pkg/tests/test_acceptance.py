"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines are
written straight to the terminal even when output capture is on.
"""

import dataclasses
import json
import time
from pathlib import Path

import numpy as np
import pytest

from skoromap import StepPath, lambda_map, reflect, uniform_distance
from skoromap.cli import NAIVE_MAX, bench, streaming_linearity
from skoromap.properties import (
    check_lipschitz_uniform,
    child_seed,
    draw_record,
    run_suite,
    search_lipschitz_tightness,
    tightness_pair,
)
from skoromap.queue_sim import SimConfig, occupancy_density_check, simulate

SEED = 20240601
SWEEP = 10_000
TOL = 1e-9
FIXTURE = Path(__file__).parent / "fixtures" / "lipschitz_near_tight.json"


@pytest.fixture
def verdict(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, detail

    return emit


def _sweep(name, scenarios=SWEEP):
    start = time.perf_counter()
    res = run_suite(name, SEED, scenarios, n_max=512, tol=TOL)
    return res, time.perf_counter() - start


def _failures(res, k=3):
    return "; ".join(f"#{rec['index']}: {rep.summary()}" for rec, rep in res.failures[:k])


def test_criterion_01_overshoot_pair_exact(verdict):
    phi1, phi2, band = tightness_pair()
    lam1, lam2 = lambda_map(phi1, band), lambda_map(phi2, band)
    checks = {
        "Lambda(phi1) = phi1": lam1 == phi1,
        "Lambda(phi2) = 2 then 0": lam2.times.tolist() == [0.0, 0.5] and lam2.values.tolist() == [2.0, 0.0],
        "|phi1 - phi2| = 1": uniform_distance(phi1, phi2, 1.0) == 1.0,
        "|Lambda phi1 - Lambda phi2| = 2": uniform_distance(lam1, lam2, 1.0) == 2.0,
    }
    bad = [k for k, v in checks.items() if not v]
    verdict("1 overshoot pair", not bad, "all four identities exact" if not bad else f"failed: {bad}")


def test_criterion_02_four_way_equivalence(verdict):
    res, secs = _sweep("four_way")
    starts = []
    for i in range(SWEEP):
        rec = draw_record("four_way", child_seed(SEED, i))
        z, a = rec["band"]
        starts.append(z <= rec["specs"][0]["start"] <= a)
    mixed = 0 < sum(starts) < SWEEP
    ok = res.ok and secs < 60 and mixed
    verdict(
        "2 four-way equivalence",
        ok,
        f"{res.passed}/{res.scenarios} agree within {TOL:g} (worst {res.max_deviation:.2e}), "
        f"{sum(starts)} starts inside / {SWEEP - sum(starts)} outside, {secs:.1f}s {_failures(res)}",
    )


def test_criterion_03_fixed_point_oracle(verdict):
    res, secs = _sweep("oracle")
    ok = res.ok and secs < 120
    verdict(
        "3 fixed-point oracle",
        ok,
        f"{res.passed}/{res.scenarios} match both regulators (worst {res.max_deviation:.2e}), "
        f"max iterations {res.metrics.get('max_iterations')}, cap 2n+2 respected, {secs:.1f}s {_failures(res)}",
    )


def test_criterion_04_switch_time_construction(verdict):
    res, secs = _sweep("construction")
    ok = res.ok and secs < 60
    verdict(
        "4 switch-time construction",
        ok,
        f"{res.passed}/{res.scenarios} exact assembly, barrier hits and bounds (worst {res.max_deviation:.2e}), "
        f"{secs:.1f}s {_failures(res)}",
    )


def test_criterion_05_lipschitz(verdict):
    res, secs = _sweep("lipschitz")
    ratio, *_ = search_lipschitz_tightness(seed=SEED, trials=2000)
    fx = json.loads(FIXTURE.read_text())
    p1 = StepPath(fx["psi1"]["times"], fx["psi1"]["values"], fx["psi1"]["horizon"])
    p2 = StepPath(fx["psi2"]["times"], fx["psi2"]["values"], fx["psi2"]["horizon"])
    fixture_rep = check_lipschitz_uniform(p1, p2, fx["band"], TOL)
    fixture_ratio = fixture_rep.metrics["reflect_ratio"]
    ok = res.ok and ratio >= 1.9 and fixture_ratio >= 1.9 and fixture_rep.passed
    verdict(
        "5 Lipschitz sweep",
        ok,
        f"{res.passed}/{res.scenarios} pairs within 2x (sweep max ratio "
        f"{res.metrics.get('max_reflect_ratio', float('nan')):.4f}), search ratio {ratio:.4f}, "
        f"fixture ratio {fixture_ratio:.4f}, {secs:.1f}s {_failures(res)}",
    )


def test_criterion_06_comparison(verdict):
    res, secs = _sweep("comparison")
    ok = res.ok and secs < 180
    verdict(
        "6 comparison inequalities",
        ok,
        f"{res.passed}/{res.scenarios} scenarios pass one-sided (exact and sandwich) and two-sided chains "
        f"(worst {res.max_deviation:.2e}), {secs:.1f}s {_failures(res)}",
    )


def test_criterion_07_structure(verdict):
    res, secs = _sweep("structure")
    verdict(
        "7 structural invariants",
        res.ok,
        f"{res.passed}/{res.scenarios} solutions pass range, complementarity, minimality, initial, mirror "
        f"and 8 restarts each (worst {res.max_deviation:.2e}), {secs:.1f}s {_failures(res)}",
    )


def test_criterion_08_oscillation(verdict):
    res, secs = _sweep("oscillation", 1000)
    verdict(
        "8 oscillation bound",
        res.ok,
        f"{res.passed}/{res.scenarios} paths x 4 windows within 2x "
        f"(max ratio {res.metrics.get('max_max_ratio', float('nan')):.3f}), {secs:.1f}s {_failures(res)}",
    )


def test_criterion_09_performance(verdict):
    n = 10**7
    rng = np.random.default_rng(SEED)
    psi = StepPath(np.arange(n, dtype=float), np.cumsum(rng.standard_normal(n)) * 0.01)
    reflect(StepPath([0.0], [0.0]), (0, 1))
    start = time.perf_counter()
    reflect(psi, (0.0, 1.0))
    big = time.perf_counter() - start
    rows = bench([1 << k for k in range(10, 21)], repeats=5, seed=SEED)
    spread = streaming_linearity(rows)
    naive_sizes = sorted({r[0] for r in rows if r[1] == "naive"})
    ok = big < 5.0 and spread < 3.0 and max(naive_sizes) <= NAIVE_MAX
    verdict(
        "9 performance",
        ok,
        f"10^7 steps in {big:.2f}s, per-element spread {spread:.2f}x over 2^10..2^20, "
        f"naive run up to n={max(naive_sizes)}",
    )


def test_criterion_10_simulation(verdict):
    start = time.perf_counter()
    cfg = SimConfig(seed=SEED, steps=10**7, dt=1e-4, mu=0.0, sigma=1.0, band=(0.0, 1.0), initial=0.5)
    flat = simulate(cfg)
    rep = occupancy_density_check(cfg, 0.05, stats=flat)
    tilted = simulate(dataclasses.replace(cfg, mu=1.0))
    secs = time.perf_counter() - start
    ok = rep.passed and tilted.mean_occupancy > flat.mean_occupancy and secs < 120
    verdict(
        "10 simulation smoke test",
        ok,
        f"sup gap of bin masses {rep.metrics['sup_gap_mass']:.4f} (< 0.05; as densities "
        f"{rep.metrics['sup_gap_density']:.3f}), mean {flat.mean_occupancy:.4f} -> "
        f"{tilted.mean_occupancy:.4f} with drift, {secs:.1f}s",
    )
