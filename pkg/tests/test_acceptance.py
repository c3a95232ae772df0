"""Acceptance suite: every primary claim at its stated tolerance.

Each test prints one PASS/FAIL line with the measured numbers. Scenario
artifacts are produced once per session through the public runner and read
back from their CSVs.
"""

import csv
import math
import time

import numpy as np
import pytest

import maxcons as mc
from maxcons.exceptions import ConditionViolated
from maxcons.experiments import (
    SCENARIO_DEFAULTS,
    STREAM_GRAPH,
    STREAM_INIT,
    STREAM_S,
)


def check(num, name, ok, detail):
    line = f"ACCEPTANCE [{num}] {'PASS' if ok else 'FAIL'} - {name} ({detail})"
    print(line)
    assert ok, line


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def scenario_root(tmp_path_factory):
    return tmp_path_factory.mktemp("scenarios")


@pytest.fixture(scope="session")
def accuracy_dir(scenario_root):
    out = scenario_root / "accuracy-vs-noise"
    mc.run_scenario("accuracy-vs-noise", None, out)
    return out


@pytest.fixture(scope="session")
def condition_dir(scenario_root):
    out = scenario_root / "condition-vs-c"
    mc.run_scenario("condition-vs-c", None, out)
    return out


@pytest.fixture(scope="session")
def nmi_dir(scenario_root):
    out = scenario_root / "nmi-vs-sigma"
    mc.run_scenario("nmi-vs-sigma", None, out)
    return out


@pytest.fixture(scope="session")
def attack_dir(scenario_root):
    out = scenario_root / "attack-mse"
    mc.run_scenario("attack-mse", None, out)
    return out


@pytest.fixture(scope="session")
def reference_parts():
    seed = mc.REFERENCE_SEED
    g = mc.generate_rgg(10, seed=mc.derive_seed(seed, STREAM_GRAPH))
    s = np.random.default_rng(mc.derive_seed(seed, STREAM_S)).normal(0.0, 1.0, 10)
    return g, s, mc.derive_seed(seed, STREAM_INIT)


@pytest.fixture(scope="session")
def accuracy_traces(reference_parts):
    """The three reference engine runs (c=1, mu_z=1000, t_max=5000), timed."""
    g, s, init_seed = reference_parts
    cfg = SCENARIO_DEFAULTS["accuracy-vs-noise"]
    p = mc.assemble(mc.augment(g), s, cfg["c"], cfg["theta"])
    runs = {}
    for sigma_z in cfg["sigma_levels"]:
        start = time.perf_counter()
        trace = mc.run(p, mc.InitSpec(cfg["mu_z"], sigma_z, seed=init_seed), cfg["t_max"])
        runs[sigma_z] = (trace, time.perf_counter() - start)
    return runs


@pytest.fixture(scope="session")
def condition_traces(reference_parts):
    g, s, init_seed = reference_parts
    cfg = SCENARIO_DEFAULTS["condition-vs-c"]
    init = mc.InitSpec(cfg["mu_z"], cfg["sigma_z"], seed=init_seed)
    return {
        c: mc.run(mc.assemble(mc.augment(g), s, c, cfg["theta"]), init, cfg["t_max"])
        for c in cfg["c_values"]
    }


@pytest.fixture(scope="session")
def attack_trace(reference_parts):
    g, s, init_seed = reference_parts
    cfg = SCENARIO_DEFAULTS["attack-mse"]
    p = mc.assemble(mc.augment(g), s, cfg["c"], cfg["theta"])
    return mc.run(p, mc.InitSpec(cfg["mu_z"], cfg["sigma_z"], seed=init_seed), cfg["t_max"])


def identity_residuals(trace):
    """Worst absolute residual of the two dual/primal increment identities, t >= 1."""
    p = trace.instance
    base = p.graph.base
    owner, nbr, rev = base.directed_owner, base.directed_neighbor, base.reverse_index
    a, c, deg = p.a_directed, p.c, base.degrees
    X, ZR, ZT = trace.x, trace.z_regular, trace.z_to_dummy
    lhs12 = ZR[2:] - ZR[1:-1]
    rhs12 = (
        c * a[rev] * X[2:][:, nbr]
        - 0.5 * c * a[rev] * X[1:-1][:, nbr]
        + 0.5 * c * a * X[1:-1][:, owner]
    )
    res12 = float(np.abs(lhs12 - rhs12).max())
    res13 = 0.0
    for t in range(1, trace.t_max - 1):
        neigh = np.bincount(
            owner, weights=X[t + 1][nbr] - 0.5 * X[t][nbr] - 0.5 * X[t][owner], minlength=base.n
        )
        rhs = (c * neigh + (ZT[t + 1] - ZT[t])) / (c * (deg + 1.0))
        res13 = max(res13, float(np.abs((X[t + 2] - X[t + 1]) - rhs).max()))
    return res12, res13


def test_criterion_1_zero_accuracy_loss(accuracy_traces, reference_parts):
    _, s, _ = reference_parts
    x_star = mc.solve_exact(s)
    errs = {}
    times = {}
    for sigma_z, (trace, seconds) in accuracy_traces.items():
        errs[sigma_z] = mc.squared_error_series(trace.x, x_star)[-1]
        times[sigma_z] = seconds
    worst = max(errs.values())
    slowest = max(times.values())
    check(
        1,
        "zero accuracy loss at t_max=5000 for every sigma_z",
        worst <= 1e-10 and slowest < 5.0,
        f"worst final squared error {worst:.2e} <= 1e-10, slowest run {slowest:.2f}s < 5s",
    )


def test_criterion_2_privacy_accuracy_tradeoff(accuracy_dir):
    rows = read_csv(accuracy_dir / "mc_errors.csv")
    means = {
        (r["method"], float(r["sigma"])): float(r["mean_final_squared_error"]) for r in rows
    }
    n_seeds = {int(r["n_seeds"]) for r in rows}
    sigmas = sorted({k[1] for k in means})
    floor_ok = all(means[(m, 1.0)] > 1e-2 for m in ("noisy-broadcast", "dp-admm"))
    monotone_ok = all(
        means[(m, a)] <= means[(m, b)]
        for m in ("noisy-broadcast", "dp-admm")
        for a, b in zip(sigmas, sigmas[1:])
    )
    check(
        2,
        "baselines trade accuracy for privacy",
        floor_ok and monotone_ok and n_seeds == {100},
        f"mean final errors over 100 seeds at sigma=1: "
        f"noisy-broadcast {means[('noisy-broadcast', 1.0)]:.2e}, "
        f"dp-admm {means[('dp-admm', 1.0)]:.2e} (> 1e-2), monotone in sigma: {monotone_ok}",
    )


def test_criterion_3_condition_behavior(condition_traces):
    c_values = sorted(condition_traces)
    max_violates = {}
    flags_exact = True
    largest_clean = None
    for c, trace in condition_traces.items():
        report = mc.check_condition(trace)
        flags_exact &= np.array_equal(report.lhs > 0.0, trace.exchange)
        flags_exact &= np.array_equal(report.holds_all_t, ~trace.exchange.any(axis=0))
        imax = report.argmax_nodes[0]
        max_violates[c] = imax in report.violating_nodes
        if c == c_values[-1]:
            largest_clean = all(
                report.holds_all_t[i] for i in range(trace.n) if i != imax
            )
    ok = all(max_violates.values()) and largest_clean and flags_exact
    check(
        3,
        "max node violates for every c; all others hold at the largest c",
        ok,
        f"max violates: {max_violates}, non-max all hold at c={c_values[-1]}: "
        f"{largest_clean}, flags bitwise-equal: {flags_exact}",
    )


def test_criterion_4_trace_identities(accuracy_traces, condition_traces, attack_trace):
    worst12 = worst13 = 0.0
    traces = [t for t, _ in accuracy_traces.values()]
    traces += list(condition_traces.values()) + [attack_trace]
    for trace in traces:
        r12, r13 = identity_residuals(trace)
        worst12, worst13 = max(worst12, r12), max(worst13, r13)
    check(
        4,
        "dual/primal increment identities hold on every scenario trace",
        worst12 <= 1e-9 and worst13 <= 1e-9,
        f"worst residuals over {len(traces)} traces: {worst12:.2e}, {worst13:.2e} <= 1e-9",
    )


def test_criterion_5_reconstruction_oracle(attack_trace):
    trace = attack_trace
    p = trace.instance
    n = trace.n
    imax = int(np.argmax(p.s))
    report = mc.check_condition(trace)
    worst_leak = worst_regen = 0.0
    recovered = 0
    max_raised = False
    for i in range(n):
        cfg = mc.AdversaryConfig(corrupt=frozenset(set(range(n)) - {i}), eavesdropping=True)
        obs = mc.collect(trace, cfg)
        if i == imax:
            with pytest.raises(ConditionViolated):
                mc.reconstruct(obs, p.graph, p.c, p.theta, audit_trace=trace)
            max_raised = True
            continue
        assert report.holds_all_t[i]  # every non-max node satisfied the condition
        result = mc.reconstruct(obs, p.graph, p.c, p.theta, audit_trace=trace)
        recovered += 1
        worst_leak = max(worst_leak, float(result.leakage_abs_error[i]))
        worst_regen = max(worst_regen, result.max_regen_error)
    ok = max_raised and recovered == n - 1 and worst_leak <= 1e-9 and worst_regen <= 1e-9
    check(
        5,
        "leakage recovered for honest non-max nodes; max node detected",
        ok,
        f"{recovered}/{n - 1} leakages recovered, worst |L_rec - L_true| {worst_leak:.2e}, "
        f"worst broadcast regeneration error {worst_regen:.2e} <= 1e-9, "
        f"ConditionViolated raised for the max node: {max_raised}",
    )


def test_criterion_6_mi_estimator_accuracy(nmi_dir):
    rng = np.random.default_rng(11)
    c, sigma_s, samples = 1.0, 1.0, 5000
    worst_diff = 0.0
    for sigma_z in (0.1, 1.0, 10.0, 100.0):
        s = rng.normal(0.0, sigma_s, samples)
        z = rng.normal(0.0, sigma_z, samples)
        est = mc.estimate_mi_ksg(s, z + 0.5 * c * s, k=3)
        analytic = 0.5 * math.log(1 + (c / 2) ** 2 * sigma_s**2 / sigma_z**2)
        worst_diff = max(worst_diff, abs(est.value_nats - analytic))
    rows = read_csv(nmi_dir / "mi_curve.csv")
    nmi = [float(r["nmi_clamped"]) for r in rows]
    sigma = [float(r["sigma_z"]) for r in rows]
    monotone = all(b <= a + 0.02 for a, b in zip(nmi, nmi[1:]))
    tail = nmi[sigma.index(1000.0)]
    ok = worst_diff <= 0.05 and monotone and tail < 0.01
    check(
        6,
        "KSG matches analytic Gaussian MI; NMI curve decays",
        ok,
        f"worst |KSG - analytic| {worst_diff:.3f} <= 0.05 nats, curve monotone within "
        f"0.02: {monotone}, NMI at sigma_z=1e3: {tail:.4f} < 0.01",
    )


def test_criterion_7_attack_asymptotics(attack_dir):
    rows = read_csv(attack_dir / "attack_mse_curve.csv")
    cfg = SCENARIO_DEFAULTS["attack-mse"]
    sigma_s = cfg["sigma_s"]
    worst_rel = 0.0
    asymptote = None
    for r in rows:
        closed, emp = float(r["mse_closed_form"]), float(r["mse_empirical"])
        worst_rel = max(worst_rel, abs(emp - closed) / closed)
        if float(r["sigma_z"]) == 1000.0 * cfg["c"]:
            asymptote = emp
    draws_ok = {int(r["n_draws"]) for r in rows} == {100_000}
    ok = worst_rel <= 0.02 and asymptote is not None and asymptote >= 0.98 * sigma_s**2 and draws_ok
    check(
        7,
        "attack MSE matches closed form and saturates at the prior",
        ok,
        f"worst relative gap {worst_rel:.4f} <= 0.02 over {len(rows)} grid points, "
        f"MSE at sigma_z=1000c: {asymptote:.4f} >= {0.98 * sigma_s**2:.2f}",
    )


def test_criterion_8_manifest_determinism(condition_dir, attack_dir, tmp_path):
    from maxcons.experiments import load_config

    identical = True
    compared = 0
    for first in (condition_dir, attack_dir):
        name, config = load_config(first / "manifest.json")
        second = tmp_path / f"rerun-{name}"
        mc.run_scenario(name, config, second)
        for csv_path in sorted(first.glob("*.csv")):
            compared += 1
            identical &= csv_path.read_bytes() == (second / csv_path.name).read_bytes()
    check(
        8,
        "rerun from manifest reproduces every CSV byte-for-byte",
        identical and compared >= 4,
        f"{compared} CSV files compared across 2 scenarios, all identical: {identical}",
    )
