"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Criteria are deterministic; random direction and operator draws
use fixed seeds.
"""

import json
import math
import time

import numpy as np
import pytest
from oracles import classical_lr_rates, random_density, random_unitary

import qspoof as q
from qspoof import cli

NUMBER_R1 = [0.12, 0.08, 0.8]
NUMBER_R0 = [0.6, 0.4, 0.0]


def _report(k: int, description: str) -> None:
    print(f"\nACCEPTANCE {k:02d} PASS: {description}")


def number_scenario(n_max=5):
    return q.ScenarioConfig(K=2, basis_mode="number", n_max=n_max)


def coherent_scenario(n_max=2, **kw):
    return q.ScenarioConfig(K=4, basis_mode="coherent", n_max=n_max, **kw)


@pytest.fixture(scope="module")
def default_sweep():
    rows, skipped = cli.run_sweep(q.default_scenario())
    assert skipped == []
    return rows


@pytest.fixture(scope="module")
def all_sweep_rows(default_sweep):
    number_rows, skipped = cli.run_sweep(number_scenario())
    assert skipped == []
    return default_sweep + number_rows


def test_c01_classical_oracle_equivalence():
    start = time.perf_counter()
    cfg = number_scenario()
    h = q.build_hypotheses(cfg)
    worst = 0.0
    for n in range(1, 6):
        tau = q.threshold(cfg.threshold, n)
        effect = q.helstrom_effect(h, n, tau)
        rho1n = q.DensityOperator(q.tensor_power(h.rho1, n), check=False)
        rho0n = q.DensityOperator(q.tensor_power(h.rho0, n), check=False)
        p_d, p_f = q.rates(effect, rho1n, rho0n)
        ref_d, ref_f = classical_lr_rates(NUMBER_R1, NUMBER_R0, tau, n)
        worst = max(worst, abs(p_d - ref_d), abs(p_f - ref_f))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-10
    assert elapsed < 10.0
    _report(1, f"classical likelihood-ratio equivalence for n=1..5 (max deviation {worst:.2e}, {elapsed:.2f}s)")


def test_c02_best_response_stationarity():
    start = time.perf_counter()
    worst = 0.0
    for cfg in (number_scenario(n_max=2), coherent_scenario()):
        h = q.build_hypotheses(cfg)
        for n in (1, 2):
            tau = q.threshold(cfg.threshold, n)
            effect = q.helstrom_effect(h, n, tau)
            rho1n = q.DensityOperator(q.tensor_power(h.rho1, n), check=False)
            for lam in (0.5, 1.0, 2.0):
                beta_n = lam**n
                star = q.best_response_rho1(h.rho1, effect, beta_n, n)
                residual = q.verify_stationarity(star, effect, rho1n, beta_n, 20, seed=0)
                worst = max(worst, residual)
                assert residual <= 1e-4
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    _report(2, f"first-order optimality of the best response (max residual {worst:.2e}, {elapsed:.2f}s)")


def test_c03_no_gain_and_price_monotonicity(all_sweep_rows):
    start = time.perf_counter()
    for row in all_sweep_rows:
        assert row.p_d_attacked <= row.p_d_clean + 1e-10
    cfg = q.default_scenario()
    h = q.build_hypotheses(cfg)
    n = 2
    effect = q.helstrom_effect(h, n, q.threshold(cfg.threshold, n))
    previous = -1.0
    for beta_n in (0.1, 0.5, 1.0, 5.0, 25.0):
        star = q.best_response_rho1(h.rho1, effect, beta_n, n)
        rate = float(np.trace(effect.mat @ star.mat).real)
        assert rate >= previous - 1e-10
        previous = rate
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _report(3, f"no-gain on every sweep row and detection monotone over the price grid ({elapsed:.2f}s)")


def test_c04_undistorted_null_hypothesis(all_sweep_rows):
    for row in all_sweep_rows:
        assert abs(row.p_f_attacked - row.p_f_clean) <= 1e-12
    _report(4, "false-alarm rate identical with and without attack in every sweep row")


def test_c05_exponential_decay_and_attack_slowdown():
    start = time.perf_counter()
    cfg = coherent_scenario(n_max=5)
    h = q.build_hypotheses(cfg)
    miss_clean = []
    miss_attacked = []
    for n in range(1, 6):
        tau = q.threshold(cfg.threshold, n)
        rho1n = q.DensityOperator(q.tensor_power(h.rho1, n), check=False)
        rho0n = q.DensityOperator(q.tensor_power(h.rho0, n), check=False)
        effect = q.helstrom_effect_from_states(rho1n, rho0n, tau)
        p_d_clean, _ = q.rates(effect, rho1n, rho0n)
        star = q.best_response_rho1(h.rho1, effect, 0.5**n, n)
        p_d_att, _ = q.rates(effect, star, rho0n)
        miss_clean.append((n, 1.0 - p_d_clean))
        miss_attacked.append((n, 1.0 - p_d_att))
    fit_clean = q.decay_rate_fit(miss_clean)
    fit_attacked = q.decay_rate_fit(miss_attacked)
    elapsed = time.perf_counter() - start
    gap = fit_attacked.slope - fit_clean.slope
    print(
        f"\n  criterion 5 measurements: clean slope {fit_clean.slope:.6f} "
        f"(r^2 {fit_clean.r_squared:.6f}), attacked slope {fit_attacked.slope:.6f}, "
        f"gap {gap:.6f}, {elapsed:.1f}s"
    )
    assert fit_clean.slope < -0.05
    assert gap >= 0.01
    assert elapsed < 300.0
    assert fit_clean.r_squared >= 0.99, (
        f"miss-rate log-linear fit quality r^2 = {fit_clean.r_squared:.6f} < 0.99: "
        "the n=1..5 transient of the moving threshold bends the early decay "
        "(deterministic value, cross-checked against an independent "
        "from-scratch computation)"
    )
    _report(5, f"exponential miss decay (slope {fit_clean.slope:.3f}) with attack slowdown gap {gap:.3f}")


def test_c06_infinite_price_recovers_clean_state():
    for cfg in (number_scenario(n_max=2), coherent_scenario()):
        h = q.build_hypotheses(cfg)
        for n in (1, 2):
            effect = q.helstrom_effect(h, n, q.threshold(cfg.threshold, n))
            star = q.best_response_rho1(h.rho1, effect, 1e6, n)
            clean = q.DensityOperator(q.tensor_power(h.rho1, n), check=False)
            assert q.wasserstein_single(star, clean) <= 1e-4
    _report(6, "best response at price 1e6 is within 1e-4 trace distance of the clean product")


def test_c07_information_theory_suite():
    rng = np.random.default_rng(77)
    for complex_field in (False, True):
        a = random_density(rng, 3, complex_field)
        b = random_density(rng, 2, complex_field)
        ap = random_density(rng, 3, complex_field)
        bp = random_density(rng, 2, complex_field)
        joint = q.relative_entropy(np.kron(a, b), np.kron(ap, bp))
        split = q.relative_entropy(a, ap) + q.relative_entropy(b, bp)
        assert abs(joint - split) <= 1e-9
    for _ in range(25):
        a = random_density(rng, 4, complex_field=bool(rng.integers(2)))
        b = random_density(rng, 4, complex_field=bool(rng.integers(2)))
        assert q.relative_entropy(a, b) >= -1e-12
    two_point = q.relative_entropy(np.diag([1.0, 0.0]), np.diag([0.5, 0.5]))
    assert abs(two_point - math.log(2)) <= 1e-10
    assert math.isinf(q.relative_entropy(np.diag([0.5, 0.5]), np.diag([1.0, 0.0])))
    _report(7, "relative entropy: additivity, Klein inequality, two-point value, support rule")


def test_c08_separability_machinery():
    rng = np.random.default_rng(88)
    u = random_unitary(rng, 3)
    base = u @ np.diag([0.6, 0.3, 0.1]) @ u.T
    base = (base + base.T) / 2
    report = q.separability_report(np.kron(base, base), [3, 3])
    assert report.all_product

    rho = random_density(rng, 3)
    kron_report = q.separability_report(np.kron(rho, rho), [3, 3], reconstruction="trace")
    assert kron_report.all_product
    assert kron_report.reconstruction_distance <= 1e-8

    g = rng.standard_normal((3, 3))
    local = 0.25 * (g + g.T)
    local_sum = np.kron(local, np.eye(3)) + np.kron(np.eye(3), local)
    sum_report = q.separability_report(local_sum, [3, 3], reconstruction="exp")
    assert sum_report.all_product
    assert sum_report.reconstruction_distance <= 1e-8

    swap = np.zeros((4, 4))
    swap[0, 0] = swap[3, 3] = swap[1, 2] = swap[2, 1] = 1.0
    singlet_report = q.separability_report(swap, [2, 2])
    assert not singlet_report.all_product
    _report(8, "product eigenbases recognized, singlet rejected, factorization certified to 1e-8")


def test_c09_sweep_determinism(tmp_path):
    config_path = tmp_path / "default.json"
    config_path.write_text(json.dumps(cli.config_as_dict(q.default_scenario())))
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert cli.cmd_sweep(str(config_path), str(out_a)) == 0
    assert cli.cmd_sweep(str(config_path), str(out_b)) == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    _report(9, "two sweeps of the default config are byte-identical")


def test_c10_derived_point_checks():
    cfg = number_scenario(n_max=1)
    h = q.build_hypotheses(cfg)
    tau = q.threshold(cfg.threshold, 1)
    effect = q.helstrom_effect(h, 1, tau)
    np.testing.assert_allclose(effect.mat, np.diag([0.0, 0.0, 1.0]), atol=1e-12)
    p_d, p_f = q.rates(effect, h.rho1, h.rho0)
    assert abs(p_d - 0.8) <= 1e-12
    assert p_f == 0.0
    star = q.best_response_rho1(h.rho1, effect, 1.0, 1)
    attacked = float(np.trace(effect.mat @ star.mat).real)
    assert abs(attacked - 0.595390) <= 1e-6
    _report(10, "reference point checks: projector, clean rates, attacked detection 0.595390")
