"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import io
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import CONFIGS, ref_params, phi_oracle  # noqa: E402

from psea.chain import BatteryModel, build_transition_matrix, stationary_distribution  # noqa: E402
from psea.cli import cmd_compare, cmd_sweep  # noqa: E402
from psea.config import parse_config  # noqa: E402
from psea.gammasum import GammaPair, harvest_pair, sum_gamma_cdf  # noqa: E402
from psea.optimize import lambda_grid, optimize_ps_ea  # noqa: E402
from psea.sim import SimConfig, empirical_stationary, run_simulation  # noqa: E402
from psea.specfun import gamma_cdf  # noqa: E402
from psea.throughput import phi, throughput_ps_ea  # noqa: E402

pytestmark = pytest.mark.slow

REPORT = []

POWERS_C1 = [1.0, 2.0, 3.0, 5.0, 10.0]
FIXTURE_BATTERY = BatteryModel(0.2, 200, 40)


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    REPORT.append(line)
    print(line)
    return ok


def _tv(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


@pytest.fixture(scope="module")
def fixture_runs():
    """Analytical and 1e6-block discrete simulation at each power point."""
    runs = []
    for k, p in enumerate(POWERS_C1):
        params = ref_params(p=p)
        t0 = time.perf_counter()
        ref = throughput_ps_ea(params, FIXTURE_BATTERY)
        sim = run_simulation(SimConfig(1_000_000, seed=100 + k), params, FIXTURE_BATTERY)
        runs.append((p, ref, sim, time.perf_counter() - t0))
    return runs


def test_criterion_1_analysis_matches_simulation(fixture_runs):
    parts, ok = [], True
    for p, ref, sim, secs in fixture_runs:
        z = (sim.psi_hat - ref.psi) / sim.std_err
        ok &= abs(z) < 3 and secs < 120
        parts.append(f"P={p:g}W z={z:+.2f} t={secs:.1f}s")
    assert record(1, ok, "; ".join(parts))


def test_criterion_2_converges_in_levels():
    parts, ok = [], True
    for k, p in enumerate([1.0, 3.0, 8.0]):
        params = ref_params(p=p)
        gaps = []
        for levels in (10, 50, 200):
            battery = BatteryModel(0.2, levels, levels // 5)
            truth = run_simulation(SimConfig(1_000_000, 200 + k, "continuous"), params, battery)
            gaps.append(abs(throughput_ps_ea(params, battery).psi - truth.psi_hat))
        ok &= gaps[0] >= gaps[1] >= gaps[2]
        parts.append(f"P={p:g}W gaps(L=10,50,200)=" + ",".join(f"{g:.4f}" for g in gaps))
    assert record(2, ok, "; ".join(parts))


def test_criterion_3_phi_closed_form():
    rng = np.random.default_rng(31337)
    worst, checked = 0.0, 0
    for _ in range(200):
        case = (10 ** rng.uniform(-1, 3), 10 ** rng.uniform(-1, 2), 10 ** rng.uniform(-1, 2),
                10 ** rng.uniform(-1, 1), int(rng.integers(1, 5)), 10 ** rng.uniform(-0.5, 0.5),
                int(rng.integers(1, 5)), 10 ** rng.uniform(-0.5, 0.5))
        ref = phi_oracle(*case)
        if ref > 1e-10:
            checked += 1
            worst = max(worst, abs(phi(*case) - ref) / ref)
    near_zero = min(phi(10, 1, 1, 1e-12, ma, 1.0, mb, 1.0) for ma in (1, 2, 4) for mb in (1, 2, 4))
    decays = True
    for ma, mb in [(1, 1), (2, 2), (3, 1)]:
        vals = [phi(20, 2, 3, v, ma, 1.0, mb, 0.5) for v in np.geomspace(1e-3, 1e3, 200)]
        decays &= all(b <= a for a, b in zip(vals, vals[1:]))
    ok = worst < 1e-6 and near_zero > 1 - 1e-6 and decays
    assert record(3, ok, f"max rel err {worst:.2e} over {checked} cases; phi(v=1e-12) >= {near_zero:.12f}; "
                         f"monotone in v: {decays}")


def test_criterion_4_chain(fixture_runs):
    params = ref_params(p=10.0)
    z = build_transition_matrix(FIXTURE_BATTERY, harvest_pair(params), params.lam)
    delta, levels = FIXTURE_BATTERY.delta, FIXTURE_BATTERY.levels
    row_err = float(np.abs(z.sum(axis=1) - 1).max())
    support = True
    for i in range(levels + 1):
        nz = np.nonzero(z[i])[0]
        lo, hi = (i, levels) if i < delta else (i - delta, levels - delta)
        support &= bool(nz.size) and nz.min() >= lo and nz.max() <= hi
    pi = stationary_distribution(z)
    residual = float(np.abs(z.T @ pi - pi).max())
    tv = max(_tv(empirical_stationary(sim), ref.pi) for _, ref, sim, _ in fixture_runs)

    toy = ref_params(p=1.0)
    f1 = float(sum_gamma_cdf(harvest_pair(toy), 0.005))
    zt = build_transition_matrix(BatteryModel(0.005, 1, 1), harvest_pair(toy), toy.lam)
    p = 1 - f1
    toy_err = float(np.abs(stationary_distribution(zt) - [1 / (1 + p), p / (1 + p)]).max())
    toy_err = max(toy_err, float(np.abs(zt - [[f1, p], [1, 0]]).max()))

    ok = row_err <= 1e-12 and support and residual < 1e-9 and tv < 0.01 and toy_err < 1e-12
    assert record(4, ok, f"row err {row_err:.1e}; support {support}; residual {residual:.1e}; "
                         f"max TV {tv:.4f}; toy err {toy_err:.1e}")


def _ks_upper_bound(cdf, samples, stride=500):
    """Rigorous upper bound on sup|F - F_n| from F evaluated at every stride-th order statistic."""
    x = np.sort(samples)
    n = x.size
    idx = np.arange(stride - 1, n, stride)
    idx = np.unique(np.append(idx, n - 1))
    grid = x[idx]
    f = cdf(grid)
    e_at = (idx + 1) / n  # F_n(grid) (no ties for continuous draws)
    e_before = idx / n  # F_n(grid-)
    at_grid = max(np.abs(f - e_at).max(), np.abs(f - e_before).max())
    # both functions are nondecreasing between consecutive grid points
    f_lo = np.concatenate(([0.0], f))
    f_hi = np.concatenate((f, [1.0]))
    e_lo = np.concatenate(([0.0], e_at))
    e_hi = np.concatenate((e_before, [1.0]))
    between = max((f_hi - e_lo).max(), (e_hi - f_lo).max())
    return max(at_grid, between), at_grid


def test_criterion_5_gamma_sum_cdf():
    params = ref_params(p=10.0)
    pair = harvest_pair(params)
    rng = np.random.default_rng(55)
    n = 10_000_000
    draws = rng.gamma(pair.shape1, pair.scale1, n) + rng.gamma(pair.shape2, pair.scale2, n)
    bound, at_grid = _ks_upper_bound(lambda x: sum_gamma_cdf(pair, x), draws)
    del draws

    eq_err = 0.0
    for s1, s2, theta in [(2, 2, 0.3), (1, 3, 2.0), (4, 1, 1e-3)]:
        xs = np.linspace(0, (s1 + s2) * theta * 5, 101)
        pair_eq = GammaPair(s1, theta, s2, theta)
        eq_err = max(eq_err, max(abs(float(sum_gamma_cdf(pair_eq, x)) - gamma_cdf(s1 + s2, theta, x)) for x in xs))
    ok = bound < 5e-4 and eq_err <= 1e-12
    assert record(5, ok, f"KS distance <= {bound:.2e} (grid value {at_grid:.2e}, n=1e7); "
                         f"equal-scale err {eq_err:.1e}")


def test_criterion_6_optimal_delta():
    out = io.StringIO()
    rows = cmd_sweep(parse_config(CONFIGS / "delta_sweep.cfg"), stream=out)
    psi = [r[1] for r in rows]
    k = int(np.argmax(psi))
    interior = 0 < k < len(psi) - 1 and psi[k] > max(psi[0], psi[-1])

    base = ref_params(p=3.0, sigma=10.0)
    powers = [1.0, 3.0, 10.0]
    by_power = [optimize_ps_ea(base.with_(p_a=p, p_b=p), 0.2, 200, [0.9]).delta for p in powers]
    in_power = all(a <= b for a, b in zip(by_power, by_power[1:]))

    capped = []
    for p in powers:
        params = base.with_(p_a=p, p_b=p)
        hi = optimize_ps_ea(params, 0.2, 200, lambda_grid(0.01, 0.9))
        lo = optimize_ps_ea(params, 0.2, 200, lambda_grid(0.01, 0.5))
        capped.append((hi.delta, lo.delta))
    in_cap = all(lo <= hi for hi, lo in capped)
    ok = interior and in_power and in_cap
    assert record(6, ok, f"delta sweep argmax {k + 1} of 1..{len(psi)}; delta*(P=1,3,10)={by_power}; "
                         f"delta* cap 0.9 -> 0.5: {capped}")


def test_criterion_7_scheme_ordering():
    cfg = parse_config(CONFIGS / "scheme_compare.cfg")
    t0 = time.perf_counter()
    rows = cmd_compare(cfg, stream=io.StringIO())
    secs = time.perf_counter() - t0
    ok = secs < 1800 and all(ps >= ts and ps >= noea for _, ps, ts, noea in rows)
    detail = "; ".join(f"P={p:g}W {ps:.3f}/{ts:.3f}/{noea:.3f}" for p, ps, ts, noea in rows)
    assert record(7, ok, f"PS-EA/TS-EA/PS-noEA: {detail}; {secs:.0f}s")


def test_criterion_8_saturation():
    powers = np.geomspace(0.1, 1000.0, 41)
    psi = np.array([throughput_ps_ea(ref_params(p=p), FIXTURE_BATTERY).psi for p in powers])
    top = psi[powers >= 100.0 * (1 - 1e-12)]
    change = float((top.max() - top.min()) / top.max())
    assert record(8, change < 0.01, f"relative change over 100..1000 W: {change:.2e} (psi {top[0]:.4f} -> {top[-1]:.4f})")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
