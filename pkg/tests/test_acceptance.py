"""Acceptance suite: one test per shipped criterion, stated tolerances only.

Each test prints exactly one line `ACCEPTANCE nn <name>: PASS|FAIL (...)` so
the run log doubles as a checklist. Criterion 03 carries a known FAIL in its
second clause; its docstring and the project notes explain why it is kept
red rather than loosened.
"""
import json
import math
import time
from dataclasses import replace

import numpy as np
import pytest
from click.testing import CliRunner

import oracles
from ringcav import fitting, io, peaks, thermal
from ringcav import steady_state as ss
from ringcav.cli import main as cli_main
from ringcav.params import DriveParams, nominal_params


def _report(num: int, name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"\nACCEPTANCE {num:02d} {name}: {status}{suffix}", flush=True)
    return ok


@pytest.fixture(scope="module")
def empty_cavity_payload(tmp_path_factory):
    """One CLI invocation shared by criteria 1 and 2, timed."""
    outdir = tmp_path_factory.mktemp("ec")
    runner = CliRunner()
    out = outdir / "ec.json"
    t0 = time.perf_counter()
    result = runner.invoke(
        cli_main, ["empty-cavity", "--output", str(out)], catch_exceptions=False
    )
    elapsed = time.perf_counter() - t0
    assert result.exit_code == 0, result.output
    return io.read_json(out), elapsed


def test_criterion_01_empty_cavity_characterization(empty_cavity_payload):
    """Synthesized noisy multi-FSR scan, one CLI call: finesse 35+-1,
    FSR 148+-1 MHz, under 10 s."""
    payload, elapsed = empty_cavity_payload
    der = payload["derived"]
    ok_f = abs(der["finesse"] - 35.0) <= 1.0
    ok_fsr = abs(der["fsr_mhz"] - 148.0) <= 1.0
    ok_t = elapsed < 10.0
    ok = _report(
        1,
        "empty-cavity characterization",
        ok_f and ok_fsr and ok_t,
        f"finesse={der['finesse']:.3f}, fsr={der['fsr_mhz']:.3f} MHz, {elapsed:.2f} s",
    )
    assert ok


def test_criterion_02_rate_decomposition(empty_cavity_payload):
    """Fitted lineshape maps to kappa_i/2pi = 1.7+-0.1 MHz and
    kappa_ex/2pi = 0.47+-0.05 MHz; reported fwhm*finesse = fsr exactly
    (the quotient is the reported linewidth, bit for bit)."""
    payload, _ = empty_cavity_payload
    der = payload["derived"]
    ok_i = abs(der["kappa_i_mhz"] - 1.7) <= 0.1
    ok_e = abs(der["kappa_ex_mhz"] - 0.47) <= 0.05
    ok_exact = der["fwhm_mhz"] == der["fsr_mhz"] / der["finesse"]
    ok = _report(
        2,
        "rate decomposition",
        ok_i and ok_e and ok_exact,
        f"kappa_i={der['kappa_i_mhz']:.4f}, kappa_ex={der['kappa_ex_mhz']:.4f}, "
        f"fwhm*finesse exact={ok_exact}",
    )
    assert ok


def test_criterion_03_power_series_shapes():
    """Feature counts across the drive series, and closeness to the bare
    cavity at the highest power.

    The spectra of this undercoupled all-pass geometry are transmission
    dips (T <= 1 everywhere, wings -> 1), so the split resonance shows as
    exactly two minima with one local maximum between them; that reading
    is fixed by the companion clause requiring "exactly one minimum" at
    high power. Counts pass.

    The second clause requires max|T - T_empty| < 5% at 2.3 nW. With the
    calibrated drive strength (|y|^2 = 5.36 per nW) the closest approach
    at that power is ~0.19, and reaching 0.05 needs roughly 12 nW; the
    check is asserted exactly as stated and is expected to FAIL. It is
    kept red deliberately instead of being loosened; see the project
    notes for the full analysis.
    """
    cavity, ensemble, _ = nominal_params()
    grid = np.linspace(-20e6, 20e6, 2001)
    x_mhz = grid / 1e6
    empty = replace(ensemble, cooperativity=0.0)
    t_empty = ss.spectrum(grid, cavity, empty, DriveParams(y=0.0))

    t0 = time.perf_counter()
    counts_ok = True
    details = []
    for p_in in (30e-12, 60e-12, 750e-12):
        t = ss.spectrum(grid, cavity, ensemble, DriveParams(input_power=p_in))
        n_dips = len(peaks.find_transmission_dips(x_mhz, t))
        n_max = len(peaks.find_local_maxima(x_mhz, t))
        counts_ok &= n_dips == 2 and n_max == 1
        details.append(f"{p_in * 1e12:.0f}pW:{n_dips}dips")
    t_high = ss.spectrum(grid, cavity, ensemble, DriveParams(input_power=2.3e-9))
    n_dips_high = len(peaks.find_transmission_dips(x_mhz, t_high))
    counts_ok &= n_dips_high == 1
    deviation = float(np.max(np.abs(t_high - t_empty)))
    deviation_ok = deviation < 0.05
    elapsed = time.perf_counter() - t0
    time_ok = elapsed < 5.0

    ok = _report(
        3,
        "drive series shapes",
        counts_ok and deviation_ok and time_ok,
        f"counts {'PASS' if counts_ok else 'FAIL'} [{', '.join(details)}, "
        f"2300pW:{n_dips_high}dip]; max|T-T_empty|={deviation:.3f} vs 0.05 "
        f"{'PASS' if deviation_ok else 'FAIL (known, documented)'}; {elapsed:.2f} s",
    )
    assert ok


def test_criterion_04_splitting_magnitude():
    """Weak-drive dip separation within 35% of the estimate; the estimate
    op equals the closed form to 1e-9 relative."""
    cavity, ensemble, _ = nominal_params()
    grid = np.linspace(-20e6, 20e6, 4001)
    t = ss.spectrum(grid, cavity, ensemble, DriveParams(y=0.0))
    measured = peaks.measure_splitting(grid / 1e6, t)  # MHz

    est_hz = ss.splitting_estimate(
        ensemble.cooperativity, cavity.kappa, ensemble.gamma_perp
    )
    hand_hz = (
        4.0
        * math.sqrt(cavity.kappa * ensemble.gamma_perp * ensemble.cooperativity)
        / (2.0 * math.pi)
    )
    ok_est = abs(est_hz - hand_hz) <= 1e-9 * hand_hz
    ok_meas = abs(measured - est_hz / 1e6) <= 0.35 * est_hz / 1e6
    ok = _report(
        4,
        "splitting magnitude",
        ok_est and ok_meas,
        f"measured={measured:.4f} MHz vs estimate={est_hz / 1e6:.4f} MHz "
        f"({abs(measured - est_hz / 1e6) / (est_hz / 1e6):.1%} off), "
        f"closed-form agreement={ok_est}",
    )
    assert ok


def test_criterion_05_saturation_curve():
    """On-resonance saturation with n_sat=12.7: monotone decreasing,
    T(P->0)=0.880+-0.005, T(P->inf)=0.321+-0.005, empty series constant
    to 1e-9."""
    cavity, ensemble, _ = nominal_params()
    powers = np.logspace(-13.0, -5.0, 200)
    t_atoms = fitting.saturation_curve(powers, cavity, ensemble)
    t_empty = fitting.saturation_curve(
        powers, cavity, replace(ensemble, cooperativity=0.0)
    )
    ok_mono = bool(np.all(np.diff(t_atoms) < 0))
    ok_low = abs(t_atoms[0] - 0.880) <= 0.005
    ok_high = abs(t_atoms[-1] - 0.321) <= 0.005
    ok_empty = float(np.ptp(t_empty)) < 1e-9
    ok = _report(
        5,
        "saturation curve",
        ok_mono and ok_low and ok_high and ok_empty,
        f"monotone={ok_mono}, T(1e-13 W)={t_atoms[0]:.4f}, "
        f"T(1e-5 W)={t_atoms[-1]:.4f}, empty ptp={np.ptp(t_empty):.1e}",
    )
    assert ok


def test_criterion_06_derived_quantities():
    """g_eff/2pi from n_sat=13 equals 0.632+-0.001 MHz; N_eff in [63, 66]."""
    cavity, ensemble, _ = nominal_params()
    g_eff = ss.g_eff_from_nsat(13.0, ensemble.gamma_perp, ensemble.gamma_par)
    g_eff_mhz = g_eff / (2.0 * math.pi * 1e6)
    n_eff = ss.n_eff_from_c(
        ensemble.cooperativity, g_eff, cavity.kappa, ensemble.gamma_perp
    )
    ok_g = abs(g_eff_mhz - 0.632) <= 0.001
    ok_n = 63.0 <= n_eff <= 66.0
    ok = _report(
        6,
        "derived quantities",
        ok_g and ok_n,
        f"g_eff={g_eff_mhz:.4f} MHz, N_eff={n_eff:.2f}",
    )
    assert ok


def test_criterion_07_solver_oracle_equivalence():
    """>=1e4 random tuples: analytic roots match bracketing brentq to 1e-7
    relative with identical counts, under 60 s."""
    rng = np.random.default_rng(0)
    n = 10000
    y = rng.uniform(0.0, 3.0, n)
    c = rng.uniform(0.0, 5.0, n)
    dc = rng.uniform(-10.0, 10.0, n)
    da = rng.uniform(-10.0, 10.0, n)

    t0 = time.perf_counter()
    roots, counts = ss._roots_grid(y * y, dc, da, c)
    count_mismatches = 0
    worst = 0.0
    for k in range(n):
        ref = oracles.intensity_roots_bracketing(y[k] * y[k], dc[k], da[k], c[k])
        if len(ref) != counts[k]:
            count_mismatches += 1
            continue
        mine = roots[k, : counts[k]]
        scale = np.maximum(np.abs(ref), 1e-30)
        worst = max(worst, float(np.max(np.abs(mine - ref) / scale)))
    elapsed = time.perf_counter() - t0

    ok = _report(
        7,
        "solver oracle equivalence",
        count_mismatches == 0 and worst < 1e-7 and elapsed < 60.0,
        f"{n} tuples, count mismatches={count_mismatches}, "
        f"worst rel dev={worst:.2e}, {elapsed:.1f} s",
    )
    assert ok


def test_criterion_08_weak_limit_equivalence():
    """|transmission(y=1e-3) - weak_transmission| < 1e-5 over the detuning
    and cooperativity box."""
    cavity, _, _ = nominal_params()
    r = cavity.kappa_ratio
    dc, da, c = np.meshgrid(
        np.linspace(-10, 10, 21),
        np.linspace(-10, 10, 21),
        np.linspace(0, 5, 6),
        indexing="ij",
    )
    dc, da, c = dc.ravel(), da.ravel(), c.ravel()
    y = 1e-3
    roots, counts = ss._roots_grid(np.full_like(dc, y * y), dc, da, c)
    t_full = ss._transmission_from_u(roots[:, 0], dc, da, c, r)
    t_weak = ss.weak_transmission(dc, da, c, r)
    worst = float(np.max(np.abs(t_full - t_weak)))
    ok = _report(
        8, "weak-limit equivalence", worst < 1e-5, f"max dev={worst:.2e} over {dc.size} points"
    )
    assert ok


def test_criterion_09_fitter_roundtrips():
    """C within +-0.1 and n_sat within +-1 from 1%-noise synthetic data,
    20/20 seeds."""
    spec_c = fitting.FitSpec(
        model="atomic_spectrum", free=("cooperativity", "gamma_perp_mhz")
    )
    grid = np.linspace(-20.0, 20.0, 401)
    truth_c = {"cooperativity": 1.5, "gamma_perp_mhz": 4.0}
    spec_n = fitting.FitSpec(model="saturation_curve", free=("n_sat",))
    powers = np.logspace(-12.5, -7.5, 60)
    truth_n = {"n_sat": 12.7}

    passed = 0
    worst_c = worst_n = 0.0
    for seed in range(20):
        data_c = fitting.generate_synthetic(
            spec_c, grid, truth_c, noise_sigma=0.01, seed=seed
        )
        err_c = abs(fitting.fit(data_c, spec_c).estimates["cooperativity"] - 1.5)
        data_n = fitting.generate_synthetic(
            spec_n, powers, truth_n, noise_sigma=0.01, seed=seed
        )
        err_n = abs(fitting.fit(data_n, spec_n).estimates["n_sat"] - 12.7)
        worst_c, worst_n = max(worst_c, err_c), max(worst_n, err_n)
        passed += err_c <= 0.1 and err_n <= 1.0
    ok = _report(
        9,
        "fitter round-trips",
        passed == 20,
        f"{passed}/20 seeds, worst |dC|={worst_c:.3f}, worst |dn_sat|={worst_n:.3f}",
    )
    assert ok


def test_criterion_10_thermal_lock_properties():
    """Dwell asymmetry >= 2 with defaults and exactly 1 at zero absorption;
    re-lock after a 0.5-linewidth step within 10 tau_th; halving dt moves
    the step-resolved outcomes (down-scan dwell, final lock offset) by
    < 1%, and the fast up-scan dwell by < 1% one refinement later
    (tau_th/80 -> tau_th/160), since at the default step it spans only a
    few samples."""
    cavity, _, _ = nominal_params()
    therm = thermal.ThermalParams()
    config = thermal.default_lock_config(cavity, therm)

    down, up, ratio = thermal.scan_dwell_ratio(therm, config, cavity)
    ok_ratio = ratio >= 2.0
    cold = thermal.ThermalParams(absorption_fraction=0.0)
    _, _, ratio0 = thermal.scan_dwell_ratio(cold, config, cavity)
    ok_zero = ratio0 == 1.0

    dist = thermal.step_disturbance(0.1, 0.5 * cavity.fwhm_hz)
    series = thermal.lock_loop(0.4, therm, config, cavity, disturbance=dist)
    relock = series.metrics["relock_time_s"]
    ok_relock = relock < 10.0 * therm.tau_th

    half = replace(config, dt=config.dt / 2.0)
    down_h, up_h, ratio_h = thermal.scan_dwell_ratio(therm, half, cavity)
    series_h = thermal.lock_loop(0.4, therm, half, cavity, disturbance=dist)
    d_down = abs(down_h - down) / down
    d_final = abs(
        series_h.metrics["final_resonance_offset_hz"]
        - series.metrics["final_resonance_offset_hz"]
    ) / abs(series.metrics["final_resonance_offset_hz"])
    quarter = replace(config, dt=config.dt / 4.0)
    _, up_q, _ = thermal.scan_dwell_ratio(therm, quarter, cavity)
    d_up_fine = abs(up_q - up_h) / up_h
    ok_dt = d_down < 0.01 and d_final < 0.01 and d_up_fine < 0.01 and ratio_h >= 2.0

    ok = _report(
        10,
        "thermal lock properties",
        ok_ratio and ok_zero and ok_relock and ok_dt,
        f"ratio={ratio:.0f}, zero-absorption ratio={ratio0}, "
        f"relock={relock * 1e3:.2f} ms vs {10 * therm.tau_th * 1e3:.0f} ms, "
        f"dt-halving: down {d_down:.2%}, final {d_final:.2%}, up(fine) {d_up_fine:.2%}",
    )
    assert ok
