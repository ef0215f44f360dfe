"""Command-line front end.

Every command resolves its inputs to a plain dict, runs a pure function of
that dict, and writes each output next to a manifest recording the resolved
dict. ``rerun MANIFEST`` replays the stored dict through the same function,
so outputs regenerate bit-identically (only the manifest timestamp moves).

Exit codes: 2 invalid input or configuration, 3 solver failure, 4 fit did
not converge, 5 degenerate fit (suppress with --allow-degenerate),
6 lock lost.
"""
from __future__ import annotations

import shutil
import sys
from dataclasses import replace
from pathlib import Path

import click
import numpy as np

from . import __version__, fitting, io, ring
from . import steady_state as ss
from . import thermal
from .errors import (
    AmbiguousDrive,
    DegenerateFit,
    FinesseTooLow,
    LockLost,
    ModelEvaluationFailed,
    NoRealRoot,
    NonPositiveRate,
    NotConverged,
    NumericalInstability,
    StepTooCoarse,
    UnknownUnit,
)
from .params import NOMINAL, merge_document, params_from_dict
from .peaks import measure_splitting
from .units import rad_to_mhz

_VALIDATION_ERRORS = (
    ValueError,
    OSError,
    NonPositiveRate,
    AmbiguousDrive,
    UnknownUnit,
    StepTooCoarse,
    FinesseTooLow,
)

_BRANCHES = {
    "lowest": ss.LOWEST,
    "highest": ss.HIGHEST,
    "follow-up": ss.BranchPolicy(mode="follow_sweep", direction="up"),
    "follow-down": ss.BranchPolicy(mode="follow_sweep", direction="down"),
}


def _die(code: int, exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _execute(command: str, resolved: dict):
    try:
        outputs = RUNNERS[command](resolved)
    except _VALIDATION_ERRORS as exc:
        _die(2, exc)
    except (NoRealRoot, NumericalInstability, ModelEvaluationFailed) as exc:
        _die(3, exc)
    except NotConverged as exc:
        _die(4, exc)
    except DegenerateFit as exc:
        _die(5, exc)
    except LockLost as exc:
        _die(6, exc)
    for path in outputs:
        click.echo(f"wrote {path}")


def _finish(command: str, resolved: dict, inputs: list, outputs: list) -> list:
    """Write one manifest per output; returns outputs + manifest paths."""
    manifest = io.build_manifest(command, resolved, [str(p) for p in inputs],
                                 [str(p) for p in outputs])
    written = list(outputs)
    for out in outputs:
        mpath = io.manifest_path(out)
        io.write_json(mpath, manifest)
        written.append(mpath)
    return [str(p) for p in written]


def _load_doc(params_path, overrides: dict) -> dict:
    doc = io.read_json(params_path) if params_path else {}
    if not isinstance(doc, dict):
        raise ValueError("parameter file must hold a JSON object")
    doc = merge_document(NOMINAL, doc)
    return merge_document(doc, overrides)


def _section_overrides(cooperativity, gamma_perp_mhz, n_sat, power_w, y,
                       delta_atom_mhz) -> dict:
    ens = {}
    if cooperativity is not None:
        ens["cooperativity"] = cooperativity
    if gamma_perp_mhz is not None:
        ens["gamma_perp_mhz"] = gamma_perp_mhz
    if n_sat is not None:
        ens["n_sat"] = n_sat
    drv = {}
    if power_w is not None and y is not None:
        raise AmbiguousDrive("give at most one of --power-w and --y")
    if power_w is not None:
        drv["input_power_w"] = power_w
    if y is not None:
        drv["y"] = y
    if delta_atom_mhz is not None:
        drv["delta_atom_mhz"] = delta_atom_mhz
    out = {}
    if ens:
        out["ensemble"] = ens
    if drv:
        out["drive"] = drv
    return out


@click.group()
@click.version_option(version=__version__)
def main():
    """Fiber ring cavity simulator and estimation tools."""


# ---------------------------------------------------------------- spectrum

def _run_spectrum(r: dict) -> list:
    cavity, ensemble, drive = params_from_dict(r["doc"])
    half = r["span_mhz"] / 2.0
    grid_mhz = np.linspace(r["center_mhz"] - half, r["center_mhz"] + half, r["points"])
    t = ss.spectrum(
        grid_mhz * 1e6,
        cavity,
        ensemble,
        drive,
        atom_offset_hz=r["atom_offset_mhz"] * 1e6,
        policy=_BRANCHES[r["branch"]],
    )
    if r["noise"] > 0:
        rng = np.random.default_rng(r["seed"])
        t = t + rng.normal(0.0, r["noise"], t.shape)
    out = Path(r["output"])
    io.write_spectrum_csv(out, grid_mhz, t)
    return _finish("spectrum", r, r["inputs"], [out])


@main.command()
@click.option("--params", "params_path", type=click.Path(), default=None,
              help="JSON parameter document; missing keys fall back to the reference set.")
@click.option("--cooperativity", type=float, default=None)
@click.option("--gamma-perp-mhz", type=float, default=None)
@click.option("--n-sat", type=float, default=None)
@click.option("--power-w", type=float, default=None, help="Probe input power (W).")
@click.option("--y", type=float, default=None, help="Dimensionless drive amplitude.")
@click.option("--delta-atom-mhz", type=float, default=None,
              help="Fixed atom detuning; by default detunings track the scanned probe.")
@click.option("--span-mhz", type=float, default=40.0, show_default=True)
@click.option("--center-mhz", type=float, default=0.0, show_default=True)
@click.option("--points", type=int, default=801, show_default=True)
@click.option("--atom-offset-mhz", type=float, default=0.0, show_default=True,
              help="Atomic resonance offset from the cavity resonance.")
@click.option("--branch", type=click.Choice(sorted(_BRANCHES)), default="lowest",
              show_default=True)
@click.option("--noise", type=float, default=0.0, show_default=True,
              help="Additive Gaussian noise sigma on the transmission.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(), default="spectrum.csv", show_default=True)
def spectrum(params_path, cooperativity, gamma_perp_mhz, n_sat, power_w, y,
             delta_atom_mhz, span_mhz, center_mhz, points, atom_offset_mhz,
             branch, noise, seed, output):
    """Simulate a probe transmission spectrum and write it as CSV."""
    try:
        overrides = _section_overrides(cooperativity, gamma_perp_mhz, n_sat,
                                       power_w, y, delta_atom_mhz)
        doc = _load_doc(params_path, overrides)
    except _VALIDATION_ERRORS as exc:
        _die(2, exc)
    resolved = {
        "doc": doc,
        "span_mhz": span_mhz,
        "center_mhz": center_mhz,
        "points": points,
        "atom_offset_mhz": atom_offset_mhz,
        "branch": branch,
        "noise": noise,
        "seed": seed,
        "output": output,
        "inputs": [params_path] if params_path else [],
    }
    _execute("spectrum", resolved)


# -------------------------------------------------------------- saturation

def _run_saturation(r: dict) -> list:
    cavity, ensemble, _ = params_from_dict(r["doc"])
    powers = np.logspace(np.log10(r["pmin_w"]), np.log10(r["pmax_w"]), r["points"])
    t_atoms = fitting.saturation_curve(powers, cavity, ensemble)
    empty = replace(ensemble, cooperativity=0.0)
    t_empty = fitting.saturation_curve(powers, cavity, empty)
    out = Path(r["output"])
    io.write_saturation_csv(out, powers, t_atoms, t_empty)
    return _finish("saturation", r, r["inputs"], [out])


@main.command()
@click.option("--params", "params_path", type=click.Path(), default=None)
@click.option("--cooperativity", type=float, default=None)
@click.option("--gamma-perp-mhz", type=float, default=None)
@click.option("--n-sat", type=float, default=None)
@click.option("--pmin-w", type=float, default=1e-12, show_default=True)
@click.option("--pmax-w", type=float, default=1e-8, show_default=True)
@click.option("--points", type=int, default=41, show_default=True)
@click.option("--output", type=click.Path(), default="saturation.csv", show_default=True)
def saturation(params_path, cooperativity, gamma_perp_mhz, n_sat, pmin_w,
               pmax_w, points, output):
    """Simulate on-resonance transmission vs probe power (log-spaced grid)."""
    try:
        if not (0 < pmin_w < pmax_w):
            raise ValueError(f"need 0 < pmin ({pmin_w!r}) < pmax ({pmax_w!r})")
        overrides = _section_overrides(cooperativity, gamma_perp_mhz, n_sat,
                                       None, None, None)
        doc = _load_doc(params_path, overrides)
    except _VALIDATION_ERRORS as exc:
        _die(2, exc)
    resolved = {
        "doc": doc,
        "pmin_w": pmin_w,
        "pmax_w": pmax_w,
        "points": points,
        "output": output,
        "inputs": [params_path] if params_path else [],
    }
    _execute("saturation", resolved)


# --------------------------------------------------------------------- fit

def _fitspec_from_doc(doc: dict) -> fitting.FitSpec:
    allowed = {"model", "free", "fixed", "bounds", "init"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown fitspec keys: {sorted(unknown)}")
    if "model" not in doc or "free" not in doc:
        raise ValueError("fitspec must name 'model' and 'free'")
    return fitting.FitSpec(
        model=doc["model"],
        free=tuple(doc["free"]),
        fixed=dict(doc.get("fixed", {})),
        bounds={k: tuple(v) for k, v in doc.get("bounds", {}).items()},
        init=dict(doc.get("init", {})),
    )


def _fit_payload(result: fitting.FitResult, degenerate: list) -> dict:
    return {
        "estimates": result.estimates,
        "residual_rms": result.residual_rms,
        "covariance_proxy": result.covariance_proxy,
        "n_eval": result.n_eval,
        "converged": result.converged,
        "degenerate_parameters": degenerate,
    }


def _load_dataset(path) -> fitting.Dataset:
    x, yobs, sigma = io.read_dataset_csv(path)
    return fitting.Dataset(x, yobs, sigma)


def _run_fit(r: dict) -> list:
    data = _load_dataset(r["data"])
    spec = _fitspec_from_doc(r["fitspec"])
    degenerate = []
    try:
        result = fitting.fit(data, spec)
    except DegenerateFit as exc:
        if not r["allow_degenerate"]:
            raise
        result = exc.result
        degenerate = list(exc.parameters)
        click.echo(f"warning: {exc}", err=True)
    out = Path(r["output"])
    io.write_json(out, _fit_payload(result, degenerate))
    res_path = out.with_name(out.stem + "_residuals.csv")
    ymodel = fitting.evaluate_model(spec, result.estimates, data.x)
    io.write_residuals_csv(res_path, data.x, data.yobs, ymodel)
    return _finish("fit", r, [r["data"]], [out, res_path])


@main.command()
@click.option("--data", "data_path", type=click.Path(), required=True,
              help="CSV with x in the first column, observation in the second.")
@click.option("--fitspec", "fitspec_path", type=click.Path(), required=True,
              help="JSON with model, free, and optional fixed/bounds/init.")
@click.option("--allow-degenerate", is_flag=True, default=False,
              help="Report an unconstrained fit instead of failing with code 5.")
@click.option("--output", type=click.Path(), default="fit.json", show_default=True)
def fit(data_path, fitspec_path, allow_degenerate, output):
    """Fit a registered model to CSV data; writes estimates and residuals."""
    try:
        fitspec_doc = io.read_json(fitspec_path)
    except _VALIDATION_ERRORS as exc:
        _die(2, exc)
    resolved = {
        "data": data_path,
        "fitspec": fitspec_doc,
        "allow_degenerate": allow_degenerate,
        "output": output,
    }
    _execute("fit", resolved)


# ------------------------------------------------------------ empty-cavity

_EMPTY_FREE = ("finesse", "fsr_mhz", "dip_transmission", "nu0_mhz")


def _run_empty_cavity(r: dict) -> list:
    out = Path(r["output"])
    outputs = []
    inputs = []
    if r["data"] is not None:
        data = _load_dataset(r["data"])
        inputs.append(r["data"])
    else:
        truth = r["truth"]
        spec = fitting.FitSpec(model="empty_ring", free=_EMPTY_FREE)
        half = r["span_mhz"] / 2.0
        grid = np.linspace(-half, half, r["points"])
        data = fitting.generate_synthetic(spec, grid, truth,
                                          noise_sigma=r["noise"], seed=r["seed"])
        data_path = out.with_name(out.stem + "_data.csv")
        io.write_spectrum_csv(data_path, data.x, data.yobs)
        outputs.append(data_path)
    spec = fitting.FitSpec(model="empty_ring", free=_EMPTY_FREE)
    result = fitting.fit(data, spec)
    est = result.estimates
    model = ring.ring_from_lineshape(
        finesse=est["finesse"],
        fsr=est["fsr_mhz"] * 1e6,
        dip_transmission=est["dip_transmission"],
    )
    kappa_i, kappa_ex = ring.rates_from_ring(model)
    payload = _fit_payload(result, [])
    payload["derived"] = {
        "finesse": est["finesse"],
        "fsr_mhz": est["fsr_mhz"],
        # linewidth defined through the finesse, so fwhm * finesse == fsr exactly
        "fwhm_mhz": est["fsr_mhz"] / est["finesse"],
        "kappa_i_mhz": rad_to_mhz(kappa_i),
        "kappa_ex_mhz": rad_to_mhz(kappa_ex),
        "t_coupler": model.t_coupler,
        "a_roundtrip": model.a_roundtrip,
    }
    io.write_json(out, payload)
    outputs.append(out)
    return _finish("empty-cavity", r, inputs, outputs)


@main.command("empty-cavity")
@click.option("--data", "data_path", type=click.Path(), default=None,
              help="Measured bare-cavity spectrum CSV; omit to synthesize one.")
@click.option("--finesse", type=float, default=None,
              help="Synthesis truth; defaults derive from the reference rates.")
@click.option("--fsr-mhz", type=float, default=None)
@click.option("--dip-transmission", type=float, default=None)
@click.option("--nu0-mhz", type=float, default=0.0, show_default=True)
@click.option("--span-mhz", type=float, default=340.0, show_default=True,
              help="Synthesized scan width; cover two dips to pin the FSR.")
@click.option("--points", type=int, default=3001, show_default=True)
@click.option("--noise", type=float, default=0.01, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(), default="empty_cavity.json",
              show_default=True)
def empty_cavity(data_path, finesse, fsr_mhz, dip_transmission, nu0_mhz,
                 span_mhz, points, noise, seed, output):
    """Fit the bare ring lineshape and derive decay rates from it."""
    try:
        truth = None
        if data_path is None:
            cavity, _, _ = params_from_dict({})
            model = ring.ring_from_rates(cavity)
            truth = {
                "finesse": finesse if finesse is not None else model.finesse,
                "fsr_mhz": fsr_mhz if fsr_mhz is not None else cavity.fsr / 1e6,
                "dip_transmission": (dip_transmission if dip_transmission is not None
                                     else model.dip_transmission),
                "nu0_mhz": nu0_mhz,
            }
        elif any(v is not None for v in (finesse, fsr_mhz, dip_transmission)):
            raise ValueError("synthesis truth options conflict with --data")
    except _VALIDATION_ERRORS as exc:
        _die(2, exc)
    resolved = {
        "data": data_path,
        "truth": truth,
        "span_mhz": span_mhz,
        "points": points,
        "noise": noise,
        "seed": seed,
        "output": output,
    }
    _execute("empty-cavity", resolved)


# -------------------------------------------------------------------- lock

def _run_lock(r: dict) -> list:
    cavity, _, _ = params_from_dict(r["doc"])
    therm = thermal.ThermalParams(
        tau_th=r["tau_th_s"],
        shift_per_watt=r["shift_per_watt"],
        absorption_fraction=r["absorption_fraction"],
    )
    base = thermal.default_lock_config(cavity, therm)
    config = replace(
        base,
        setpoint=r["setpoint"] if r["setpoint"] is not None else base.setpoint,
        gain_i=r["gain_i"],
        heater_power=r["heater_power_w"],
        dt=r["dt_s"] if r["dt_s"] is not None else base.dt,
    )
    w = cavity.fwhm_hz
    mode = r["mode"]
    out = Path(r["output"])
    metrics_path = out.with_name(out.stem + "_metrics.json")
    outputs = [out, metrics_path]

    if mode in ("hold", "step"):
        disturbance = None
        if mode == "step":
            disturbance = thermal.step_disturbance(r["step_at_s"],
                                                   r["step_linewidths"] * w)
        series = thermal.lock_loop(r["duration_s"], therm, config, cavity,
                                   disturbance=disturbance)
        io.write_timeseries_csv(out, series)
        metrics = dict(series.metrics)
    else:
        rate = r["scan_rate_hz_per_s"]
        if rate is None:
            rate = w / (10.0 * therm.tau_th)
        span = r["span_mhz"] * 1e6 if r["span_mhz"] is not None else 60.0 * w
        if mode == "scan-both":
            down = thermal.scan_experiment("down", rate, span, therm, config, cavity)
            up = thermal.scan_experiment("up", rate, span, therm, config, cavity)
            io.write_timeseries_csv(out, down)
            up_path = out.with_name(out.stem + "_up.csv")
            io.write_timeseries_csv(up_path, up)
            outputs = [out, up_path, metrics_path]
            d, u = down.metrics["dwell_s"], up.metrics["dwell_s"]
            metrics = {
                "dwell_down_s": d,
                "dwell_up_s": u,
                "dwell_ratio": d / u,
                "max_pull_hz": down.metrics["max_pull_hz"],
            }
        else:
            direction = "down" if mode == "scan-down" else "up"
            series = thermal.scan_experiment(direction, rate, span, therm,
                                             config, cavity)
            io.write_timeseries_csv(out, series)
            metrics = dict(series.metrics)
    io.write_json(metrics_path, metrics)
    return _finish("lock", r, r["inputs"], outputs)


@main.command()
@click.option("--mode", type=click.Choice(["hold", "step", "scan-up", "scan-down",
                                           "scan-both"]),
              default="hold", show_default=True)
@click.option("--params", "params_path", type=click.Path(), default=None,
              help="JSON parameter document for the cavity section.")
@click.option("--duration-s", type=float, default=0.5, show_default=True)
@click.option("--tau-th-s", type=float, default=10e-3, show_default=True)
@click.option("--shift-per-watt", type=float, default=-9.23e11, show_default=True,
              help="Resonance shift per absorbed watt (Hz/W, negative = red).")
@click.option("--absorption-fraction", type=float, default=0.01, show_default=True)
@click.option("--heater-power-w", type=float, default=2e-3, show_default=True)
@click.option("--gain-i", type=float, default=1e9, show_default=True,
              help="Integral gain (Hz of correction per unit error per second).")
@click.option("--setpoint", type=float, default=None,
              help="Probe transmission setpoint; default mid-fringe.")
@click.option("--dt-s", type=float, default=None,
              help="Integrator step; default tau_th/40.")
@click.option("--step-linewidths", type=float, default=0.5, show_default=True)
@click.option("--step-at-s", type=float, default=0.1, show_default=True)
@click.option("--scan-rate-hz-per-s", type=float, default=None,
              help="Heater scan rate; default one linewidth per 10 tau_th.")
@click.option("--span-mhz", type=float, default=None,
              help="Scan span; default 60 linewidths.")
@click.option("--output", type=click.Path(), default="lock.csv", show_default=True)
def lock(mode, params_path, duration_s, tau_th_s, shift_per_watt,
         absorption_fraction, heater_power_w, gain_i, setpoint, dt_s,
         step_linewidths, step_at_s, scan_rate_hz_per_s, span_mhz, output):
    """Simulate thermal pulling: closed-loop holds, steps, or open scans."""
    try:
        doc = _load_doc(params_path, {})
    except _VALIDATION_ERRORS as exc:
        _die(2, exc)
    resolved = {
        "mode": mode,
        "doc": doc,
        "duration_s": duration_s,
        "tau_th_s": tau_th_s,
        "shift_per_watt": shift_per_watt,
        "absorption_fraction": absorption_fraction,
        "heater_power_w": heater_power_w,
        "gain_i": gain_i,
        "setpoint": setpoint,
        "dt_s": dt_s,
        "step_linewidths": step_linewidths,
        "step_at_s": step_at_s,
        "scan_rate_hz_per_s": scan_rate_hz_per_s,
        "span_mhz": span_mhz,
        "output": output,
        "inputs": [params_path] if params_path else [],
    }
    _execute("lock", resolved)


# ------------------------------------------------------------------ report

def _report_rows(manifest: dict) -> list:
    rows = []
    resolved = manifest.get("resolved", {})
    doc = resolved.get("doc")
    if doc:
        cavity, ensemble, _ = params_from_dict(doc)
        g_eff = ss.g_eff_from_nsat(ensemble.n_sat, ensemble.gamma_perp,
                                   ensemble.gamma_par)
        rows += [
            ("finesse", f"{cavity.finesse:.4f}"),
            ("fwhm_mhz", f"{cavity.fwhm_hz / 1e6:.6f}"),
            ("splitting_estimate_mhz",
             f"{ss.splitting_estimate(ensemble.cooperativity, cavity.kappa, ensemble.gamma_perp) / 1e6:.6f}"),
            ("g_eff_mhz", f"{rad_to_mhz(g_eff):.6f}"),
            ("n_eff",
             f"{ss.n_eff_from_c(ensemble.cooperativity, g_eff, cavity.kappa, ensemble.gamma_perp):.4f}"),
        ]
    if manifest.get("command") == "spectrum":
        try:
            cols = io.read_columns_csv(manifest["outputs"][0])
            split = measure_splitting(cols["detuning_mhz"], cols["transmission"])
            rows.append(("measured_splitting_mhz", f"{split:.6f}"))
        except (OSError, KeyError, ValueError, IndexError):
            pass
    if manifest.get("command") == "empty-cavity":
        try:
            payload = io.read_json(manifest["outputs"][-1])
            for key in ("finesse", "fsr_mhz", "fwhm_mhz", "kappa_i_mhz", "kappa_ex_mhz"):
                rows.append((f"fitted_{key}", f"{payload['derived'][key]:.6f}"))
        except (OSError, KeyError, ValueError, IndexError):
            pass
    if manifest.get("command") == "lock":
        try:
            payload = io.read_json(manifest["outputs"][-1])
            for key, value in sorted(payload.items()):
                rows.append((key, f"{value:.6g}"))
        except (OSError, ValueError, AttributeError):
            pass
    return rows


def _run_report(r: dict) -> list:
    outdir = Path(r["output_dir"])
    outdir.mkdir(parents=True, exist_ok=True)
    lines = []
    copied = []
    for mpath in r["manifests"]:
        mpath = Path(mpath)
        if not mpath.is_file():
            raise ValueError(f"manifest not found: {mpath}")
        manifest = io.read_json(mpath)
        lines.append(f"[{manifest.get('command', '?')}] {mpath}")
        for name, value in _report_rows(manifest):
            lines.append(f"  {name} = {value}")
        for out in manifest.get("outputs", []):
            src = Path(out)
            if src.is_file():
                dest = outdir / src.name
                if src.resolve() != dest.resolve():
                    shutil.copyfile(src, dest)
                copied.append(dest)
                lines.append(f"  bundled {src.name}")
            else:
                lines.append(f"  missing {src}")
        lines.append("")
    summary = outdir / "summary.txt"
    summary.write_text("\n".join(lines), encoding="utf-8")
    return [str(summary)] + [str(p) for p in copied]


@main.command()
@click.argument("manifests", nargs=-1, type=click.Path())
@click.option("--output-dir", type=click.Path(), default="report", show_default=True)
def report(manifests, output_dir):
    """Summarize prior runs from their manifests and bundle the outputs."""
    if not manifests:
        _die(2, ValueError("give at least one manifest"))
    resolved = {"manifests": list(manifests), "output_dir": output_dir}
    _execute("report", resolved)


# ------------------------------------------------------------------- rerun

@main.command()
@click.argument("manifest", type=click.Path())
def rerun(manifest):
    """Re-execute a recorded run; outputs regenerate bit-identically."""
    try:
        doc = io.read_json(manifest)
        command = doc["command"]
        resolved = doc["resolved"]
        if command not in RUNNERS:
            raise ValueError(f"manifest names unknown command {command!r}")
    except _VALIDATION_ERRORS as exc:
        _die(2, exc)
    except KeyError as exc:
        _die(2, ValueError(f"manifest missing key {exc}"))
    _execute(command, resolved)


RUNNERS = {
    "spectrum": _run_spectrum,
    "saturation": _run_saturation,
    "fit": _run_fit,
    "empty-cavity": _run_empty_cavity,
    "lock": _run_lock,
    "report": _run_report,
}


if __name__ == "__main__":
    main()
