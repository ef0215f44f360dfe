"""Thermal self-stability of the fiber ring and the active resonance lock.

Model: a heater laser circulating in the ring deposits a fraction of its
power in the fiber; the resulting temperature excursion shifts the cavity
resonance toward lower frequencies (red) with a single-pole response,

    d(offset)/dt = (shift_per_watt * absorption_fraction * P_circ - offset) / tau_th,

where P_circ is the Lorentzian buildup of the heater power at its current
detuning from the (shifted) resonance. The red shift makes downward frequency
scans dwell on resonance (the resonance retreats ahead of the laser) while
upward scans snap through, and it makes the blue side of the warm resonance a
stable operating point for a heater parked there.

The active lock regulates the resonance to a side-of-fringe setpoint of a
weak probe: an integral controller steers the heater laser frequency from the
probe transmission error. Integration is explicit Euler under the
dt < tau_th/10 contract. The controller integrates per unit time
(integral += gain_i * error * dt), so halving dt does not change the loop
dynamics.

All dynamical quantities here are frequencies in plain Hz relative to the
cold cavity resonance; none of the numbers are measured fiber properties,
they are demonstration values chosen to show the phenomenology.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import LockLost, NonPositiveRate, StepTooCoarse
from .params import CavityParams

#: consecutive out-of-capture-range steps tolerated before declaring the lock lost
CAPTURE_PATIENCE = 100


@dataclass(frozen=True)
class ThermalParams:
    """Fiber thermal response: relaxation time and static shift per absorbed watt.

    shift_per_watt is negative (heating lowers the resonance frequency);
    absorption_fraction is the fraction of circulating power absorbed.
    """

    tau_th: float = 10e-3
    shift_per_watt: float = -9.23e11
    absorption_fraction: float = 0.01

    def __post_init__(self):
        if not (self.tau_th > 0):
            raise NonPositiveRate(f"tau_th must be > 0, got {self.tau_th!r}")
        if not (self.shift_per_watt < 0):
            raise ValueError(f"shift_per_watt must be < 0 (red shift), got {self.shift_per_watt!r}")
        if not (0.0 <= self.absorption_fraction <= 1.0):
            raise ValueError(f"absorption_fraction must be in [0, 1], got {self.absorption_fraction!r}")

    @property
    def shift_coefficient(self) -> float:
        """Steady-state resonance shift per circulating watt (Hz/W), <= 0."""
        return self.shift_per_watt * self.absorption_fraction


@dataclass(frozen=True)
class ThermalState:
    """Instantaneous simulation state.

    resonance_offset: cavity resonance shift from cold (Hz), <= 0 while
    heating is non-negative; heater_detuning: heater laser frequency minus
    the shifted resonance (Hz); controller_integral: accumulated feedback (Hz).
    """

    resonance_offset: float = 0.0
    heater_detuning: float = 0.0
    controller_integral: float = 0.0

    def __post_init__(self):
        for name in ("resonance_offset", "heater_detuning", "controller_integral"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class LockConfig:
    """Lock-loop knobs.

    setpoint: target probe transmission on the fringe side; gain_i: integral
    gain in Hz per unit transmission error per second (per-second, see module
    docstring); dt: integrator step, contract dt < tau_th/10.
    """

    setpoint: float = 0.66
    gain_i: float = 1.0e9
    probe_power: float = 140e-9
    heater_power: float = 2e-3
    dt: float = 2.5e-4

    def __post_init__(self):
        for name in ("gain_i", "setpoint"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not (self.dt > 0):
            raise NonPositiveRate(f"dt must be > 0, got {self.dt!r}")
        if not (self.probe_power >= 0 and self.heater_power >= 0):
            raise NonPositiveRate("powers must be >= 0")


def _check_dt(config: LockConfig, thermal: ThermalParams):
    if not (config.dt < thermal.tau_th / 10.0):
        raise StepTooCoarse(
            f"dt={config.dt!r} violates dt < tau_th/10 = {thermal.tau_th / 10.0!r}"
        )


def buildup_factor(cavity: CavityParams) -> float:
    """Resonant circulating-to-input power ratio, 2 kappa_ex FSR / kappa^2."""
    return 2.0 * cavity.kappa_ex * cavity.fsr / cavity.kappa ** 2


def circulating_power(heater_detuning_hz, heater_power: float, cavity: CavityParams):
    """Lorentzian buildup P_circ = P B / (1 + (2 delta / FWHM)^2)."""
    b = buildup_factor(cavity)
    x = 2.0 * np.asarray(heater_detuning_hz, dtype=float) / cavity.fwhm_hz
    out = heater_power * b / (1.0 + x * x)
    return out if out.ndim else float(out)


def dip_depth(cavity: CavityParams) -> float:
    """On-resonance transmission drop of the bare cavity, 1 - (1 - 2 kex/k)^2."""
    return 1.0 - (1.0 - 2.0 * cavity.kappa_ratio) ** 2


def probe_transmission(probe_detuning_hz, cavity: CavityParams):
    """Bare-cavity Lorentzian dip seen by the weak probe."""
    x = 2.0 * np.asarray(probe_detuning_hz, dtype=float) / cavity.fwhm_hz
    out = 1.0 - dip_depth(cavity) / (1.0 + x * x)
    return out if out.ndim else float(out)


def relax(offset: float, p_circ: float, thermal: ThermalParams, dt: float) -> float:
    """One explicit-Euler step of the single-pole thermal response."""
    target = thermal.shift_coefficient * p_circ
    return offset + dt / thermal.tau_th * (target - offset)


def step(state: ThermalState, thermal: ThermalParams, config: LockConfig,
         cavity: CavityParams) -> ThermalState:
    """Advance one dt with the heater laser frequency held fixed.

    The laser frequency implied by the current state (offset + detuning)
    stays put; the resonance relaxes toward the shift set by the current
    circulating power, and the detuning is updated accordingly.
    """
    _check_dt(config, thermal)
    heater_freq = state.resonance_offset + state.heater_detuning
    p_circ = circulating_power(state.heater_detuning, config.heater_power, cavity)
    new_offset = relax(state.resonance_offset, p_circ, thermal, config.dt)
    return replace(
        state,
        resonance_offset=new_offset,
        heater_detuning=heater_freq - new_offset,
    )


@dataclass(frozen=True)
class TimeSeries:
    """Simulation record; all arrays share one time axis."""

    time_s: np.ndarray
    heater_freq_hz: np.ndarray
    heater_detuning_hz: np.ndarray
    resonance_offset_hz: np.ndarray
    p_circ_w: np.ndarray
    probe_transmission: np.ndarray
    metrics: dict


def _dwell_above(time_s, signal, threshold) -> float:
    """Total time signal > threshold, crossings linearly interpolated."""
    t = np.asarray(time_s)
    s = np.asarray(signal)
    total = 0.0
    above = s > threshold
    for i in range(len(t) - 1):
        dt = t[i + 1] - t[i]
        if above[i] and above[i + 1]:
            total += dt
        elif above[i] != above[i + 1]:
            frac = (threshold - s[i]) / (s[i + 1] - s[i])
            total += (1.0 - frac) * dt if above[i + 1] else frac * dt
    return total


def scan_experiment(direction: str, scan_rate: float, span_hz: float,
                    thermal: ThermalParams, config: LockConfig,
                    cavity: CavityParams) -> TimeSeries:
    """Sweep the heater laser across the cold resonance and record the response.

    The laser moves linearly at scan_rate (Hz/s) over a window of span_hz
    centered on the cold resonance, from the top for direction="down" and
    from the bottom for direction="up". The returned metrics include
    dwell_s: the time spent above half the resonant buildup, the standard
    measure of how long the scan stayed coupled to the (pulled) resonance.
    """
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    if not (scan_rate > 0):
        raise NonPositiveRate(f"scan_rate must be > 0, got {scan_rate!r}")
    if span_hz < 3.0 * cavity.fwhm_hz:
        raise ValueError(
            f"span {span_hz!r} Hz must cover >= 3 cold linewidths ({3 * cavity.fwhm_hz:.3g} Hz)"
        )
    _check_dt(config, thermal)
    dt = config.dt
    n = int(math.ceil(span_hz / scan_rate / dt)) + 1
    sign = -1.0 if direction == "down" else 1.0
    nu_start = span_hz / 2.0 if direction == "down" else -span_hz / 2.0

    time_s = np.arange(n) * dt
    heater_freq = nu_start + sign * scan_rate * time_s
    offset = np.empty(n)
    detuning = np.empty(n)
    p_circ = np.empty(n)
    off = 0.0
    for k in range(n):
        d = heater_freq[k] - off
        pc = circulating_power(d, config.heater_power, cavity)
        detuning[k] = d
        p_circ[k] = pc
        offset[k] = off
        off = relax(off, pc, thermal, dt)
    half_buildup = 0.5 * config.heater_power * buildup_factor(cavity)
    metrics = {
        "dwell_s": _dwell_above(time_s, p_circ, half_buildup),
        "final_resonance_offset_hz": float(offset[-1]),
        "max_pull_hz": float(offset.min()),
    }
    return TimeSeries(
        time_s=time_s,
        heater_freq_hz=heater_freq,
        heater_detuning_hz=detuning,
        resonance_offset_hz=offset,
        p_circ_w=p_circ,
        probe_transmission=probe_transmission(detuning, cavity),
        metrics=metrics,
    )


def scan_dwell_ratio(thermal: ThermalParams, config: LockConfig, cavity: CavityParams,
                     scan_rate: float | None = None, span_hz: float | None = None):
    """(down_dwell, up_dwell, ratio) for mirrored scans; ratio is down/up."""
    w = cavity.fwhm_hz
    if scan_rate is None:
        scan_rate = w / (10.0 * thermal.tau_th)
    if span_hz is None:
        span_hz = 60.0 * w
    down = scan_experiment("down", scan_rate, span_hz, thermal, config, cavity)
    up = scan_experiment("up", scan_rate, span_hz, thermal, config, cavity)
    d, u = down.metrics["dwell_s"], up.metrics["dwell_s"]
    return d, u, d / u


def equilibrium_detuning(target_offset_hz: float, thermal: ThermalParams,
                         config: LockConfig, cavity: CavityParams) -> float:
    """Blue-side heater detuning whose steady state is target_offset_hz.

    Solves shift_coefficient * P_circ(detuning) = target on the stable
    branch (heater above the warm resonance, detuning > 0).
    """
    s = thermal.shift_coefficient
    if not (target_offset_hz < 0):
        raise ValueError("target offset must be < 0 (red shift only)")
    p_needed = target_offset_hz / s
    p_max = config.heater_power * buildup_factor(cavity)
    if p_needed > p_max:
        raise ValueError(
            f"target needs {p_needed:.3g} W circulating, max buildup is {p_max:.3g} W"
        )
    return 0.5 * cavity.fwhm_hz * math.sqrt(p_max / p_needed - 1.0)


def lock_loop(duration_s: float, thermal: ThermalParams, config: LockConfig,
              cavity: CavityParams, disturbance=None,
              lock_offset_linewidths: float = 10.0,
              capture_band: float | None = None) -> TimeSeries:
    """Closed-loop resonance stabilization to a side-of-fringe probe setpoint.

    Geometry: the cold resonance sits lock_offset_linewidths above the probe
    region; the heater holds the warm resonance half a linewidth below the
    fixed probe frequency (blue flank, transmission = setpoint). Each step
    the integral controller moves the heater laser by
    gain_i * (T_probe - setpoint) * dt, which reduces heating when the probe
    transmission is high (resonance too far red) and vice versa.

    disturbance: optional callable t -> Hz added to the resonance position as
    an exogenous perturbation. Raises LockLost if the probe transmission
    stays outside setpoint +- capture_band for more than CAPTURE_PATIENCE
    consecutive steps.

    Metrics: rms transmission error, rms resonance error (Hz), re-lock time
    (duration of the out-of-band resonance excursion, 5% of a linewidth
    band, crossings interpolated), and the final resonance offset.
    """
    _check_dt(config, thermal)
    if duration_s <= 0:
        raise ValueError("duration must be > 0")
    w = cavity.fwhm_hz
    depth = dip_depth(cavity)
    if not (1.0 - depth < config.setpoint < 1.0):
        raise ValueError(
            f"setpoint {config.setpoint!r} outside the fringe ({1 - depth:.3f}, 1)"
        )
    target_offset = -lock_offset_linewidths * w
    # probe detuning from resonance realizing the setpoint, blue flank
    dp = 0.5 * w * math.sqrt(depth / (1.0 - config.setpoint) - 1.0)
    nu_probe = target_offset + dp
    dh0 = equilibrium_detuning(target_offset, thermal, config, cavity)
    heater_base = target_offset + dh0
    if capture_band is None:
        capture_band = 0.45 * depth

    dt = config.dt
    n = int(math.ceil(duration_s / dt)) + 1
    time_s = np.arange(n) * dt
    heater_freq = np.empty(n)
    detuning = np.empty(n)
    offset_rec = np.empty(n)
    p_circ = np.empty(n)
    t_probe = np.empty(n)

    off = target_offset
    integral = 0.0
    out_of_band = 0
    for k in range(n):
        d_ext = float(disturbance(time_s[k])) if disturbance is not None else 0.0
        res_pos = off + d_ext
        t_p = probe_transmission(nu_probe - res_pos, cavity)
        err = t_p - config.setpoint
        if abs(err) > capture_band:
            out_of_band += 1
            if out_of_band > CAPTURE_PATIENCE:
                raise LockLost(
                    f"probe transmission out of capture range for {out_of_band} steps",
                    time_s=float(time_s[k]),
                )
        else:
            out_of_band = 0
        integral += config.gain_i * err * dt
        nu_h = heater_base + integral
        dh = nu_h - res_pos
        pc = circulating_power(dh, config.heater_power, cavity)
        heater_freq[k] = nu_h
        detuning[k] = dh
        offset_rec[k] = res_pos
        p_circ[k] = pc
        t_probe[k] = t_p
        off = relax(off, pc, thermal, dt)

    res_err = offset_rec - target_offset
    band = 0.05 * w
    abs_err = np.abs(res_err)
    metrics = {
        "rms_transmission_error": float(np.sqrt(np.mean((t_probe - config.setpoint) ** 2))),
        "rms_resonance_error_hz": float(np.sqrt(np.mean(res_err ** 2))),
        "relock_time_s": _dwell_above(time_s, abs_err, band),
        "final_resonance_offset_hz": float(offset_rec[-1]),
        "max_resonance_error_hz": float(abs_err.max()),
    }
    return TimeSeries(
        time_s=time_s,
        heater_freq_hz=heater_freq,
        heater_detuning_hz=detuning,
        resonance_offset_hz=offset_rec,
        p_circ_w=p_circ,
        probe_transmission=t_probe,
        metrics=metrics,
    )


def step_disturbance(t0_s: float, size_hz: float):
    """Step perturbation: 0 before t0_s, size_hz after."""
    return lambda t: size_hz if t >= t0_s else 0.0


def default_lock_config(cavity: CavityParams, thermal: ThermalParams | None = None) -> LockConfig:
    """Demo lock configuration: mid-fringe setpoint, verified-stable gain."""
    thermal = thermal or ThermalParams()
    return LockConfig(
        setpoint=1.0 - dip_depth(cavity) / 2.0,
        gain_i=1.0e9,
        probe_power=140e-9,
        heater_power=2e-3,
        dt=thermal.tau_th / 40.0,
    )
