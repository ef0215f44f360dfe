"""Semiclassical steady state of the driven atom-cavity system.

The model: a probe field drives a fiber ring cavity containing an ensemble of
two-level emitters with collective cooperativity C. In normalized variables
the steady-state intracavity amplitude X obeys

    y = i X (1 + i dc + 4 C (1 - i da) / (1 + da^2 + 2 |X|^2)),

with y the (real, >= 0) drive amplitude, dc and da the cavity and atom
detunings in units of kappa and gamma_perp. Writing u = |X|^2 and taking the
modulus squared turns this into a cubic in u,

    |y|^2 D^2 = u [ (D + 4C)^2 + (dc D - 4C da)^2 ],   D = 1 + da^2 + 2u,

whose real non-negative roots are the steady-state intensities (one or three;
three only in the bistable regime). Normalized transmission out of the single
coupler is

    T = |1 - (2i/y) (kappa_ex/kappa) X|^2.

All solver code is vectorized over parameter tuples; every root is certified
against the cubic's residual before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.constants import c as C_VACUUM
from scipy.constants import h as H_PLANCK

from .errors import DivergentDrive, NoRealRoot, NumericalInstability
from .params import CavityParams, DriveParams, EnsembleParams
from .units import TWO_PI

#: relative residual bound every returned root must satisfy
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class BranchPolicy:
    """Rule for choosing among multiple steady-state intensity roots.

    mode is one of "lowest", "highest", "follow_sweep". follow_sweep keeps
    the branch continuous along a monotone sweep and therefore only makes
    sense inside spectrum(); direction gives the traversal order of the grid.
    """

    mode: str = "lowest"
    direction: str = "up"

    def __post_init__(self):
        if self.mode not in ("lowest", "highest", "follow_sweep"):
            raise ValueError(f"unknown branch mode {self.mode!r}")
        if self.direction not in ("up", "down"):
            raise ValueError(f"unknown sweep direction {self.direction!r}")


LOWEST = BranchPolicy("lowest")
HIGHEST = BranchPolicy("highest")


@dataclass(frozen=True)
class SteadyStateSolution:
    """Root set and the selected branch for one parameter tuple.

    roots_u are all real non-negative intensities sorted ascending;
    selected_u is the branch chosen by policy; field_x the complex amplitude
    on that branch; transmission the normalized output power.
    """

    roots_u: tuple
    selected_u: float
    field_x: complex
    transmission: float


def _cubic_coeffs(y2, delta_c, delta_a, cooperativity):
    """Coefficients (c3, c2, c1, c0) of the intensity cubic, broadcast."""
    a0 = 1.0 + delta_a * delta_a
    p = a0 + 4.0 * cooperativity
    q = delta_c * a0 - 4.0 * cooperativity * delta_a
    c3 = 4.0 * (1.0 + delta_c * delta_c) * np.ones_like(y2)
    c2 = 4.0 * (p + q * delta_c - y2)
    c1 = p * p + q * q - 4.0 * y2 * a0
    c0 = -y2 * a0 * a0
    return c3, c2, c1, c0


def _cubic_roots(c3, c2, c1, c0):
    """All real roots of each cubic, NaN-padded to shape (n, 3).

    Trigonometric form for the three-real-root case, Cardano with real cube
    roots otherwise, then a short Newton polish on the original coefficients
    (analytic formulas lose digits near double roots).
    """
    p = c2 / c3
    q = c1 / c3
    r = c0 / c3
    a = q - p * p / 3.0
    b = 2.0 * p ** 3 / 27.0 - p * q / 3.0 + r
    roots = np.full(p.shape + (3,), np.nan)
    disc = -4.0 * a ** 3 - 27.0 * b * b
    three = disc > 0.0
    if np.any(three):
        at, bt = a[three], b[three]
        m = 2.0 * np.sqrt(-at / 3.0)  # disc > 0 implies a < 0
        theta = np.arccos(np.clip(3.0 * bt / (at * m), -1.0, 1.0))
        for k in range(3):
            roots[three, k] = m * np.cos((theta - TWO_PI * k) / 3.0)
    one = ~three
    if np.any(one):
        ao, bo = a[one], b[one]
        d = np.sqrt(np.maximum(bo * bo / 4.0 + ao ** 3 / 27.0, 0.0))
        roots[one, 0] = np.cbrt(-bo / 2.0 + d) + np.cbrt(-bo / 2.0 - d)
    roots -= (p / 3.0)[..., None]
    c3e, c2e, c1e, c0e = (np.asarray(c)[..., None] for c in (c3, c2, c1, c0))
    for _ in range(3):
        f = ((c3e * roots + c2e) * roots + c1e) * roots + c0e
        fp = (3.0 * c3e * roots + 2.0 * c2e) * roots + c1e
        roots = roots - np.where(np.abs(fp) > 0.0, f / np.where(fp == 0.0, 1.0, fp), 0.0)
    return roots


def _residual_scale(u, c3, c2, c1, c0):
    return (
        np.abs(c3 * u ** 3) + np.abs(c2 * u * u) + np.abs(c1 * u) + np.abs(c0) + 1e-300
    )


def _roots_grid(y2, delta_c, delta_a, cooperativity):
    """Certified real non-negative roots for broadcast parameter arrays.

    Returns (roots, counts): roots is NaN-padded shape (n, 3) sorted
    ascending with NaNs last, counts the per-tuple root count; n is the
    broadcast size of the inputs flattened to one axis.
    """
    arrs = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (y2, delta_c, delta_a, cooperativity))
    )
    y2, delta_c, delta_a, cooperativity = (np.atleast_1d(a).ravel() for a in arrs)
    if not all(np.all(np.isfinite(a)) for a in (y2, delta_c, delta_a, cooperativity)):
        raise NumericalInstability("non-finite solver input")
    c3, c2, c1, c0 = _cubic_coeffs(y2, delta_c, delta_a, cooperativity)
    roots = _cubic_roots(c3, c2, c1, c0)
    scale = _residual_scale(roots, c3[:, None], c2[:, None], c1[:, None], c0[:, None])
    f = ((c3[:, None] * roots + c2[:, None]) * roots + c1[:, None]) * roots + c0[:, None]
    ok = ~np.isnan(roots)
    # negative-by-rounding roots of the y=0 case clamp to zero
    tiny = -1e-12 * (1.0 + np.abs(roots))
    ok &= roots > tiny
    bad = ok & (np.abs(f) > RESIDUAL_TOL * scale)
    if np.any(bad):
        where = np.unique(np.nonzero(bad)[0])
        raise NumericalInstability(
            f"{int(bad.sum())} root(s) failed residual certification at tol "
            f"{RESIDUAL_TOL}, first at grid index {int(where[0])}"
        )
    roots = np.where(ok, np.maximum(roots, 0.0), np.nan)
    roots = np.sort(roots, axis=-1)  # NaNs sort last
    counts = ok.sum(axis=-1)
    if np.any(counts == 0):
        idx = int(np.nonzero(counts == 0)[0][0])
        raise NoRealRoot(f"cubic produced no physical root at grid index {idx} (solver failure)")
    return roots, counts


def solve_intensity(y, delta_c, delta_a, cooperativity):
    """Real non-negative roots u = |X|^2 of the intensity cubic.

    Parameters
    ----------
    y : float
        Drive amplitude, real >= 0.
    delta_c, delta_a : float
        Normalized cavity and atom detunings.
    cooperativity : float
        Collective cooperativity C >= 0.

    Returns
    -------
    numpy.ndarray
        Sorted ascending; length 1 to 3. Every root satisfies the cubic with
        relative residual below RESIDUAL_TOL.
    """
    roots, counts = _roots_grid(np.float64(y) ** 2, delta_c, delta_a, cooperativity)
    return roots[0, : int(counts[0])]


def field_from_root(y, delta_c, delta_a, cooperativity, u):
    """Complex intracavity amplitude X on the branch with intensity u.

    Algebraic inversion of the steady-state relation at fixed u:
    X = y / (i F(u)) with F = 1 + i dc + 4C (1 - i da) / (1 + da^2 + 2u).
    """
    d = 1.0 + delta_a * delta_a + 2.0 * u
    f = 1.0 + 1j * delta_c + 4.0 * cooperativity * (1.0 - 1j * delta_a) / d
    return y / (1j * f)


def _transmission_from_u(u, delta_c, delta_a, cooperativity, kappa_ratio):
    """T on a known branch; |1 - 2r/F|^2 is Eq-of-motion form of the output."""
    d = 1.0 + delta_a * delta_a + 2.0 * u
    f = 1.0 + 1j * delta_c + 4.0 * cooperativity * (1.0 - 1j * delta_a) / d
    t_amp = 1.0 - 2.0 * kappa_ratio / f
    return np.abs(t_amp) ** 2


def solve(y, delta_c, delta_a, cooperativity, kappa_ratio, policy: BranchPolicy = LOWEST):
    """Full steady-state solution for one parameter tuple.

    Returns a SteadyStateSolution holding all roots, the branch selected by
    policy ("lowest" or "highest"; follow_sweep needs a sweep context, use
    spectrum()), the complex field on it, and the transmission.
    """
    if not (y > 0.0):
        raise DivergentDrive("y must be > 0 here; use weak_transmission for the y -> 0 limit")
    roots = solve_intensity(y, delta_c, delta_a, cooperativity)
    if policy.mode == "follow_sweep":
        raise ValueError("follow_sweep requires a sweep; use spectrum()")
    u = roots[-1] if policy.mode == "highest" else roots[0]
    x = field_from_root(y, delta_c, delta_a, cooperativity, u)
    t = float(np.abs(1.0 - (2j / y) * kappa_ratio * x) ** 2)
    return SteadyStateSolution(tuple(roots), float(u), complex(x), t)


def transmission(y, delta_c, delta_a, cooperativity, kappa_ratio, policy: BranchPolicy = LOWEST):
    """Normalized transmission T = |1 - (2i/y)(kappa_ex/kappa) X|^2."""
    return solve(y, delta_c, delta_a, cooperativity, kappa_ratio, policy).transmission


def weak_transmission(delta_c, delta_a, cooperativity, kappa_ratio):
    """Closed-form transmission in the weak-driving limit y -> 0.

    T = |1 - (2 kappa_ex/kappa) / (1 + i dc + 4C (1 - i da)/(1 + da^2))|^2.
    Accepts scalars or arrays.
    """
    delta_c = np.asarray(delta_c, dtype=float)
    a0 = 1.0 + np.asarray(delta_a, dtype=float) ** 2
    f = 1.0 + 1j * delta_c + 4.0 * cooperativity * (1.0 - 1j * np.asarray(delta_a)) / a0
    out = np.abs(1.0 - 2.0 * kappa_ratio / f) ** 2
    return out if out.ndim else float(out)


def drive_from_power(p_in, cavity: CavityParams, n_sat):
    """Dimensionless drive intensity |y|^2 for input power p_in (W).

    |y|^2 = (P_in / (2 kappa n_sat)) (2 kappa_ex / kappa) (lambda_p / (2 pi hbar c));
    the last factor is the input photon flux P_in lambda/(h c).
    """
    flux = p_in * cavity.lambda_p / (H_PLANCK * C_VACUUM)
    return flux / (2.0 * cavity.kappa * n_sat) * (2.0 * cavity.kappa_ex / cavity.kappa)


def power_from_drive(y2, cavity: CavityParams, n_sat):
    """Inverse of drive_from_power; exact round trip up to rounding."""
    flux = y2 * (2.0 * cavity.kappa * n_sat) / (2.0 * cavity.kappa_ex / cavity.kappa)
    return flux * (H_PLANCK * C_VACUUM) / cavity.lambda_p


def drive_y2(drive: DriveParams, cavity: CavityParams, n_sat) -> float:
    """|y|^2 of a DriveParams, converting from power iff power is the set field."""
    if drive.y is not None:
        return drive.y ** 2
    return drive_from_power(drive.input_power, cavity, n_sat)


def cooperativity_from_couplings(g_values, kappa, gamma_perp):
    """Collective cooperativity C = sum_j g_j^2 / (2 kappa gamma_perp)."""
    g = np.asarray(g_values, dtype=float)
    if g.size and np.any(g < 0):
        raise ValueError("coupling strengths must be >= 0")
    return float(np.sum(g * g) / (2.0 * kappa * gamma_perp))


def g_eff_from_nsat(n_sat, gamma_perp, gamma_par):
    """Effective single-emitter coupling from the saturation photon number.

    Inverts n_sat = gamma_perp gamma_par / (4 g_eff^2).
    """
    return float(np.sqrt(gamma_perp * gamma_par / (4.0 * n_sat)))


def n_sat_from_geff(g_eff, gamma_perp, gamma_par):
    """Saturation photon number gamma_perp gamma_par / (4 g_eff^2)."""
    return float(gamma_perp * gamma_par / (4.0 * g_eff ** 2))


def n_eff_from_c(cooperativity, g_eff, kappa, gamma_perp):
    """Effective emitter number from C = N_eff g_eff^2 / (2 kappa gamma_perp)."""
    return float(2.0 * kappa * gamma_perp * cooperativity / g_eff ** 2)


def splitting_estimate(cooperativity, kappa, gamma_perp):
    """Normal-mode splitting scale 4 sqrt(kappa gamma_perp C) / (2 pi), in Hz."""
    if not (cooperativity > 0):
        return 0.0
    return float(4.0 * np.sqrt(kappa * gamma_perp * cooperativity) / TWO_PI)


def spectrum(
    detuning_hz,
    cavity: CavityParams,
    ensemble: EnsembleParams,
    drive: DriveParams,
    lock_detunings: bool = True,
    atom_offset_hz: float = 0.0,
    policy: BranchPolicy = LOWEST,
):
    """Transmission sampled over a probe detuning grid.

    Parameters
    ----------
    detuning_hz : array_like
        Monotone probe detuning axis in Hz (plain frequency).
    lock_detunings : bool
        True models the cavity resonance aligned with the atomic transition
        (delta_atom = delta_cavity along the scan). False offsets the atomic
        transition by atom_offset_hz from the cavity resonance. A nonzero
        atom_offset_hz implies the independent condition.
    policy : BranchPolicy
        Branch selection; "follow_sweep" walks the grid in policy.direction
        and keeps the intensity branch continuous.

    Returns
    -------
    numpy.ndarray
        Transmission at each grid point. Solver failures are re-raised with
        the offending grid index attached.
    """
    nu = np.asarray(detuning_hz, dtype=float)
    if nu.ndim != 1 or nu.size < 2 or not (np.all(np.diff(nu) > 0) or np.all(np.diff(nu) < 0)):
        raise ValueError("detuning grid must be 1-d and strictly monotone")
    omega = TWO_PI * nu
    delta_c = omega / cavity.kappa
    if lock_detunings and atom_offset_hz == 0.0:
        delta_a = omega / ensemble.gamma_perp
    else:
        delta_a = (omega - TWO_PI * atom_offset_hz) / ensemble.gamma_perp
    y2 = drive_y2(drive, cavity, ensemble.n_sat)
    c = ensemble.cooperativity
    r = cavity.kappa_ratio
    if y2 == 0.0:
        return weak_transmission(delta_c, delta_a, c, r)
    try:
        roots, counts = _roots_grid(np.full_like(nu, y2), delta_c, delta_a, c)
    except NumericalInstability as exc:
        raise NumericalInstability(f"{exc} (in spectrum sweep)") from exc
    if policy.mode == "lowest":
        u = roots[:, 0]
    elif policy.mode == "highest":
        u = np.take_along_axis(roots, counts[:, None] - 1, axis=1)[:, 0]
    else:
        order = range(nu.size) if policy.direction == "up" else range(nu.size - 1, -1, -1)
        u = np.empty(nu.size)
        prev = None
        for i in order:
            avail = roots[i, : counts[i]]
            if prev is None:
                prev = avail[0]
            prev = avail[np.argmin(np.abs(avail - prev))]
            u[i] = prev
    return _transmission_from_u(u, delta_c, delta_a, c, r)
