"""Single-photon probe: outcome probabilities, Fisher information, sensitivity.

A horizontally polarized single photon reflects off the cavity and is
detected in one of three outcomes: V photon, H photon, or no photon (lost
into the intrinsic channel).  The Fisher information of that three-outcome
distribution with respect to the magnetic level shift sets the Cramer-Rao
sensitivity floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import MU_B_GE
from .params import SystemParams
from .peaks import NoFeatureError, PeakInfo, extract_peak, golden_section_max
from .spectra import branch_response, polarized_reflection

# Below this probability the direct (dP)^2/P quotient is numerically
# meaningless and the analytic quadratic-zero limit 2*P'' is used instead.
VANISHING_P = 1e-15


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities of the three single-photon detection outcomes."""

    p_v: float
    p_h: float
    p_empty: float  # defined as 1 - p_v - p_h, exact by construction
    singular: bool = False


@dataclass(frozen=True)
class FisherInfo:
    """Fisher information in SI (1/T^2) and in (mu_B g_e / kappa_i)^2 units."""

    si: float
    scaled: float


@dataclass(frozen=True)
class FisherCurve:
    """Sampled Fisher curve over the signal shift with extracted peak data."""

    grid: np.ndarray  # shift values, Hz
    values: np.ndarray  # scaled Fisher, (mu_B g_e / kappa_i)^2 units
    peak: PeakInfo  # locations/widths in Hz


@dataclass(frozen=True)
class SensitivityReport:
    """Cramer-Rao sensitivity with the conventions that produced it."""

    value: float  # T / sqrt(Hz)
    scaled_value: float  # in sqrt(kappa_i)/(mu_B g_e) units
    fisher_peak: FisherInfo
    peak_location: float  # Hz
    fwhm: float  # Hz
    tau_m: float  # s, = 1/fwhm
    convention_notes: str
    parameter_echo: SystemParams


CONVENTION_NOTES = (
    "rates are cyclic frequencies (Hz); tau_m = 1/FWHM with no 2*pi; "
    "FWHM is the two-sided width of the contiguous region above half "
    "maximum around the curve peak; photon energy uses E = hbar*2*pi*f"
)


def _prob_arrays(params: SystemParams, shifts):
    """Probabilities and their first/second shift derivatives, vectorized.

    Returns three (3, n) arrays ordered (V, H, empty).  Derivatives are with
    respect to the total shift in Hz.
    """
    rp = branch_response(params, shifts, +1)
    rm = branch_response(params, shifts, -1)
    r_vh = 0.5 * (rp.r - rm.r)
    r_hh = 0.5 * (rp.r + rm.r)
    d_vh = 0.5 * (rp.dr - rm.dr)
    d_hh = 0.5 * (rp.dr + rm.dr)
    d2_vh = 0.5 * (rp.d2r - rm.d2r)
    d2_hh = 0.5 * (rp.d2r + rm.d2r)

    p_v = np.abs(r_vh) ** 2
    p_h = np.abs(r_hh) ** 2
    p_e = 1.0 - (p_v + p_h)  # this grouping makes the sum exactly 1.0
    dp_v = 2.0 * (np.conj(r_vh) * d_vh).real
    dp_h = 2.0 * (np.conj(r_hh) * d_hh).real
    dp_e = -dp_v - dp_h
    d2p_v = 2.0 * (np.abs(d_vh) ** 2 + (np.conj(r_vh) * d2_vh).real)
    d2p_h = 2.0 * (np.abs(d_hh) ** 2 + (np.conj(r_hh) * d2_hh).real)
    d2p_e = -d2p_v - d2p_h
    P = np.stack([np.atleast_1d(p_v), np.atleast_1d(p_h), np.atleast_1d(p_e)])
    dP = np.stack([np.atleast_1d(dp_v), np.atleast_1d(dp_h), np.atleast_1d(dp_e)])
    d2P = np.stack([np.atleast_1d(d2p_v), np.atleast_1d(d2p_h), np.atleast_1d(d2p_e)])
    return P, dP, d2P


def outcome_probabilities(params: SystemParams) -> OutcomeDistribution:
    """P_V, P_H and the loss outcome for a single H-polarized probe photon.

    Detector efficiency is unity; the empty outcome is photon loss through
    the intrinsic channel, not detector noise.
    """
    pol = polarized_reflection(params)
    p_v = abs(pol.r_VH) ** 2
    p_h = abs(pol.r_HH) ** 2
    return OutcomeDistribution(p_v=p_v, p_h=p_h, p_empty=1.0 - (p_v + p_h),
                               singular=pol.singular)


def outcome_probabilities_trig(params: SystemParams) -> tuple[float, float]:
    """(P_V, P_H) via the r_bar/delta_r/phi_F form, for cross-checking."""
    pol = polarized_reflection(params)
    s2, c2 = np.sin(pol.phi_F) ** 2, np.cos(pol.phi_F) ** 2
    p_v = pol.r_bar**2 * s2 + pol.delta_r**2 * c2
    p_h = pol.r_bar**2 * c2 + pol.delta_r**2 * s2
    return float(p_v), float(p_h)


def probability_derivatives(params: SystemParams) -> np.ndarray:
    """Analytic (dP_V/ddelta, dP_H/ddelta, dP_empty/ddelta) in 1/Hz."""
    _, dP, _ = _prob_arrays(params, params.shift)
    return dP[:, 0].copy()


def _fisher_scaled(params: SystemParams, shifts) -> np.ndarray:
    """Scaled three-outcome Fisher information, vectorized over shifts."""
    P, dP, d2P = _prob_arrays(params, shifts)
    ki = params.kappa_i
    total = np.zeros(P.shape[1])
    for Pi, dPi, d2Pi in zip(P, dP, d2P):
        tiny = Pi < VANISHING_P
        quotient = dPi**2 / np.where(tiny, 1.0, Pi)
        limit = np.maximum(2.0 * d2Pi, 0.0)
        total += np.where(tiny, limit, quotient)
    return total * ki**2


def fisher_information_sp(params: SystemParams) -> FisherInfo:
    """Three-outcome Fisher information at the params' bias point.

    Outcomes with probability below 1e-15 contribute their quadratic-zero
    limit 2 * d2P/dshift2 (the finite limit of (dP)^2/P at a zero of P),
    evaluated from the analytic second derivative.
    """
    scaled = float(_fisher_scaled(params, params.shift)[0])
    return FisherInfo(si=scaled * (MU_B_GE / params.kappa_i) ** 2, scaled=scaled)


def fisher_curve(params: SystemParams, delta_grid) -> FisherCurve:
    """Fisher information sampled over a grid of signal shifts delta.

    The grid must be strictly increasing with at least 16 points spanning
    the feature; peak and FWHM come from linear interpolation of the
    half-max crossings.  Raises NoFeatureError for flat curves (e.g. G=0).
    """
    grid = np.asarray(delta_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 16:
        raise ValueError("delta_grid must be a 1-d grid with >= 16 points")
    if not np.all(np.diff(grid) > 0):
        raise ValueError("delta_grid must be strictly increasing")
    values = _fisher_scaled(params, params.A + grid)
    peak = extract_peak(grid, values)
    return FisherCurve(grid=grid, values=values, peak=peak)


def fisher_peak_info(params: SystemParams, curve: FisherCurve) -> FisherInfo:
    return FisherInfo(si=curve.peak.value * (MU_B_GE / params.kappa_i) ** 2,
                      scaled=curve.peak.value)


def sensitivity_sp(params: SystemParams, delta_grid) -> SensitivityReport:
    """Single-photon Cramer-Rao sensitivity from the Fisher curve.

    DeltaB * sqrt(tau_total) = sqrt(tau_m) / sqrt(F_peak) with
    tau_m = 1/FWHM of the Fisher feature.
    """
    curve = fisher_curve(params, delta_grid)
    fwhm = curve.peak.fwhm
    tau_m = 1.0 / fwhm
    fi = fisher_peak_info(params, curve)
    value = np.sqrt(tau_m) / np.sqrt(fi.si)
    scaled = 1.0 / np.sqrt((fwhm / params.kappa_i) * fi.scaled)
    return SensitivityReport(
        value=float(value),
        scaled_value=float(scaled),
        fisher_peak=fi,
        peak_location=curve.peak.location,
        fwhm=fwhm,
        tau_m=tau_m,
        convention_notes=CONVENTION_NOTES,
        parameter_echo=params,
    )


def optimal_bias(params: SystemParams, search_range: tuple[float, float],
                 coarse_points: int = 129) -> tuple[float, FisherInfo]:
    """Bias shift maximizing the Fisher information inside the search range.

    A coarse scan brackets the maximum (ties broken toward smaller |A|),
    then golden-section search refines it.  The Fisher information is
    evaluated at total shift A with delta -> 0, so the returned bias lives
    on the same axis as the signal shift.
    """
    lo, hi = float(search_range[0]), float(search_range[1])
    if not hi > lo:
        raise ValueError("search_range must satisfy hi > lo")
    scan = np.linspace(lo, hi, coarse_points)
    vals = _fisher_scaled(params, scan)

    vmax = np.max(vals)
    if not vmax > 0 or vmax == np.min(vals):
        raise NoFeatureError("no interior maximum: Fisher curve is flat in range")
    candidates = np.flatnonzero(vals == vmax)
    i = int(candidates[np.argmin(np.abs(scan[candidates]))])
    if i == 0 or i == coarse_points - 1:
        raise NoFeatureError("no interior maximum inside the search range")

    def f(a: float) -> float:
        return float(_fisher_scaled(params, np.array([a]))[0])

    a_opt, f_opt = golden_section_max(f, scan[i - 1], scan[i + 1],
                                      tol=1e-12)
    return a_opt, FisherInfo(si=f_opt * (MU_B_GE / params.kappa_i) ** 2,
                             scaled=f_opt)
