"""Closed-form frequency-domain response of the spin-loaded bimodal cavity.

The two circularly polarized cavity modes see the spin ensemble detuned by
Delta_q +/- (A + delta).  Everything downstream (probabilities, Fisher
information, noise budgets) is built from the complex reflection amplitudes
of the two branches and their shift derivatives, all of which are computed
here in one vectorized kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SystemParams

# Polarization basis change (a_H, a_V) -> (a_+, a_-) and back.
# Columns follow H = (s+ + s-)/sqrt(2), V = i(s+ - s-)/sqrt(2).
_HV_TO_CIRC = np.array([[1.0, 1.0j], [1.0, -1.0j]]) / np.sqrt(2.0)
_CIRC_TO_HV = _HV_TO_CIRC.conj().T


@dataclass(frozen=True)
class BranchResponse:
    """Reflection amplitude of one circular branch with shift derivatives."""

    r: np.ndarray
    dr: np.ndarray  # d r / d shift, 1/Hz
    d2r: np.ndarray  # d^2 r / d shift^2, 1/Hz^2
    singular: np.ndarray  # True where the spin line is exactly undamped-resonant


def branch_response(params: SystemParams, shift, branch: int) -> BranchResponse:
    """Evaluate r_branch and its derivatives at total shift(s) A + delta.

    `shift` may be a scalar or an array of total level shifts in Hz.
    The reflection is computed in the pole-free form
        r = -1 + 2 kappa_ex E / u,   u = (i Delta_r + kappa) E + G^2,
    with E = i[Delta_q + branch*shift] + gamma/2, which stays finite at the
    undamped spin resonance (E = 0, G > 0) where r -> -1 exactly.
    """
    if branch not in (+1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    x = np.asarray(shift, dtype=float)
    E = 1j * (params.Delta_q + branch * x) + params.gamma / 2.0
    cav = 1j * params.Delta_r + params.kappa
    u = cav * E + params.G**2

    singular = (E == 0) & (params.G > 0)
    if params.G == 0:
        # Empty cavity: branch- and shift-independent.
        r_empty = -1.0 + 2.0 * params.kappa_ex / cav
        r = np.broadcast_to(r_empty, x.shape).copy() if x.shape else np.asarray(r_empty)
        zero = np.zeros_like(r)
        return BranchResponse(r=r, dr=zero, d2r=zero.copy(),
                              singular=np.zeros_like(x, dtype=bool))

    r = -1.0 + 2.0 * params.kappa_ex * E / u
    dr = branch * 2j * params.kappa_ex * params.G**2 / u**2
    d2r = 4.0 * params.kappa_ex * params.G**2 * cav / u**3
    return BranchResponse(r=r, dr=dr, d2r=d2r, singular=singular)


def reflection_coefficient(params: SystemParams, branch: int) -> complex:
    """Complex reflection amplitude r_+ or r_- at the params' bias point."""
    resp = branch_response(params, params.shift, branch)
    return complex(resp.r)


def is_singular(params: SystemParams, branch: int) -> bool:
    """True when the selected branch sits exactly on an undamped spin line."""
    return bool(branch_response(params, params.shift, branch).singular)


def _wrap_half_pi(phi: float) -> float:
    """Wrap an angle to the principal interval (-pi/2, pi/2]."""
    if phi > np.pi / 2:
        phi -= np.pi
    elif phi <= -np.pi / 2:
        phi += np.pi
    return phi


@dataclass(frozen=True)
class PolarizedReflection:
    """Both branch amplitudes and the derived polarization quantities."""

    r_plus: complex
    r_minus: complex
    r_bar: float
    delta_r: float
    phi_F: float  # radians, principal value in (-pi/2, pi/2]
    r_HH: complex
    r_VH: complex
    singular: bool


def polarized_reflection(params: SystemParams) -> PolarizedReflection:
    rp = branch_response(params, params.shift, +1)
    rm = branch_response(params, params.shift, -1)
    r_plus = complex(rp.r)
    r_minus = complex(rm.r)
    mp_, mm = abs(r_plus), abs(r_minus)
    phi = 0.5 * (np.angle(r_plus) - np.angle(r_minus))
    return PolarizedReflection(
        r_plus=r_plus,
        r_minus=r_minus,
        r_bar=0.5 * (mp_ + mm),
        delta_r=0.5 * (mp_ - mm),
        phi_F=_wrap_half_pi(float(phi)),
        r_HH=0.5 * (r_plus + r_minus),
        r_VH=0.5 * (r_plus - r_minus),
        singular=bool(rp.singular) or bool(rm.singular),
    )


@dataclass(frozen=True)
class ScatteringMatrices:
    """Reflection matrix S_r and internal-noise transfer matrix S_t (H/V basis)."""

    S_r: np.ndarray  # 2x2 complex
    S_t: np.ndarray  # 2x2 complex, carries sqrt(kappa_i/kappa_ex)


def scattering_matrices(params: SystemParams) -> ScatteringMatrices:
    """Build S_r and S_t from the branch reflections.

    S_t is expressed through t_pm = 1 + r_pm; its off-diagonal signs follow
    the same +i/-i structure as S_r (both describe fields entering the same
    two circular modes, only the coupling rate differs).
    """
    if params.kappa_ex <= 0:
        raise ValueError("kappa_ex must be > 0: internal-noise transfer "
                         "through the port is undefined at kappa_ex = 0")
    pol = polarized_reflection(params)
    r_hh, r_vh = pol.r_HH, pol.r_VH
    S_r = np.array([[r_hh, 1j * r_vh], [-1j * r_vh, r_hh]])
    pref = np.sqrt(params.kappa_i / params.kappa_ex)
    S_t = pref * np.array([[1.0 + r_hh, 1j * r_vh], [-1j * r_vh, 1.0 + r_hh]])
    return ScatteringMatrices(S_r=S_r, S_t=S_t)


def basis_convert(field: np.ndarray, direction: str) -> np.ndarray:
    """Convert a 2-vector field between the H/V and sigma+/- bases.

    direction: "hv_to_circular" or "circular_to_hv".  The conversion is
    unitary; a round trip reproduces the input to machine precision.
    """
    v = np.asarray(field, dtype=complex)
    if v.shape != (2,):
        raise ValueError(f"field must be a 2-vector, got shape {v.shape}")
    if direction == "hv_to_circular":
        return _HV_TO_CIRC @ v
    if direction == "circular_to_hv":
        return _CIRC_TO_HV @ v
    raise ValueError(f"unknown direction {direction!r}")
