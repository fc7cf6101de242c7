"""Frequency-domain steady state of the cavity/spin Langevin equations.

This module is an independent cross-check for the closed-form reflection:
it solves the 2x2 linear system for the intracavity and collective-spin
amplitudes directly and reconstructs the reflection and the noise routing
from input-output relations, never touching the closed form in spectra.py.

The drive injection amplitude is sqrt(2*kappa_ex) and the output relation
is a_out = -a_in + sqrt(2*kappa_ex) a.  That convention is fixed by the
equivalence test against the closed-form reflection rather than assumed.
Collective spin modes carry no independent noise input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SystemParams


class SingularSystemError(RuntimeError):
    """Raised when the steady-state linear system has an undamped mode."""


@dataclass(frozen=True)
class LinearSystem2:
    """Drift matrix and drive injection vector for one circular branch."""

    drift: np.ndarray  # 2x2 complex, rotating frame at the drive frequency
    input_vec: np.ndarray  # 2-vector complex


def linear_system(params: SystemParams, branch: int,
                  drive_detuning: float = 0.0,
                  drive_amplitude: complex = 1.0,
                  input_rate: float | None = None) -> LinearSystem2:
    """Assemble the rotating-frame drift and drive for one branch.

    `drive_detuning` shifts the solve frequency relative to the carrier the
    params' detunings are referenced to.  `input_rate` is the coupling rate
    of the driven channel (defaults to kappa_ex; the intrinsic channel is
    used for internal-noise routing).
    """
    if branch not in (+1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    rate = params.kappa_ex if input_rate is None else input_rate
    dr = params.Delta_r - drive_detuning
    dq = params.Delta_q - drive_detuning
    drift = np.array(
        [[-1j * dr - params.kappa, -1j * params.G],
         [-1j * params.G, -1j * (dq + branch * params.shift) - params.gamma / 2.0]],
        dtype=complex)
    input_vec = np.array([np.sqrt(2.0 * rate) * drive_amplitude, 0.0], dtype=complex)
    return LinearSystem2(drift=drift, input_vec=input_vec)


def steady_state_amplitudes(params: SystemParams, branch: int,
                            drive_detuning: float = 0.0,
                            drive_amplitude: complex = 1.0,
                            input_rate: float | None = None) -> tuple[complex, complex]:
    """Solve for the steady-state (cavity, spin) amplitudes under a coherent drive."""
    sys2 = linear_system(params, branch, drive_detuning, drive_amplitude, input_rate)
    try:
        a, c = np.linalg.solve(-sys2.drift, sys2.input_vec)
    except np.linalg.LinAlgError as exc:
        diag = np.diag(sys2.drift)
        undamped = "spin" if abs(diag[1].real) <= abs(diag[0].real) else "cavity"
        raise SingularSystemError(
            f"steady-state system is singular: the {undamped} mode is undamped "
            f"on resonance (drift diagonal {diag})") from exc
    return complex(a), complex(c)


def oracle_reflection(params: SystemParams, branch: int,
                      drive_detuning: float = 0.0) -> complex:
    """Reflection amplitude reconstructed from the linear solve."""
    a, _ = steady_state_amplitudes(params, branch, drive_detuning)
    return -1.0 + np.sqrt(2.0 * params.kappa_ex) * a


def noise_transfer_row(params: SystemParams) -> np.ndarray:
    """Coefficients of (xi_E^H, xi_I^H, xi_E^V, xi_I^V) in the V-polarized output.

    Each noise channel is decomposed onto the circular modes, propagated
    through the per-branch steady state with the appropriate coupling rate,
    routed back out through the external port, and recombined into the V
    component.  External channels carry the direct -input reflection term;
    internal channels do not reach the port directly.
    """
    if params.kappa_ex <= 0:
        raise ValueError("kappa_ex must be > 0 for noise routing to the port")

    sq2 = 1.0 / np.sqrt(2.0)
    out_rate = np.sqrt(2.0 * params.kappa_ex)

    def port_output(circ_amp: complex, branch: int, internal: bool) -> complex:
        rate = params.kappa_i if internal else params.kappa_ex
        a, _ = steady_state_amplitudes(params, branch,
                                       drive_amplitude=circ_amp, input_rate=rate)
        direct = 0.0 if internal else -circ_amp
        return direct + out_rate * a

    def v_component(out_plus: complex, out_minus: complex) -> complex:
        return -1j * (out_plus - out_minus) * sq2

    # Unit-amplitude noise in each channel, decomposed onto sigma+/-.
    coeffs = []
    for internal, (cp, cm) in (
        (False, (sq2, sq2)),          # xi_E^H
        (True, (sq2, sq2)),           # xi_I^H
        (False, (1j * sq2, -1j * sq2)),  # xi_E^V
        (True, (1j * sq2, -1j * sq2)),   # xi_I^V
    ):
        op = port_output(cp, +1, internal)
        om = port_output(cm, -1, internal)
        coeffs.append(v_component(op, om))
    return np.array(coeffs, dtype=complex)


def drift_eigenvalues(params: SystemParams, branch: int) -> np.ndarray:
    """Eigenvalues of the drift matrix; all real parts negative when stable."""
    return np.linalg.eigvals(linear_system(params, branch).drift)
