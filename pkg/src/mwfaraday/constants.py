"""Physical constants used throughout the toolkit.

All coupling/decay/detuning rates in this package are cyclic frequencies
(plain Hz, no 2*pi).  Photon energies are the one place where the angular
convention enters: E = hbar * (2*pi*f).  Both choices are echoed in every
emitted manifest.
"""

from dataclasses import dataclass

import numpy as np

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J/K

# Electron gyromagnetic ratio mu_B * g_e for g_e = 2, in Hz/T (cyclic).
# 14 MHz/mT per Bohr magneton times g_e = 2 -> 28 MHz/mT = 2.8e10 Hz/T.
MU_B_GE = 2.8e10


def photon_energy(frequency_hz: float) -> float:
    """Photon energy in joules for a cyclic frequency in Hz."""
    return HBAR * 2.0 * np.pi * frequency_hz


@dataclass(frozen=True)
class PhysicalConstants:
    """Constant bundle echoed into run manifests."""

    mu_B_ge: float = MU_B_GE  # Hz/T
    hbar: float = HBAR  # J s
    k_B: float = K_B  # J/K

    def manifest_lines(self) -> list[str]:
        return [
            f"constant: mu_B_ge = {self.mu_B_ge!r} Hz/T",
            f"constant: hbar = {self.hbar!r} J s",
            f"constant: k_B = {self.k_B!r} J/K",
        ]


CONSTANTS = PhysicalConstants()
