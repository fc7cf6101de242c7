"""Parameter bundles for the cavity-spin system, thermal bath and probe."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .constants import K_B, photon_energy


@dataclass(frozen=True)
class SystemParams:
    """All rates and detunings of the spin-loaded bimodal cavity.

    Every field is a cyclic frequency in Hz.  `omega_r` is the cavity
    resonance and is only used for photon energy and thermal occupation;
    the response itself depends on the detunings alone.

    kappa_i   intrinsic cavity loss rate
    kappa_ex  external (port) coupling rate
    G         collective spin-cavity coupling sqrt(N)*g
    gamma     spin decoherence rate per transition
    Delta_r   cavity detuning omega_r - omega_in
    Delta_q   spin detuning D - omega_in
    A         bias Zeeman shift mu_B g_e B0
    delta     signal shift mu_B g_e deltaB
    """

    kappa_i: float
    kappa_ex: float
    G: float
    gamma: float
    Delta_r: float = 0.0
    Delta_q: float = 0.0
    A: float = 0.0
    delta: float = 0.0
    omega_r: float = 2.8e9

    def __post_init__(self) -> None:
        if not self.kappa_i > 0:
            raise ValueError(f"kappa_i must be > 0, got {self.kappa_i}")
        if self.kappa_ex < 0:
            raise ValueError(f"kappa_ex must be >= 0, got {self.kappa_ex}")
        if self.G < 0:
            raise ValueError(f"G must be >= 0, got {self.G}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if not self.omega_r > 0:
            raise ValueError(f"omega_r must be > 0, got {self.omega_r}")
        for name in ("kappa_i", "kappa_ex", "G", "gamma", "Delta_r",
                     "Delta_q", "A", "delta", "omega_r"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def kappa(self) -> float:
        """Total cavity decay rate kappa_ex + kappa_i."""
        return self.kappa_ex + self.kappa_i

    @property
    def shift(self) -> float:
        """Total magnetic level shift A + delta acting on the spin branches."""
        return self.A + self.delta

    def with_delta(self, delta: float) -> "SystemParams":
        return replace(self, delta=float(delta))

    def with_bias(self, A: float) -> "SystemParams":
        return replace(self, A=float(A))


@dataclass(frozen=True)
class ThermalEnvironment:
    """Bath temperature and the resulting mean thermal photon number."""

    T: float  # kelvin
    n_th: float  # Bose-Einstein occupation at the cavity frequency

    def __post_init__(self) -> None:
        if self.T < 0:
            raise ValueError(f"T must be >= 0, got {self.T}")
        if self.n_th < 0:
            raise ValueError(f"n_th must be >= 0, got {self.n_th}")

    @classmethod
    def for_cavity(cls, T: float, omega_r: float) -> "ThermalEnvironment":
        from .multiphoton import thermal_occupation

        return cls(T=float(T), n_th=thermal_occupation(T, omega_r))


@dataclass(frozen=True)
class ProbeSpec:
    """Coherent probe pulse: input power, duration and mean photon number."""

    P_in: float  # watts
    tau_m: float  # seconds
    n_in: float  # mean photon number P_in * tau_m / (hbar omega_r)

    def __post_init__(self) -> None:
        if self.P_in < 0:
            raise ValueError(f"P_in must be >= 0, got {self.P_in}")
        if not self.tau_m > 0:
            raise ValueError(f"tau_m must be > 0, got {self.tau_m}")

    @classmethod
    def for_cavity(cls, P_in: float, tau_m: float, omega_r: float) -> "ProbeSpec":
        return cls(P_in=float(P_in), tau_m=float(tau_m),
                   n_in=float(P_in) * float(tau_m) / photon_energy(omega_r))


def boltzmann_energy(T: float) -> float:
    """k_B T in joules."""
    return K_B * T
