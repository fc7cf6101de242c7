"""Faraday-rotation microwave magnetometer simulator and sensitivity toolkit."""

__version__ = "0.1.0"

from .constants import CONSTANTS, HBAR, K_B, MU_B_GE, PhysicalConstants
from .params import ProbeSpec, SystemParams, ThermalEnvironment
from .spectra import (PolarizedReflection, ScatteringMatrices, basis_convert,
                      polarized_reflection, reflection_coefficient,
                      scattering_matrices)
from .langevin import (LinearSystem2, SingularSystemError, noise_transfer_row,
                       oracle_reflection, steady_state_amplitudes)
from .peaks import NoFeatureError, PeakInfo, extract_peak, feature_grid
from .single_photon import (FisherCurve, FisherInfo, OutcomeDistribution,
                            SensitivityReport, fisher_curve,
                            fisher_information_sp, optimal_bias,
                            outcome_probabilities, probability_derivatives,
                            sensitivity_sp)
from .multiphoton import (MeasurementMoments, MultiphotonSensitivity,
                          NoiseBudget, NoSignalError, fisher_v_curve,
                          measurement_moments, mw_vs_optical_factor,
                          noise_budget, nominal_fisher_v, sensitivity_mp,
                          thermal_occupation)
from .config import ConfigError, ResolvedConfig, load_config, parse_config

__all__ = [name for name in dir() if not name.startswith("_")]
