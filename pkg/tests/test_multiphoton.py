"""Thermal occupation, noise budget, moments and the multiphoton limit."""

import numpy as np
import pytest

from mwfaraday import (NoSignalError, ProbeSpec, SystemParams,
                       ThermalEnvironment, measurement_moments,
                       mw_vs_optical_factor, noise_budget, nominal_fisher_v,
                       outcome_probabilities, sensitivity_mp,
                       thermal_occupation)
from mwfaraday.constants import HBAR, K_B, photon_energy
from mwfaraday.multiphoton import fisher_v_curve
from mwfaraday.peaks import feature_grid
from mwfaraday.single_photon import fisher_information_sp


def baseline(**kw):
    base = dict(kappa_i=1.0, kappa_ex=1.0, G=1.0, gamma=1e-3)
    base.update(kw)
    return SystemParams(**base)


def optimum(ki=1.0, **kw):
    base = dict(kappa_i=ki, kappa_ex=10 * ki, G=0.1 * ki, gamma=1e-3 * ki)
    base.update(kw)
    return SystemParams(**base)


def env_70k(omega_r=2.8e9):
    return ThermalEnvironment.for_cavity(70.0, omega_r)


class TestThermalOccupation:
    def test_zero_temperature(self):
        assert thermal_occupation(0.0, 2.8e9) == 0.0

    def test_70k_microwave(self):
        n = thermal_occupation(70.0, 2.8e9)
        expected = 1.0 / np.expm1(photon_energy(2.8e9) / (K_B * 70.0))
        assert n == pytest.approx(expected, rel=1e-12)
        assert n == pytest.approx(5.2e2, rel=0.02)

    def test_ln2_identity(self):
        # hbar omega / k_B T = ln 2  ->  occupation exactly 1
        omega = 2.8e9
        T = photon_energy(omega) / (K_B * np.log(2.0))
        assert thermal_occupation(T, omega) == pytest.approx(1.0, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            thermal_occupation(-1.0, 2.8e9)
        with pytest.raises(ValueError):
            thermal_occupation(10.0, 0.0)


class TestNoiseBudget:
    def test_zero_temperature_floor(self):
        budget = noise_budget(baseline(delta=0.3), ThermalEnvironment(T=0.0, n_th=0.0))
        assert budget.n_xi == 0.0
        assert budget.c_th > 0.0
        assert np.isfinite(budget.c_th)

    def test_symmetric_point_has_no_h_leak(self):
        budget = noise_budget(baseline(), env_70k())
        assert budget.ext_h == 0.0
        assert budget.int_h == 0.0
        assert budget.ext_v > 0.0

    def test_components_sum_and_sign(self):
        rng = np.random.default_rng(41)
        env = env_70k()
        for _ in range(200):
            p = SystemParams(kappa_i=1.0, kappa_ex=10 ** rng.uniform(-1, 2),
                             G=10 ** rng.uniform(-2, 1),
                             gamma=10 ** rng.uniform(-4, 0),
                             delta=rng.uniform(-5, 5))
            budget = noise_budget(p, env)
            assert all(c >= 0.0 for c in budget.components)
            assert sum(budget.components) == budget.n_xi

    def test_cth_against_hand_assembly(self):
        # at the V-dark point of the overcoupled optimum: r_HH = -11/31
        budget = noise_budget(optimum(), env_70k())
        assert budget.c_th == pytest.approx(250.0 / 961.0, rel=1e-12)

    def test_vanishing_ph_stays_total(self):
        # critically coupled empty cavity: r = 0, P_H = 0; only internal V noise
        budget = noise_budget(baseline(G=0.0), env_70k())
        assert np.isfinite(budget.n_xi)
        assert budget.ext_v == 0.0
        assert budget.int_v > 0.0
        assert budget.c_th == pytest.approx(2.0, rel=1e-12)

    def test_overcoupled_limit(self):
        # C_th -> 2 (P_V + P_H) at rate O((ki/kex)^2)
        devs = []
        for kex in (1e2, 1e3):
            p = SystemParams(kappa_i=1.0, kappa_ex=kex, G=0.1, gamma=1e-3,
                             delta=0.3)
            probs = outcome_probabilities(p)
            budget = noise_budget(p, env_70k())
            devs.append(abs(budget.c_th - 2 * (probs.p_v + probs.p_h)))
        assert devs[0] < 1e-3
        assert devs[0] / devs[1] == pytest.approx(100.0, rel=0.5)

    def test_requires_port(self):
        with pytest.raises(ValueError):
            noise_budget(baseline(kappa_ex=0.0), env_70k())


class TestMeasurementMoments:
    def test_vacuum(self):
        env = ThermalEnvironment(T=0.0, n_th=0.0)
        probe = ProbeSpec(P_in=0.0, tau_m=1.0, n_in=0.0)
        m = measurement_moments(baseline(delta=0.3), env, probe)
        assert m.mean == 0.0
        assert m.variance == 0.0

    def test_dark_port_mean_is_noise_floor(self):
        probe = ProbeSpec.for_cavity(1e-9, 1.0, 2.8e9)
        m = measurement_moments(baseline(), env_70k(), probe)
        assert m.mean == noise_budget(baseline(), env_70k()).n_xi

    def test_exact_minus_approx_identity(self):
        # the approximation drops exactly the pure-thermal term
        probe = ProbeSpec.for_cavity(1e-9, 1e-6, 2.8e9)
        m = measurement_moments(baseline(delta=0.494), env_70k(), probe)
        assert m.variance == m.variance_approx + (m.n_xi**2 + m.n_xi)

    def test_agreement_in_validity_regime(self):
        # n_in ~ 1e9 >> n_xi ~ 1e3 >> 1
        tau = 1e9 * photon_energy(2.8e9) / 1e-9
        probe = ProbeSpec.for_cavity(1e-9, tau, 2.8e9)
        m = measurement_moments(baseline(delta=0.494), env_70k(), probe)
        assert m.n_in == pytest.approx(1e9, rel=1e-12)
        assert m.n_xi > 100.0
        gap = abs(m.variance - m.variance_approx) / m.variance
        assert gap < 0.01
        assert gap < 2.0 / m.n_xi + 2.0 * m.n_xi / m.n_in


class TestNominalFisherV:
    def test_no_coupling(self):
        assert nominal_fisher_v(baseline(G=0.0)).scaled == 0.0

    def test_never_exceeds_full_fisher(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            p = SystemParams(kappa_i=1.0, kappa_ex=10 ** rng.uniform(-1, 2),
                             G=10 ** rng.uniform(-2, 1),
                             gamma=10 ** rng.uniform(-4, 0),
                             A=rng.uniform(-5, 5), delta=rng.uniform(-5, 5))
            assert nominal_fisher_v(p).scaled <= \
                fisher_information_sp(p).scaled * (1 + 1e-12) + 1e-300

    def test_curve_peak_at_origin_for_optimum(self):
        p = optimum()
        curve = fisher_v_curve(p, feature_grid(p))
        assert curve.peak.location == 0.0
        # analytic peak: 16 kex^2 G^4 / (kappa gamma/2 + G^2)^4
        expected = 16.0 * 10.0**2 * 0.1**4 / (11 * 5e-4 + 0.01) ** 4
        assert curve.peak.value == pytest.approx(expected, rel=1e-9)


class TestSensitivityMP:
    def test_tau_m_invariance(self):
        p = optimum(28e6).with_delta(0.002 * 28e6)
        env = env_70k()
        probe_a = ProbeSpec.for_cavity(1e-9, 1.0, 2.8e9)
        probe_b = ProbeSpec.for_cavity(1e-9, 2.0, 2.8e9)
        rep_a = sensitivity_mp(p, env, probe_a)
        rep_b = sensitivity_mp(p, env, probe_b)
        assert rep_a.value == rep_b.value

    def test_power_scaling(self):
        p = optimum(28e6).with_delta(0.002 * 28e6)
        env = env_70k()
        v1 = sensitivity_mp(p, env, ProbeSpec.for_cavity(1e-9, 1.0, 2.8e9)).value
        v2 = sensitivity_mp(p, env, ProbeSpec.for_cavity(4e-9, 1.0, 2.8e9)).value
        assert v2 == pytest.approx(v1 / 2.0, rel=1e-12)

    def test_temperature_monotone(self):
        p = optimum(28e6).with_delta(0.002 * 28e6)
        probe = ProbeSpec.for_cavity(1e-9, 1.0, 2.8e9)
        values = [sensitivity_mp(p, ThermalEnvironment.for_cavity(t, 2.8e9),
                                 probe).value
                  for t in (4.0, 70.0, 300.0)]
        assert values[0] < values[1] < values[2]

    def test_zero_temperature_shot_floor(self):
        p = SystemParams(kappa_i=28e6, kappa_ex=28e6, G=28e6, gamma=28e3,
                         delta=0.3 * 28e6)
        env = ThermalEnvironment(T=0.0, n_th=0.0)
        probe = ProbeSpec.for_cavity(1e-9, 1.0, 2.8e9)
        rep = sensitivity_mp(p, env, probe)
        probs = outcome_probabilities(p)
        expected = np.sqrt(probs.p_v * photon_energy(2.8e9) / 1e-9) \
            / np.sqrt(rep.fisher_v.si)
        assert rep.value == pytest.approx(expected, rel=1e-12)
        assert rep.value > 0.0

    def test_kbt_form_close_at_70k(self):
        p = optimum(28e6).with_delta(0.002 * 28e6)
        rep = sensitivity_mp(p, env_70k(), ProbeSpec.for_cavity(1e-9, 1.0, 2.8e9))
        assert rep.value_kbt == pytest.approx(rep.value, rel=2e-3)

    def test_simplified_form_uses_overcoupled_cth(self):
        p = optimum(28e6).with_delta(0.002 * 28e6)
        rep = sensitivity_mp(p, env_70k(), ProbeSpec.for_cavity(1e-9, 1.0, 2.8e9))
        probs = outcome_probabilities(p)
        expected = np.sqrt((2 * (probs.p_v + probs.p_h) * K_B * 70.0
                            + probs.p_v * photon_energy(2.8e9)) / 1e-9) \
            / np.sqrt(rep.fisher_v.si)
        assert rep.value_simplified == pytest.approx(expected, rel=1e-12)

    def test_computed_preset_scaling_is_linear_in_kappa_i(self):
        # The published chain scales the limit linearly in kappa_i at fixed
        # ratios; the sqrt rescaling quoted for the presets is not derivable
        # from it (see check-paper discrepancy rows).
        env = env_70k()
        probe = ProbeSpec.for_cavity(1e-9, 1.0, 2.8e9)
        values = []
        for ki in (28e6, 28e3):
            p = optimum(ki)
            curve = fisher_v_curve(p, feature_grid(p))
            rep = sensitivity_mp(p.with_delta(curve.peak.location), env, probe)
            values.append(rep.value)
        assert values[1] / values[0] == pytest.approx(1e-3, rel=1e-9)

    def test_no_signal_error(self):
        with pytest.raises(NoSignalError):
            sensitivity_mp(baseline(G=0.0), env_70k(),
                           ProbeSpec.for_cavity(1e-9, 1.0, 2.8e9))


class TestMwVsOptical:
    def test_published_factor(self):
        assert mw_vs_optical_factor(70.0, 1.78e15) == pytest.approx(10.0, rel=0.05)

    def test_identity_point(self):
        omega = 1e15
        T = HBAR * omega / (2.0 * K_B)
        assert mw_vs_optical_factor(T, omega) == pytest.approx(1.0, rel=1e-12)

    def test_monotone_and_divergent(self):
        fs = [mw_vs_optical_factor(t, 1.78e15) for t in (300.0, 70.0, 1.0)]
        assert fs[0] < fs[1] < fs[2]
        assert mw_vs_optical_factor(0.0, 1.78e15) == float("inf")
