"""Steady-state Langevin solve as an independent oracle."""

import numpy as np
import pytest

from mwfaraday import (SingularSystemError, SystemParams, noise_transfer_row,
                       oracle_reflection, polarized_reflection,
                       reflection_coefficient, steady_state_amplitudes)
from mwfaraday.langevin import drift_eigenvalues


def params(**kw):
    base = dict(kappa_i=1.0, kappa_ex=1.0, G=1.0, gamma=1e-3)
    base.update(kw)
    return SystemParams(**base)


def random_params(rng):
    return SystemParams(
        kappa_i=1.0,
        kappa_ex=10.0 ** rng.uniform(-1, 2),
        G=10.0 ** rng.uniform(-4, 1),
        gamma=10.0 ** rng.uniform(-4, 0),
        Delta_r=rng.uniform(-10, 10),
        Delta_q=rng.uniform(-10, 10),
        A=rng.uniform(-10, 10),
        delta=rng.uniform(-10, 10),
    )


class TestSteadyState:
    def test_decoupled_spin(self):
        a, c = steady_state_amplitudes(params(G=0.0, kappa_ex=3.0), +1)
        assert a == pytest.approx(np.sqrt(6.0) / 4.0, rel=1e-14)
        assert c == 0.0

    def test_spin_mode_dominates_on_resonance(self):
        a, c = steady_state_amplitudes(params(), +1)
        assert abs(c) > 100 * abs(a)

    def test_amplitude_consistent_with_reflection(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            p = random_params(rng)
            a, _ = steady_state_amplitudes(p, +1)
            r = oracle_reflection(p, +1)
            assert a == pytest.approx((r + 1.0) / np.sqrt(2.0 * p.kappa_ex),
                                      rel=1e-12)

    def test_undamped_mode_raises(self):
        with pytest.raises(SingularSystemError, match="spin"):
            steady_state_amplitudes(params(G=0.0, gamma=0.0), +1)

    def test_drift_stability(self):
        rng = np.random.default_rng(22)
        for _ in range(300):
            p = random_params(rng)
            for branch in (+1, -1):
                assert np.all(drift_eigenvalues(p, branch).real < 0)


class TestOracleReflection:
    def test_critically_coupled(self):
        assert oracle_reflection(params(G=0.0), +1) == pytest.approx(0.0, abs=1e-15)

    def test_peak_point_matches_closed_form(self):
        p = params(delta=0.494)
        assert abs(oracle_reflection(p, +1) - reflection_coefficient(p, +1)) < 1e-10

    def test_equivalence_over_draws(self):
        rng = np.random.default_rng(20260810)
        worst = 0.0
        for _ in range(2000):
            p = random_params(rng)
            branch = +1 if rng.uniform() < 0.5 else -1
            r_cf = reflection_coefficient(p, branch)
            r_or = oracle_reflection(p, branch)
            denom = abs(r_cf) if r_cf != 0 else 1.0
            worst = max(worst, abs(r_cf - r_or) / denom)
        assert worst < 1e-10


class TestNoiseTransferRow:
    def test_symmetric_point_blocks_h_noise(self):
        row = noise_transfer_row(params())
        assert row[0] == 0.0
        assert row[1] == 0.0

    def test_empty_critical_cavity_routes_only_internal_v(self):
        row = noise_transfer_row(params(G=0.0))
        assert np.allclose(row, [0.0, 0.0, 0.0, 1.0], atol=1e-14)

    def test_peak_point_v_conversion(self):
        row = noise_transfer_row(params(delta=0.494))
        assert abs(row[0]) ** 2 == pytest.approx(0.25, abs=0.005)

    def test_matches_scattering_assembly(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            p = random_params(rng)
            row = noise_transfer_row(p)
            pol = polarized_reflection(p)
            pref = np.sqrt(p.kappa_i / p.kappa_ex)
            expected = np.array([-1j * pol.r_VH, -1j * pol.r_VH * pref,
                                 pol.r_HH, (1.0 + pol.r_HH) * pref])
            assert np.max(np.abs(row - expected)) < 1e-12

    def test_requires_port(self):
        with pytest.raises(ValueError):
            noise_transfer_row(params(kappa_ex=0.0))
