"""Sweep evaluation, ordering, determinism and CSV round-trip."""

import numpy as np
import pytest

from mwfaraday import ConfigError, parse_config
from mwfaraday.peaks import feature_grid
from mwfaraday.single_photon import fisher_curve, outcome_probabilities
from mwfaraday.sweep import (AxisSpec, SweepSpec, run_sweep, read_csv,
                             table_to_text, write_table)


def cfg(extra=""):
    return parse_config("kappa_i = 1 Hz\n" + extra)


class TestAxisSpec:
    def test_unknown_parameter(self):
        with pytest.raises(ConfigError, match="unknown axis parameter"):
            AxisSpec(name="Tz", start=0.0, stop=1.0, points=5)

    def test_point_count(self):
        with pytest.raises(ConfigError):
            AxisSpec(name="delta", start=0.0, stop=1.0, points=1)

    def test_log_needs_positive_range(self):
        with pytest.raises(ConfigError):
            AxisSpec(name="G", start=0.0, stop=1.0, points=5, log=True)
        g = AxisSpec(name="G", start=0.1, stop=10.0, points=3, log=True).grid()
        assert g == pytest.approx([0.1, 1.0, 10.0])


class TestRunSweep:
    def test_two_point_sweep_matches_direct_calls(self):
        spec = SweepSpec(quantity="P_V",
                         axis1=AxisSpec("delta", 0.1, 0.4, 2),
                         axis2=None, fixed=cfg())
        table = run_sweep(spec)
        assert len(table.rows) == 2
        for (delta, p_v, flag) in table.rows:
            direct = outcome_probabilities(cfg().system.with_delta(delta)).p_v
            assert p_v == direct  # bit-for-bit
            assert flag == 0

    def test_axis_major_ordering(self):
        spec = SweepSpec(quantity="P_H",
                         axis1=AxisSpec("G", 0.5, 1.0, 2),
                         axis2=AxisSpec("delta", 0.0, 1.0, 3), fixed=cfg())
        table = run_sweep(spec)
        firsts = [r[0] for r in table.rows]
        seconds = [r[1] for r in table.rows]
        assert firsts == [0.5, 0.5, 0.5, 1.0, 1.0, 1.0]
        assert seconds == [0.0, 0.5, 1.0, 0.0, 0.5, 1.0]

    def test_symmetric_probability_curve(self):
        spec = SweepSpec(quantity="P_V",
                         axis1=AxisSpec("delta", -2.0, 2.0, 401),
                         axis2=None, fixed=cfg())
        table = run_sweep(spec)
        vals = np.array([r[1] for r in table.rows])
        assert np.allclose(vals, vals[::-1], atol=1e-14)
        assert vals.max() == pytest.approx(0.25, abs=0.005)

    def test_jobs_do_not_change_results(self):
        spec = SweepSpec(quantity="F_I",
                         axis1=AxisSpec("delta", 0.0, 1.0, 37),
                         axis2=None, fixed=cfg())
        serial = run_sweep(spec, jobs=1)
        parallel = run_sweep(spec, jobs=3)
        assert serial.rows == parallel.rows

    def test_nan_flagging(self):
        # G = 0 leaves sens_sp without a feature -> nan + flag, never abort
        spec = SweepSpec(quantity="sens_sp",
                         axis1=AxisSpec("G", 0.0, 0.1, 2),
                         axis2=None, fixed=cfg())
        table = run_sweep(spec)
        assert np.isnan(table.rows[0][1]) and table.rows[0][2] == 1
        assert np.isfinite(table.rows[1][1]) and table.rows[1][2] == 0
        with pytest.raises(ValueError, match="nan flag disabled"):
            run_sweep(spec, allow_nan=False)

    def test_fisher_ridge_and_widths(self):
        # ridge over the published coupling band beats couplings outside it,
        # and the narrow-feature half-widths match the published values.
        fixed = cfg("kappa_ex = 10 kappa_i")
        peaks = {}
        for g_rel in (0.02, 0.06, 0.1, 0.2):
            params = fixed.system.with_delta(0.0)
            params = type(params)(kappa_i=1.0, kappa_ex=10.0, G=g_rel,
                                  gamma=1e-3)
            curve = fisher_curve(params, feature_grid(params))
            peaks[g_rel] = curve.peak
        assert min(peaks[0.06].value, peaks[0.1].value) > peaks[0.02].value
        assert min(peaks[0.06].value, peaks[0.1].value) > peaks[0.2].value
        assert peaks[0.06].half_width_right == pytest.approx(6.4e-4, rel=0.30)
        assert peaks[0.1].half_width_right == pytest.approx(9.6e-4, rel=0.30)


class TestCsv:
    def test_round_trip_full_precision(self, tmp_path):
        spec = SweepSpec(quantity="phi_F",
                         axis1=AxisSpec("delta", -1.0, 1.0, 17),
                         axis2=None, fixed=cfg())
        table = run_sweep(spec)
        path = write_table(table, tmp_path / "sweep.csv")
        manifest, columns, rows = read_csv(path)
        assert columns == list(table.columns)
        for orig, parsed in zip(table.rows, rows):
            for a, b in zip(orig, parsed):
                assert float(a) == b  # repr round-trips exactly
        assert any(line.startswith("manifest:") for line in manifest)
        assert any("convention" in line for line in manifest)

    def test_deterministic_apart_from_timestamp(self):
        spec = SweepSpec(quantity="P_empty",
                         axis1=AxisSpec("delta", 0.0, 1.0, 9),
                         axis2=None, fixed=cfg())

        def strip(text):
            return "\n".join(l for l in text.splitlines()
                             if not l.startswith("# timestamp"))

        assert strip(table_to_text(run_sweep(spec))) == \
            strip(table_to_text(run_sweep(spec)))

    def test_newline_discipline(self, tmp_path):
        spec = SweepSpec(quantity="P_V",
                         axis1=AxisSpec("delta", 0.0, 1.0, 3),
                         axis2=None, fixed=cfg())
        path = write_table(run_sweep(spec), tmp_path / "s.csv")
        data = path.read_bytes()
        assert b"\r" not in data
        assert data.endswith(b"\n")
