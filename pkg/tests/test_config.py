"""Config parsing: units, defaults, overrides, errors."""

from pathlib import Path

import pytest

from mwfaraday import ConfigError, parse_config
from mwfaraday.config import load_config, parse_value

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


class TestParseValue:
    @pytest.mark.parametrize("text,number,unit", [
        ("28 MHz", 28.0, "MHz"),
        ("2.8 GHz", 2.8, "GHz"),
        ("0.1kappa_i", 0.1, "kappa_i"),
        ("1 kappa_i", 1.0, "kappa_i"),
        ("70 K", 70.0, "K"),
        ("1 nW", 1.0, "nW"),
        ("1e-9 W", 1e-9, "W"),
        ("2 s", 2.0, "s"),
        ("3.5e4", 3.5e4, ""),
        ("450 kHz", 450.0, "kHz"),
        ("12 Hz", 12.0, "Hz"),
    ])
    def test_grammar(self, text, number, unit):
        raw = parse_value(text)
        assert raw.number == number
        assert raw.unit == unit

    def test_rejects_garbage(self):
        with pytest.raises(ConfigError, match="non-numeric"):
            parse_value("fast MHz")
        with pytest.raises(ConfigError):
            parse_value("")


class TestParseConfig:
    def test_kappa_i_relative_resolution(self):
        cfg = parse_config("G = 0.1 kappa_i\nkappa_i = 28 MHz")
        assert cfg.system.G == pytest.approx(2.8e6)
        assert cfg.system.kappa_i == 28e6

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config("kappa_i = 1 MHz\nTz = 3")

    def test_missing_kappa_i(self):
        with pytest.raises(ConfigError, match="kappa_i is required"):
            parse_config("G = 2 MHz")

    def test_relative_unit_is_fine_any_order(self):
        cfg = parse_config("kappa_ex = 10 kappa_i\nkappa_i = 1 MHz")
        assert cfg.system.kappa_ex == pytest.approx(1e7)

    def test_self_referential_kappa_i(self):
        with pytest.raises(ConfigError):
            parse_config("kappa_i = 2 kappa_i")

    def test_non_numeric_value(self):
        with pytest.raises(ConfigError, match="non-numeric"):
            parse_config("kappa_i = fast")

    def test_comments_and_blanks(self):
        cfg = parse_config("# a comment\n\nkappa_i = 1 MHz  # trailing\n")
        assert cfg.system.kappa_i == 1e6

    def test_defaults(self):
        cfg = parse_config("kappa_i = 1 MHz")
        sys_ = cfg.system
        assert sys_.kappa_ex == sys_.kappa_i
        assert sys_.G == sys_.kappa_i
        assert sys_.gamma == pytest.approx(1e-3 * sys_.kappa_i)
        assert sys_.Delta_r == 0.0 and sys_.Delta_q == 0.0
        assert sys_.A == 0.0 and sys_.delta == 0.0
        assert sys_.omega_r == 2.8e9
        assert cfg.env.T == 70.0
        assert cfg.probe.P_in == 1e-9
        assert cfg.probe.tau_m == 1.0

    def test_wrong_dimension(self):
        with pytest.raises(ConfigError, match="not a frequency"):
            parse_config("kappa_i = 1 MHz\nG = 3 K")
        with pytest.raises(ConfigError, match="not kelvin"):
            parse_config("kappa_i = 1 MHz\nT = 3 MHz")

    def test_overrides(self):
        cfg = parse_config("kappa_i = 1 MHz", ["G=0.2kappa_i", "T=4 K"])
        assert cfg.system.G == pytest.approx(2e5)
        assert cfg.env.T == 4.0

    def test_bad_override(self):
        with pytest.raises(ConfigError, match="key=value"):
            parse_config("kappa_i = 1 MHz", ["G"])

    def test_probe_photon_number(self):
        from mwfaraday.constants import photon_energy

        cfg = parse_config("kappa_i = 1 MHz\nP_in = 2 nW\ntau_m = 3 s")
        assert cfg.probe.n_in == pytest.approx(6e-9 / photon_energy(2.8e9))

    def test_env_occupation_resolved(self):
        from mwfaraday import thermal_occupation

        cfg = parse_config("kappa_i = 1 MHz\nT = 70 K")
        assert cfg.env.n_th == thermal_occupation(70.0, 2.8e9)


class TestShippedConfigs:
    def test_fig3_baseline(self):
        cfg = load_config(str(CONFIGS / "fig3_baseline.cfg"))
        sys_ = cfg.system
        assert sys_.kappa_i == 28e6
        assert sys_.kappa_ex == sys_.kappa_i
        assert sys_.G == sys_.kappa_i
        assert sys_.gamma == pytest.approx(1e-3 * sys_.kappa_i)
        assert sys_.A == 0.0 and sys_.delta == 0.0

    def test_presets_differ_only_in_kappa_i(self):
        hi = load_config(str(CONFIGS / "preset_q100.cfg"))
        lo = load_config(str(CONFIGS / "preset_q1e5.cfg"))
        assert hi.system.kappa_i / lo.system.kappa_i == pytest.approx(1e3)
        assert hi.system.kappa_ex / hi.system.kappa_i == pytest.approx(10.0)
        assert lo.system.kappa_ex / lo.system.kappa_i == pytest.approx(10.0)
        assert hi.system.omega_r == lo.system.omega_r

    def test_missing_file(self):
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(str(CONFIGS / "does_not_exist.cfg"))
