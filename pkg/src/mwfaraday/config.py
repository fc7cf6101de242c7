"""Line-oriented config parsing: `key = value [unit]` with `#` comments.

Rate-like keys accept Hz/kHz/MHz/GHz or the special unit `kappa_i` for
values expressed in units of the intrinsic loss rate.  kappa_i itself is
the one required key; everything else defaults to the critically coupled
strong-coupling baseline used by the probability-curve figure job.
"""

from __future__ import annotations

from dataclasses import dataclass

from .multiphoton import thermal_occupation
from .params import ProbeSpec, SystemParams, ThermalEnvironment


class ConfigError(ValueError):
    """Bad key, unit, or value in a config file or --set override."""


_HZ_UNITS = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9}

# key -> (kind, default); rate defaults marked "kappa_i" scale with kappa_i.
_RATE_KEYS = ("kappa_i", "kappa_ex", "G", "gamma",
              "Delta_r", "Delta_q", "A", "delta", "omega_r")
_DEFAULTS: dict[str, tuple[float, str]] = {
    "kappa_ex": (1.0, "kappa_i"),
    "G": (1.0, "kappa_i"),
    "gamma": (1e-3, "kappa_i"),
    "Delta_r": (0.0, "Hz"),
    "Delta_q": (0.0, "Hz"),
    "A": (0.0, "Hz"),
    "delta": (0.0, "Hz"),
    "omega_r": (2.8e9, "Hz"),
    "T": (70.0, "K"),
    "P_in": (1e-9, "W"),
    "tau_m": (1.0, "s"),
}
KNOWN_KEYS = ("kappa_i",) + tuple(_DEFAULTS)


@dataclass(frozen=True)
class RawValue:
    number: float
    unit: str  # one of Hz units, "kappa_i", "K", "W", "nW", "s", or "" (bare)


@dataclass(frozen=True)
class ResolvedConfig:
    """Fully resolved parameter bundles plus the raw values for the manifest."""

    system: SystemParams
    env: ThermalEnvironment
    probe: ProbeSpec
    values: dict[str, float]  # resolved SI values keyed by config name

    def manifest_lines(self) -> list[str]:
        return [f"config: {k} = {self.values[k]!r}" for k in sorted(self.values)]


def parse_value(text: str, key: str = "<value>") -> RawValue:
    """Parse `<number> [unit]`; the unit may be juxtaposed (e.g. 0.1kappa_i)."""
    s = text.strip()
    if not s:
        raise ConfigError(f"{key}: empty value")
    unit = ""
    # Longest suffix first so MHz is not mistaken for Hz.
    candidates = sorted(list(_HZ_UNITS) + ["kappa_i", "K", "W", "nW", "s"],
                        key=len, reverse=True)
    for candidate in candidates:
        if s.endswith(candidate):
            head = s[: -len(candidate)].strip()
            # Guard against eating the exponent letter of a bare number.
            if head and head[-1] not in "+-.":
                unit = candidate
                s = head
                break
    try:
        number = float(s)
    except ValueError as exc:
        raise ConfigError(f"{key}: non-numeric value {text!r}") from exc
    return RawValue(number=number, unit=unit)


def _resolve(key: str, raw: RawValue, kappa_i: float | None) -> float:
    if key in _RATE_KEYS:
        if raw.unit == "kappa_i":
            if key == "kappa_i":
                raise ConfigError("kappa_i cannot be given in units of itself")
            if kappa_i is None:
                raise ConfigError(
                    f"{key} uses kappa_i units but kappa_i is not set")
            return raw.number * kappa_i
        if raw.unit in _HZ_UNITS:
            return raw.number * _HZ_UNITS[raw.unit]
        if raw.unit == "":
            return raw.number  # bare numbers are Hz
        raise ConfigError(f"{key}: unit {raw.unit!r} is not a frequency")
    if key == "T":
        if raw.unit in ("", "K"):
            return raw.number
        raise ConfigError(f"T: unit {raw.unit!r} is not kelvin")
    if key == "P_in":
        if raw.unit in ("", "W"):
            return raw.number
        if raw.unit == "nW":
            return raw.number * 1e-9
        raise ConfigError(f"P_in: unit {raw.unit!r} is not a power")
    if key == "tau_m":
        if raw.unit in ("", "s"):
            return raw.number
        raise ConfigError(f"tau_m: unit {raw.unit!r} is not a time")
    raise ConfigError(f"unknown key {key!r}")


def parse_config(text: str, overrides: list[str] | None = None) -> ResolvedConfig:
    """Parse config text plus optional `key=value` override strings.

    Overrides use the same value grammar as config lines and are applied
    after the file.  Unknown keys are rejected; kappa_i is required.
    """
    raw: dict[str, RawValue] = {}

    def take(key: str, value_text: str, where: str) -> None:
        key = key.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        raw[key] = parse_value(value_text, key=key)

    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected `key = value`, got {line!r}")
        key, value_text = body.split("=", 1)
        take(key, value_text, f"line {lineno}")

    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        key, value_text = item.split("=", 1)
        take(key, value_text, f"--set {item!r}")

    if "kappa_i" not in raw:
        raise ConfigError("kappa_i is required (e.g. `kappa_i = 28 MHz`)")
    if raw["kappa_i"].unit == "kappa_i":
        raise ConfigError("kappa_i cannot be given in units of itself")
    kappa_i = _resolve("kappa_i", raw["kappa_i"], None)

    values: dict[str, float] = {"kappa_i": kappa_i}
    for key, (number, unit) in _DEFAULTS.items():
        if key in raw:
            values[key] = _resolve(key, raw[key], kappa_i)
        else:
            values[key] = number * kappa_i if unit == "kappa_i" else number

    system = SystemParams(
        kappa_i=values["kappa_i"], kappa_ex=values["kappa_ex"], G=values["G"],
        gamma=values["gamma"], Delta_r=values["Delta_r"],
        Delta_q=values["Delta_q"], A=values["A"], delta=values["delta"],
        omega_r=values["omega_r"])
    env = ThermalEnvironment(T=values["T"],
                             n_th=thermal_occupation(values["T"], values["omega_r"]))
    probe = ProbeSpec.for_cavity(values["P_in"], values["tau_m"], values["omega_r"])
    return ResolvedConfig(system=system, env=env, probe=probe, values=values)


def load_config(path: str, overrides: list[str] | None = None) -> ResolvedConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return parse_config(text, overrides)


def default_config(kappa_i: float, overrides: list[str] | None = None) -> ResolvedConfig:
    """The documented defaults at a given kappa_i, with optional overrides."""
    return parse_config(f"kappa_i = {kappa_i!r} Hz", overrides)
