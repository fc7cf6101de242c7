"""Parameter sweeps over the system/probe/bath vocabulary with CSV output.

Sweep cells are pure evaluations, fanned out over worker processes and
gathered in deterministic axis-major order; identical inputs produce
byte-identical CSV apart from the timestamp line.  Non-finite cells are
emitted as nan with the flag column set instead of aborting the job.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, ResolvedConfig
from .constants import CONSTANTS
from .multiphoton import (NoSignalError, nominal_fisher_v, sensitivity_mp,
                          thermal_occupation)
from .params import ProbeSpec, SystemParams, ThermalEnvironment
from .peaks import NoFeatureError, feature_grid
from .single_photon import (CONVENTION_NOTES, fisher_information_sp,
                            outcome_probabilities, sensitivity_sp)
from .spectra import polarized_reflection

QUANTITIES = ("P_V", "P_H", "P_empty", "F_I", "F_IV", "phi_F",
              "sens_sp", "sens_mp")

_SYSTEM_AXES = ("kappa_i", "kappa_ex", "G", "gamma", "Delta_r",
                "Delta_q", "A", "delta", "omega_r")
_OTHER_AXES = ("T", "P_in", "tau_m")
AXIS_NAMES = _SYSTEM_AXES + _OTHER_AXES


@dataclass(frozen=True)
class AxisSpec:
    name: str
    start: float
    stop: float
    points: int
    log: bool = False

    def __post_init__(self) -> None:
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"unknown axis parameter {self.name!r}; "
                              f"choose from {', '.join(AXIS_NAMES)}")
        if self.points < 2:
            raise ConfigError("axis point count must be >= 2")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise ConfigError("axis range must be finite")
        if self.log and (self.start <= 0 or self.stop <= 0):
            raise ConfigError("log axis endpoints must be positive")

    def grid(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    axis1: AxisSpec
    axis2: AxisSpec | None
    fixed: ResolvedConfig

    def __post_init__(self) -> None:
        if self.quantity not in QUANTITIES:
            raise ConfigError(f"unknown quantity {self.quantity!r}; "
                              f"choose from {', '.join(QUANTITIES)}")


@dataclass(frozen=True)
class SweepTable:
    columns: tuple[str, ...]
    rows: list[tuple]
    manifest: list[str]


def _apply_axis(cfg: ResolvedConfig, name: str, value: float) -> ResolvedConfig:
    values = dict(cfg.values)
    values[name] = float(value)
    system = SystemParams(**{k: values[k] for k in _SYSTEM_AXES})
    env = ThermalEnvironment(T=values["T"],
                             n_th=thermal_occupation(values["T"], values["omega_r"]))
    probe = ProbeSpec.for_cavity(values["P_in"], values["tau_m"], values["omega_r"])
    return ResolvedConfig(system=system, env=env, probe=probe, values=values)


def evaluate_quantity(quantity: str, cfg: ResolvedConfig) -> float:
    """One sweep cell; identical to calling the underlying operation directly."""
    params = cfg.system
    if quantity == "P_V":
        return outcome_probabilities(params).p_v
    if quantity == "P_H":
        return outcome_probabilities(params).p_h
    if quantity == "P_empty":
        return outcome_probabilities(params).p_empty
    if quantity == "F_I":
        return fisher_information_sp(params).scaled
    if quantity == "F_IV":
        return nominal_fisher_v(params).scaled
    if quantity == "phi_F":
        return polarized_reflection(params).phi_F
    if quantity == "sens_sp":
        return sensitivity_sp(params, feature_grid(params)).value
    if quantity == "sens_mp":
        return sensitivity_mp(params, cfg.env, cfg.probe).value
    raise ConfigError(f"unknown quantity {quantity!r}")


def _eval_cells(args: tuple[str, ResolvedConfig, list[tuple[tuple[str, float], ...]]]
                ) -> list[tuple[float, int]]:
    quantity, fixed, cells = args
    out = []
    for assignments in cells:
        cfg = fixed
        try:
            for name, value in assignments:
                cfg = _apply_axis(cfg, name, value)
            value = float(evaluate_quantity(quantity, cfg))
            flag = 0 if np.isfinite(value) else 1
        except (NoFeatureError, NoSignalError, ValueError):
            value, flag = float("nan"), 1
        out.append((value, flag))
    return out


def run_sweep(spec: SweepSpec, jobs: int = 1, allow_nan: bool = True) -> SweepTable:
    """Evaluate the sweep in axis-major order (axis1 outer, axis2 inner)."""
    g1 = spec.axis1.grid()
    cells: list[tuple[tuple[str, float], ...]] = []
    if spec.axis2 is None:
        for v1 in g1:
            cells.append(((spec.axis1.name, float(v1)),))
    else:
        g2 = spec.axis2.grid()
        for v1 in g1:
            for v2 in g2:
                cells.append(((spec.axis1.name, float(v1)),
                              (spec.axis2.name, float(v2))))

    results = _map_cells(spec.quantity, spec.fixed, cells, jobs)
    if not allow_nan:
        for cell, (_, flag) in zip(cells, results):
            if flag:
                raise ValueError(f"non-finite value at {cell} with nan flag disabled")

    axis_cols = tuple(a.name for a in (spec.axis1, spec.axis2) if a is not None)
    columns = axis_cols + (spec.quantity, "flag")
    rows = []
    for cell, (value, flag) in zip(cells, results):
        rows.append(tuple(v for _, v in cell) + (value, flag))

    manifest = manifest_lines(spec.fixed, extra=[
        f"quantity = {spec.quantity}",
        *(f"axis{i+1} = {a.name} from {a.start!r} to {a.stop!r} "
          f"({a.points} points, {'log' if a.log else 'linear'})"
          for i, a in enumerate(x for x in (spec.axis1, spec.axis2) if x)),
    ])
    return SweepTable(columns=columns, rows=rows, manifest=manifest)


def _map_cells(quantity: str, fixed: ResolvedConfig, cells, jobs: int):
    if jobs <= 1 or len(cells) < 2 * jobs:
        return _eval_cells((quantity, fixed, cells))
    chunks = [cells[i::jobs] for i in range(jobs)]
    payloads = [(quantity, fixed, chunk) for chunk in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk_results = list(pool.map(_eval_cells, payloads))
    # Stitch the strided chunks back into submission order.
    results: list[tuple[float, int] | None] = [None] * len(cells)
    for lane, chunk in enumerate(chunk_results):
        for k, res in enumerate(chunk):
            results[lane + k * jobs] = res
    return results


def manifest_lines(cfg: ResolvedConfig | None, extra: list[str] | None = None,
                   timestamp: bool = True) -> list[str]:
    """Shared manifest header block: version, conventions, constants, config."""
    lines = [f"manifest: mwfaraday v{__version__}"]
    if timestamp:
        lines.append("timestamp = "
                     + datetime.now(timezone.utc).isoformat(timespec="seconds"))
    lines += [
        "convention: " + CONVENTION_NOTES,
        "convention: phi_F principal value in (-pi/2, pi/2]",
        "convention: half_width_right = x_right - x_peak (one-sided feature width)",
        "convention: sensitivities in T/sqrt(Hz); scaled sensitivities in "
        "sqrt(kappa_i)/(mu_B g_e); Fisher in (mu_B g_e/kappa_i)^2",
    ]
    lines += CONSTANTS.manifest_lines()
    if cfg is not None:
        lines += cfg.manifest_lines()
    lines += extra or []
    return lines


def format_cell(v) -> str:
    """Full-precision text for a cell; floats round-trip exactly."""
    if isinstance(v, float):
        return repr(float(v))  # builtin float: numpy scalars repr differently
    return str(v)


def write_csv(table: SweepTable, stream) -> None:
    for line in table.manifest:
        stream.write(f"# {line}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_cell(v) for v in row])


def table_to_text(table: SweepTable) -> str:
    buf = io.StringIO()
    write_csv(table, buf)
    return buf.getvalue()


def write_table(table: SweepTable, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(table, fh)
    return path


def read_csv(path: Path) -> tuple[list[str], list[str], list[list[float]]]:
    """Re-read an emitted CSV: (manifest lines, columns, float rows)."""
    manifest, columns, rows = [], [], []
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            if line.startswith("# "):
                manifest.append(line[2:].rstrip("\n"))
                continue
            reader = csv.reader([line] + fh.readlines())
            table = list(reader)
            columns = table[0]
            rows = [[float(v) for v in r] for r in table[1:] if r]
            break
    return manifest, columns, rows
