"""Reproduction jobs for the five reference figures.

Each job writes a CSV (manifest header block + data rows) and renders a
PNG preview of the same data next to it.  The CSV is the canonical
artifact; the PNG is a convenience rendering.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .config import ResolvedConfig, default_config
from .multiphoton import fisher_v_curve
from .params import SystemParams
from .peaks import feature_grid
from .single_photon import (_fisher_scaled, _prob_arrays, fisher_curve,
                            sensitivity_sp)
from .sweep import SweepTable, manifest_lines, write_table

FIGURE_IDS = (3, 4, 5, 6, 7)

_PNG_META = {"Software": "mwfaraday"}  # fixed so reruns are byte-identical


def _default_cfg(kappa_i: float = 28e6, overrides: list[str] | None = None
                 ) -> ResolvedConfig:
    return default_config(kappa_i, overrides)


def figure_job(fig_id: int, outdir: Path, config: ResolvedConfig | None = None,
               jobs: int = 1) -> list[Path]:
    """Run one figure job; returns the written file paths (CSV first)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if fig_id == 3:
        return _fig3(outdir, config)
    if fig_id == 4:
        return _fig4(outdir, config)
    if fig_id == 5:
        return _fig5(outdir, config, jobs)
    if fig_id == 6:
        return _fig6(outdir, config, jobs)
    if fig_id == 7:
        return _fig7(outdir, config)
    raise ValueError(f"unknown figure id {fig_id}; valid: {FIGURE_IDS}")


def _save_png(fig, path: Path) -> Path:
    fig.savefig(path, dpi=150, metadata=_PNG_META)
    plt.close(fig)
    return path


@dataclass(frozen=True)
class _Curve:
    x: np.ndarray
    columns: dict[str, np.ndarray]


def _fig3(outdir: Path, config: ResolvedConfig | None) -> list[Path]:
    """Outcome probabilities and their shift derivatives vs signal shift."""
    cfg = config or _default_cfg()
    params = cfg.system
    ki = params.kappa_i
    grid = np.linspace(-2 * ki, 2 * ki, 4001)
    P, dP, _ = _prob_arrays(params, params.A + grid)
    table = SweepTable(
        columns=("delta_over_kappa_i", "P_V", "P_H", "P_empty",
                 "dP_V_dshift_scaled", "dP_H_dshift_scaled",
                 "dP_empty_dshift_scaled", "flag"),
        rows=[(g / ki, P[0, i], P[1, i], P[2, i],
               dP[0, i] * ki, dP[1, i] * ki, dP[2, i] * ki, 0)
              for i, g in enumerate(grid)],
        manifest=manifest_lines(cfg, extra=[
            "figure = 3 (outcome probabilities and derivatives vs shift)"]))
    csv_path = write_table(table, outdir / "fig3_probabilities.csv")

    fig, axes = plt.subplots(2, 1, figsize=(6, 7), sharex=True)
    x = grid / ki
    for j, (label, color) in enumerate((("P_V", "tab:blue"),
                                        ("P_H", "tab:red"),
                                        ("P_empty", "tab:green"))):
        axes[0].plot(x, P[j], color=color, label=label)
        axes[1].plot(x, dP[j] * ki, color=color, label="d" + label)
    axes[0].set_ylabel("probability")
    axes[0].legend()
    axes[1].set_ylabel("dP/d(shift/kappa_i)")
    axes[1].set_xlabel("shift delta / kappa_i")
    axes[1].legend()
    png_path = _save_png(fig, outdir / "fig3_probabilities.png")
    return [csv_path, png_path]


def _fig4(outdir: Path, config: ResolvedConfig | None) -> list[Path]:
    """Three-outcome Fisher information vs signal shift, baseline params."""
    cfg = config or _default_cfg()
    params = cfg.system
    ki = params.kappa_i
    grid = np.linspace(-2 * ki, 2 * ki, 4001)
    curve = fisher_curve(params, grid)
    fine = fisher_curve(params, feature_grid(params))
    table = SweepTable(
        columns=("delta_over_kappa_i", "F_I_scaled", "flag"),
        rows=[(g / ki, curve.values[i], 0) for i, g in enumerate(grid)],
        manifest=manifest_lines(cfg, extra=[
            "figure = 4 (Fisher information vs shift)",
            f"peak_F_I_scaled = {fine.peak.value!r}",
            f"peak_location_over_kappa_i = {fine.peak.location / ki!r}",
            f"fwhm_over_kappa_i = {fine.peak.fwhm / ki!r}",
            f"half_width_right_over_kappa_i = {fine.peak.half_width_right / ki!r}",
        ]))
    csv_path = write_table(table, outdir / "fig4_fisher.csv")

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(grid / ki, curve.values, color="tab:blue")
    ax.set_xlabel("shift delta / kappa_i")
    ax.set_ylabel("F_I [(mu_B g_e / kappa_i)^2]")
    png_path = _save_png(fig, outdir / "fig4_fisher.png")
    return [csv_path, png_path]


_FIG5_COUPLINGS = (0.02, 0.1, 0.2)


def _fig5(outdir: Path, config: ResolvedConfig | None, jobs: int) -> list[Path]:
    """Single-photon sensitivity vs external coupling for three G values."""
    cfg = config or _default_cfg()
    base = cfg.system
    ki = base.kappa_i
    kex_grid = np.linspace(0.5 * ki, 20 * ki, 79)
    rows = []
    for g_rel in _FIG5_COUPLINGS:
        for kex in kex_grid:
            params = SystemParams(kappa_i=ki, kappa_ex=float(kex), G=g_rel * ki,
                                  gamma=base.gamma, Delta_r=base.Delta_r,
                                  Delta_q=base.Delta_q, omega_r=base.omega_r)
            rep = sensitivity_sp(params, feature_grid(params))
            rows.append((g_rel, kex / ki, rep.scaled_value, rep.value, 0))
    table = SweepTable(
        columns=("G_over_kappa_i", "kappa_ex_over_kappa_i",
                 "sens_scaled", "sens_T_per_sqrtHz", "flag"),
        rows=rows,
        manifest=manifest_lines(cfg, extra=[
            "figure = 5 (single-photon sensitivity vs external coupling)",
            f"couplings G/kappa_i = {_FIG5_COUPLINGS}",
        ]))
    csv_path = write_table(table, outdir / "fig5_sensitivity.csv")

    fig, ax = plt.subplots(figsize=(6, 4))
    n = len(kex_grid)
    for i, g_rel in enumerate(_FIG5_COUPLINGS):
        seg = rows[i * n:(i + 1) * n]
        ax.plot([r[1] for r in seg], [r[2] for r in seg],
                label=f"G = {g_rel} kappa_i")
    ax.axhline(0.03, color="gray", ls="--", lw=0.8)
    ax.set_xlabel("kappa_ex / kappa_i")
    ax.set_ylabel("sensitivity [sqrt(kappa_i)/(mu_B g_e)]")
    ax.set_yscale("log")
    ax.legend()
    png_path = _save_png(fig, outdir / "fig5_sensitivity.png")
    return [csv_path, png_path]


def _fig6(outdir: Path, config: ResolvedConfig | None, jobs: int) -> list[Path]:
    """Fisher information over (G, shift) at strong overcoupling."""
    cfg = config or _default_cfg(overrides=["kappa_ex = 10 kappa_i"])
    base = cfg.system
    ki = base.kappa_i
    g_grid = np.linspace(0.02 * ki, 0.2 * ki, 46)
    half = np.geomspace(1e-5 * ki, 0.05 * ki, 1000)
    shift_grid = np.concatenate([-half[::-1], [0.0], half])
    rows = []
    width_lines = []
    for g in g_grid:
        params = SystemParams(kappa_i=ki, kappa_ex=base.kappa_ex, G=float(g),
                              gamma=base.gamma, Delta_r=base.Delta_r,
                              Delta_q=base.Delta_q, omega_r=base.omega_r)
        vals = _fisher_scaled(params, shift_grid)
        rows += [(g / ki, s / ki, vals[i], 0) for i, s in enumerate(shift_grid)]
        if np.any(np.isclose(g / ki, (0.06, 0.1), atol=1e-9)):
            fine = fisher_curve(params, feature_grid(params))
            width_lines.append(
                f"half_width_right_over_kappa_i at G={g / ki!r} = "
                f"{fine.peak.half_width_right / ki!r}")
    table = SweepTable(
        columns=("G_over_kappa_i", "delta_over_kappa_i", "F_I_scaled", "flag"),
        rows=rows,
        manifest=manifest_lines(cfg, extra=[
            "figure = 6 (Fisher information vs coupling and shift)",
            *width_lines,
        ]))
    csv_path = write_table(table, outdir / "fig6_fisher_map.csv")

    fig, ax = plt.subplots(figsize=(6, 4))
    pos = shift_grid > 0
    F = np.array([r[2] for r in rows]).reshape(len(g_grid), len(shift_grid))
    mesh = ax.pcolormesh(g_grid / ki, half / ki, np.log10(F[:, pos].T + 1e-300),
                         shading="auto", cmap="viridis")
    ax.set_yscale("log")
    ax.set_xlabel("G / kappa_i")
    ax.set_ylabel("shift delta / kappa_i")
    fig.colorbar(mesh, ax=ax, label="log10 F_I")
    png_path = _save_png(fig, outdir / "fig6_fisher_map.png")
    return [csv_path, png_path]


def _fig7(outdir: Path, config: ResolvedConfig | None) -> list[Path]:
    """Nominal V-port Fisher information vs shift at the sensitivity optimum."""
    cfg = config or _default_cfg(overrides=["kappa_ex = 10 kappa_i",
                                            "G = 0.1 kappa_i"])
    params = cfg.system
    ki = params.kappa_i
    grid = np.linspace(-0.02 * ki, 0.02 * ki, 4001)
    curve = fisher_v_curve(params, grid)
    fine = fisher_v_curve(params, feature_grid(params))
    table = SweepTable(
        columns=("delta_over_kappa_i", "F_IV_scaled", "flag"),
        rows=[(g / ki, curve.values[i], 0) for i, g in enumerate(grid)],
        manifest=manifest_lines(cfg, extra=[
            "figure = 7 (V-port nominal Fisher information vs shift)",
            f"peak_F_IV_scaled = {fine.peak.value!r}",
            f"peak_location_over_kappa_i = {fine.peak.location / ki!r}",
            f"fwhm_over_kappa_i = {fine.peak.fwhm / ki!r}",
            f"half_width_right_over_kappa_i = {fine.peak.half_width_right / ki!r}",
        ]))
    csv_path = write_table(table, outdir / "fig7_vport_fisher.csv")

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(grid / ki, curve.values, color="tab:purple")
    ax.set_xlabel("shift delta / kappa_i")
    ax.set_ylabel("F_IV [(mu_B g_e / kappa_i)^2]")
    ax.set_yscale("log")
    png_path = _save_png(fig, outdir / "fig7_vport_fisher.png")
    return [csv_path, png_path]
