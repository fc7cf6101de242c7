"""Command-line interface.

Subcommands: reflect, probs, fisher-sp, sense-sp, fisher-mp, sense-mp,
sweep, figure <N>, check-paper.  Every subcommand takes --config FILE and
repeatable --set key=value overrides; without --config the documented
defaults at kappa_i = 28 MHz apply.  File-producing commands take
--out DIR.  Exit codes: 0 success, 1 usage/config error, 2 acceptance
failures present (check-paper only).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import ConfigError, ResolvedConfig, load_config, parse_config
from .multiphoton import (NoSignalError, nominal_fisher_v, sensitivity_mp)
from .peaks import NoFeatureError, feature_grid
from .single_photon import (fisher_information_sp, outcome_probabilities,
                            sensitivity_sp)
from .spectra import polarized_reflection


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits with 2
        raise ConfigError(message)


def _add_common(p: argparse.ArgumentParser, out: bool = False) -> None:
    p.add_argument("--config", metavar="FILE", help="config file (key = value lines)")
    p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                   dest="overrides", help="override a config key (repeatable)")
    if out:
        p.add_argument("--out", metavar="DIR", default=".",
                       help="output directory (default: current directory)")
        p.add_argument("--jobs", type=int, default=0, metavar="N",
                       help="worker processes (default: available parallelism)")


def build_parser() -> _Parser:
    parser = _Parser(prog="mwfaraday",
                     description="Faraday-rotation microwave magnetometer toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (
        ("reflect", "branch reflection amplitudes and Faraday angle"),
        ("probs", "single-photon outcome probabilities"),
        ("fisher-sp", "single-photon Fisher information at the bias point"),
        ("fisher-mp", "V-port nominal Fisher information at the bias point"),
    ):
        _add_common(sub.add_parser(name, help=help_))

    _add_common(sub.add_parser(
        "sense-sp", help="single-photon Cramer-Rao sensitivity"))
    _add_common(sub.add_parser(
        "sense-mp", help="multiphoton thermal-noise-limited sensitivity"))

    sweep_p = sub.add_parser("sweep", help="parameter sweep to CSV")
    _add_common(sweep_p, out=True)
    sweep_p.add_argument("--quantity", required=True,
                         help="one of: P_V P_H P_empty F_I F_IV phi_F sens_sp sens_mp")
    sweep_p.add_argument("--axis1", required=True, metavar="NAME:START:STOP:N[:log]")
    sweep_p.add_argument("--axis2", metavar="NAME:START:STOP:N[:log]")
    sweep_p.add_argument("--stdout", action="store_true",
                         help="write CSV to stdout instead of a file")

    fig_p = sub.add_parser("figure", help="reproduce a reference figure (CSV + PNG)")
    fig_p.add_argument("fig_id", type=int, choices=(3, 4, 5, 6, 7), metavar="N")
    _add_common(fig_p, out=True)

    check_p = sub.add_parser("check-paper",
                             help="run the reference-claims acceptance suite")
    _add_common(check_p, out=True)
    check_p.add_argument("--draws", type=int, default=10_000,
                         help="random draws for the oracle-equivalence check")
    return parser


def _load(args, default_kappa_i: float = 28e6) -> ResolvedConfig:
    if args.config:
        return load_config(args.config, args.overrides)
    return parse_config(f"kappa_i = {default_kappa_i!r} Hz", args.overrides)


def _axis_from_text(text: str, cfg: ResolvedConfig):
    from .config import parse_value, _resolve
    from .sweep import AxisSpec

    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError(f"axis spec {text!r}: expected NAME:START:STOP:N[:log]")
    name = parts[0].strip()
    log = False
    if len(parts) == 5:
        if parts[4].strip() != "log":
            raise ConfigError(f"axis spec {text!r}: trailing field must be 'log'")
        log = True
    ki = cfg.values["kappa_i"]
    start = _resolve(name, parse_value(parts[1], key=name), ki)
    stop = _resolve(name, parse_value(parts[2], key=name), ki)
    try:
        npts = int(parts[3])
    except ValueError as exc:
        raise ConfigError(f"axis spec {text!r}: bad point count") from exc
    return AxisSpec(name=name, start=start, stop=stop, points=npts, log=log)


def _emit(lines: list[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def _run(args) -> int:
    cmd = args.command

    if cmd == "reflect":
        pol = polarized_reflection(_load(args).system)
        _emit([
            f"r_plus = {pol.r_plus!r}",
            f"r_minus = {pol.r_minus!r}",
            f"r_bar = {pol.r_bar!r}",
            f"delta_r = {pol.delta_r!r}",
            f"phi_F_rad = {pol.phi_F!r}",
            f"r_HH = {pol.r_HH!r}",
            f"r_VH = {pol.r_VH!r}",
            f"singular = {pol.singular}",
        ])
        return 0

    if cmd == "probs":
        probs = outcome_probabilities(_load(args).system)
        _emit([f"P_V = {probs.p_v!r}", f"P_H = {probs.p_h!r}",
               f"P_empty = {probs.p_empty!r}"])
        return 0

    if cmd == "fisher-sp":
        fi = fisher_information_sp(_load(args).system)
        _emit([f"F_I_scaled = {fi.scaled!r}", f"F_I_si_per_T2 = {fi.si!r}"])
        return 0

    if cmd == "fisher-mp":
        fi = nominal_fisher_v(_load(args).system)
        _emit([f"F_IV_scaled = {fi.scaled!r}", f"F_IV_si_per_T2 = {fi.si!r}"])
        return 0

    if cmd == "sense-sp":
        params = _load(args).system
        rep = sensitivity_sp(params, feature_grid(params))
        _emit([
            f"sensitivity_T_per_sqrtHz = {rep.value!r}",
            f"sensitivity_scaled = {rep.scaled_value!r}",
            f"fisher_peak_scaled = {rep.fisher_peak.scaled!r}",
            f"peak_location_over_kappa_i = {rep.peak_location / params.kappa_i!r}",
            f"fwhm_over_kappa_i = {rep.fwhm / params.kappa_i!r}",
            f"tau_m_s = {rep.tau_m!r}",
            f"conventions = {rep.convention_notes}",
        ])
        return 0

    if cmd == "sense-mp":
        cfg = _load(args)
        rep = sensitivity_mp(cfg.system, cfg.env, cfg.probe)
        _emit([
            f"sensitivity_T_per_sqrtHz = {rep.value!r}",
            f"sensitivity_kbt_form = {rep.value_kbt!r}",
            f"sensitivity_simplified = {rep.value_simplified!r}",
            f"F_IV_scaled = {rep.fisher_v.scaled!r}",
            f"C_th = {rep.c_th!r}",
            f"P_V = {rep.p_v!r}",
            f"n_th = {rep.n_th!r}",
            f"conventions = {rep.convention_notes}",
        ])
        return 0

    if cmd == "sweep":
        from .sweep import SweepSpec, run_sweep, table_to_text, write_table

        cfg = _load(args)
        axis1 = _axis_from_text(args.axis1, cfg)
        axis2 = _axis_from_text(args.axis2, cfg) if args.axis2 else None
        spec = SweepSpec(quantity=args.quantity, axis1=axis1, axis2=axis2,
                         fixed=cfg)
        jobs = args.jobs if args.jobs > 0 else (os.cpu_count() or 1)
        table = run_sweep(spec, jobs=jobs)
        if args.stdout:
            sys.stdout.write(table_to_text(table))
        else:
            path = write_table(table, Path(args.out) / f"sweep_{args.quantity}.csv")
            _emit([f"wrote {path}"])
        return 0

    if cmd == "figure":
        from .figures import figure_job

        cfg = _load(args) if (args.config or args.overrides) else None
        jobs = args.jobs if args.jobs > 0 else (os.cpu_count() or 1)
        paths = figure_job(args.fig_id, Path(args.out), config=cfg, jobs=jobs)
        _emit([f"wrote {p}" for p in paths])
        return 0

    if cmd == "check-paper":
        from .checkpaper import run_reference_checks

        manifest = run_reference_checks(oracle_draws=args.draws)
        path = manifest.write(Path(args.out) / "check_paper.csv")
        for row in manifest.rows:
            status = "PASS" if row.passed else "FAIL"
            sys.stdout.write(f"{status} [{row.claim_id}] {row.description}: "
                             f"computed {row.computed!r} vs {row.target!r} "
                             f"({row.tolerance})\n")
        sys.stdout.write(f"wrote {path}\n")
        return 2 if manifest.has_failures else 0

    raise ConfigError(f"unknown command {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (NoFeatureError, NoSignalError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
