"""Reference-claims acceptance runner behind the `check-paper` subcommand.

Every published headline number the toolkit is meant to reproduce is
checked here against a fresh computation and reported as a pass/fail row
with both values.  Failing rows are data, not errors; the CLI exit code
(2 when failures are present) is the only side channel.

Known irreproducible claims are still checked at their stated tolerances
and reported as failures, together with discrepancy rows quantifying the
gap.  See the README for the analysis of each.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import default_config
from .langevin import noise_transfer_row, oracle_reflection
from .multiphoton import (fisher_v_curve, mw_vs_optical_factor, noise_budget,
                          sensitivity_mp, thermal_occupation)
from .params import ProbeSpec, SystemParams, ThermalEnvironment
from .peaks import feature_grid
from .single_photon import (_prob_arrays, fisher_curve, outcome_probabilities,
                            probability_derivatives, sensitivity_sp)
from .spectra import polarized_reflection, reflection_coefficient
from .sweep import format_cell, manifest_lines

SEED = 20260810

# Published headline values targeted by the checks.
REF_PV_MAX = 0.25
REF_PV_MAX_LOCATION = 0.494  # units of kappa_i
REF_FISHER_PEAK = 29.0  # (mu_B g_e / kappa_i)^2
REF_FISHER_PEAK_LOCATION = 0.07
REF_FISHER_FWHM = 0.6
REF_SENS_BASELINE = 1.2e-11  # * sqrt(kappa_i) T/sqrt(Hz)
REF_SENS_OPT = 0.027  # * sqrt(kappa_i)/(mu_B g_e)
REF_SENS_OPT_SI = 5.2e-9  # T/sqrt(Hz) at kappa_i = 28 MHz
REF_FIV_PEAK = 1e5
REF_FIV_FWHM = 4e-3
REF_IMPROVEMENT = 10.0
REF_MP_ENDPOINT_COEFF = 1.92e-19  # * sqrt(kappa_i) T/sqrt(Hz)
REF_OMEGA_OPTICAL = 1.78e15  # rad/s


@dataclass(frozen=True)
class ClaimRow:
    claim_id: str
    description: str
    computed: float
    target: float
    tolerance: str
    passed: bool


@dataclass(frozen=True)
class RunManifest:
    rows: list[ClaimRow]
    header: list[str]

    @property
    def has_failures(self) -> bool:
        return any(not r.passed for r in self.rows)

    def to_text(self) -> str:
        buf = io.StringIO()
        for line in self.header:
            buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("claim_id", "description", "computed", "target",
                         "tolerance", "status"))
        for r in self.rows:
            writer.writerow((r.claim_id, r.description, format_cell(r.computed),
                             format_cell(r.target), r.tolerance,
                             "PASS" if r.passed else "FAIL"))
        return buf.getvalue()

    def write(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(), encoding="utf-8", newline="")
        return path


def _baseline(ki: float = 1.0) -> SystemParams:
    return SystemParams(kappa_i=ki, kappa_ex=ki, G=ki, gamma=1e-3 * ki)


def _optimum(ki: float = 1.0) -> SystemParams:
    return SystemParams(kappa_i=ki, kappa_ex=10 * ki, G=0.1 * ki, gamma=1e-3 * ki)


def _draw_params(rng: np.random.Generator) -> tuple[SystemParams, int]:
    kappa_ex = 10.0 ** rng.uniform(-1, 2)
    G = 10.0 ** rng.uniform(-4, 1)
    gamma = 10.0 ** rng.uniform(-4, 0)
    d_r, d_q, bias, delta = rng.uniform(-10, 10, 4)
    branch = +1 if rng.uniform() < 0.5 else -1
    return SystemParams(kappa_i=1.0, kappa_ex=kappa_ex, G=G, gamma=gamma,
                        Delta_r=d_r, Delta_q=d_q, A=bias, delta=delta), branch


def run_reference_checks(oracle_draws: int = 10_000,
                         fd_draws: int = 200) -> RunManifest:
    """Compute every claim row.  Pure and deterministic (fixed seed)."""
    rows: list[ClaimRow] = []

    def add(cid: str, desc: str, computed: float, target: float, tol: str,
            ok: bool) -> None:
        rows.append(ClaimRow(cid, desc, float(computed), float(target), tol, ok))

    # 1: closed-form reflection vs Langevin steady-state solve.
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(oracle_draws):
        params, branch = _draw_params(rng)
        r_cf = reflection_coefficient(params, branch)
        r_or = oracle_reflection(params, branch)
        denom = abs(r_cf) if r_cf != 0 else 1.0
        worst = max(worst, abs(r_cf - r_or) / denom)
    add("1", "oracle equivalence: max relative deviation over draws",
        worst, 1e-10, "< 1e-10", worst < 1e-10)

    # 1b (supporting invariant): noise routing vs S_r/S_t assembly.
    rng_b = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(200):
        params, _ = _draw_params(rng_b)
        row = noise_transfer_row(params)
        pol = polarized_reflection(params)
        rho = np.sqrt(params.kappa_i / params.kappa_ex)
        expected = np.array([-1j * pol.r_VH, -1j * pol.r_VH * rho,
                             pol.r_HH, (1.0 + pol.r_HH) * rho])
        worst = max(worst, float(np.max(np.abs(row - expected))))
    add("1b", "noise transfer row vs scattering-matrix assembly",
        worst, 1e-12, "< 1e-12", worst < 1e-12)

    # 2: P_V maximum on the prescribed 4001-point grid.
    base = _baseline()
    grid = np.linspace(-2.0, 2.0, 4001)
    P, _, _ = _prob_arrays(base, grid)
    i = int(np.argmax(P[0]))
    add("2a", "max P_V over |delta| <= 2 kappa_i",
        P[0, i], REF_PV_MAX, "+- 0.005", abs(P[0, i] - REF_PV_MAX) <= 0.005)
    add("2b", "location |delta| of the P_V maximum (kappa_i units)",
        abs(grid[i]), REF_PV_MAX_LOCATION, "+- 0.005",
        abs(abs(grid[i]) - REF_PV_MAX_LOCATION) <= 0.005)

    # 3: normalization and symmetry over random draws.
    rng3 = np.random.default_rng(SEED + 2)
    worst_sum, worst_even, worst_odd = 0.0, 0.0, 0.0
    for _ in range(300):
        kappa_ex = 10.0 ** rng3.uniform(-1, 2)
        G = 10.0 ** rng3.uniform(-2, 1)
        gamma = 10.0 ** rng3.uniform(-4, 0)
        params = SystemParams(kappa_i=1.0, kappa_ex=kappa_ex, G=G, gamma=gamma)
        delta = rng3.uniform(0, 5)
        for sgn in (+1.0, -1.0):
            probs = outcome_probabilities(params.with_delta(sgn * delta))
            worst_sum = max(worst_sum,
                            abs(probs.p_v + probs.p_h + probs.p_empty - 1.0))
        p_pos, _, _ = _prob_arrays(params, np.array([delta]))
        p_neg, _, _ = _prob_arrays(params, np.array([-delta]))
        worst_even = max(worst_even, float(np.max(np.abs(p_pos - p_neg))))
        d_pos = probability_derivatives(params.with_delta(delta))
        d_neg = probability_derivatives(params.with_delta(-delta))
        worst_odd = max(worst_odd, float(np.max(np.abs(d_pos + d_neg))))
    add("3a", "normalization P_V+P_H+P_empty = 1 (worst |deviation|)",
        worst_sum, 0.0, "exact", worst_sum == 0.0)
    add("3b", "evenness of P_xi at A=0 (worst |deviation|)",
        worst_even, 1e-12, "<= 1e-12", worst_even <= 1e-12)
    add("3c", "oddness of dP_xi at A=0 (worst |deviation|)",
        worst_odd, 1e-12, "<= 1e-12", worst_odd <= 1e-12)

    # 4: Fisher peak, location, FWHM for the baseline.
    fine = fisher_curve(base, feature_grid(base))
    add("4a", "Fisher peak (baseline, scaled units)",
        fine.peak.value, REF_FISHER_PEAK, "+- 10%",
        abs(fine.peak.value - REF_FISHER_PEAK) <= 0.10 * REF_FISHER_PEAK)
    add("4b", "Fisher peak |location| (kappa_i units)",
        abs(fine.peak.location), REF_FISHER_PEAK_LOCATION, "+- 0.02",
        abs(abs(fine.peak.location) - REF_FISHER_PEAK_LOCATION) <= 0.02)
    add("4c", "Fisher FWHM (kappa_i units)",
        fine.peak.fwhm, REF_FISHER_FWHM, "+- 20%",
        abs(fine.peak.fwhm - REF_FISHER_FWHM) <= 0.20 * REF_FISHER_FWHM)

    # 5: single-photon sensitivities.
    rep_base = sensitivity_sp(base, feature_grid(base))
    target = REF_SENS_BASELINE
    ratio = max(rep_base.value / target, target / rep_base.value)
    add("5a", "baseline sensitivity coefficient (T/sqrt(Hz) per sqrt(kappa_i))",
        rep_base.value, target, "within factor 1.5", ratio <= 1.5)
    opt = _optimum()
    rep_opt = sensitivity_sp(opt, feature_grid(opt))
    add("5b", "optimized sensitivity (sqrt(kappa_i)/(mu_B g_e) units)",
        rep_opt.scaled_value, REF_SENS_OPT, "+- 15%",
        abs(rep_opt.scaled_value - REF_SENS_OPT) <= 0.15 * REF_SENS_OPT)
    opt28 = _optimum(28e6)
    rep28 = sensitivity_sp(opt28, feature_grid(opt28))
    add("5c", "optimized sensitivity at kappa_i = 28 MHz (T/sqrt(Hz))",
        rep28.value, REF_SENS_OPT_SI, "+- 15%",
        abs(rep28.value - REF_SENS_OPT_SI) <= 0.15 * REF_SENS_OPT_SI)

    # 6: optimum band, G = 0.1 kappa_i, kappa_ex/kappa_i in [8, 20].
    worst_band = 0.0
    for kex in np.linspace(8.0, 20.0, 25):
        params = SystemParams(kappa_i=1.0, kappa_ex=float(kex), G=0.1,
                              gamma=1e-3)
        rep = sensitivity_sp(params, feature_grid(params))
        worst_band = max(worst_band, rep.scaled_value)
    add("6", "max sensitivity over kappa_ex/kappa_i in [8,20] at G=0.1 kappa_i",
        worst_band, 0.03, "< 0.03", worst_band < 0.03)

    # 7: V-port nominal Fisher peak and FWHM.
    curve_v = fisher_v_curve(opt, feature_grid(opt))
    ratio_v = max(curve_v.peak.value / REF_FIV_PEAK,
                  REF_FIV_PEAK / curve_v.peak.value)
    add("7a", "V-port Fisher peak (scaled units)",
        curve_v.peak.value, REF_FIV_PEAK, "within factor 2", ratio_v <= 2.0)
    add("7b", "V-port Fisher FWHM (kappa_i units)",
        curve_v.peak.fwhm, REF_FIV_FWHM, "+- 50%",
        abs(curve_v.peak.fwhm - REF_FIV_FWHM) <= 0.50 * REF_FIV_FWHM)

    # 8: multiphoton chain.
    dev_small = _cth_deviation(1e-3)
    dev_big = _cth_deviation(1e-2)
    rate = dev_big / dev_small
    add("8a", "C_th limit deviation ratio across kappa_i/kappa_ex 1e-2 vs 1e-3",
        rate, 100.0, "in [50, 200] (O(rho^2) scaling)", 50.0 <= rate <= 200.0)

    cfg = default_config(28e6, ["kappa_ex = 10 kappa_i", "G = 0.1 kappa_i"])
    biased = cfg.system.with_delta(curve_v.peak.location * 28e6)
    rep_mp_1 = sensitivity_mp(biased, cfg.env, cfg.probe)
    probe2 = ProbeSpec.for_cavity(cfg.probe.P_in, 2.0 * cfg.probe.tau_m,
                                  cfg.system.omega_r)
    rep_mp_2 = sensitivity_mp(biased, cfg.env, probe2)
    add("8b", "tau_m invariance of the multiphoton limit (relative change)",
        abs(rep_mp_2.value - rep_mp_1.value), 0.0, "exact",
        rep_mp_2.value == rep_mp_1.value)

    pub_q100 = REF_MP_ENDPOINT_COEFF * np.sqrt(28e6)
    pub_q1e5 = REF_MP_ENDPOINT_COEFF * np.sqrt(28e3)
    pub_ratio = pub_q1e5 / pub_q100
    add("8c", "preset ratio of published-scaling endpoints (sqrt scaling)",
        pub_ratio, np.sqrt(1e-3), "+- 5%",
        abs(pub_ratio - np.sqrt(1e-3)) <= 0.05 * np.sqrt(1e-3))

    cfg_lo = default_config(28e3, ["kappa_ex = 10 kappa_i", "G = 0.1 kappa_i"])
    biased_lo = cfg_lo.system.with_delta(curve_v.peak.location * 28e3)
    rep_mp_lo = sensitivity_mp(biased_lo, cfg_lo.env, cfg_lo.probe)
    add("8d-i", "discrepancy: computed/published multiphoton endpoint, Q=100",
        rep_mp_1.value / pub_q100, 1.0, "report only (flag if > 2x)", True)
    add("8d-ii", "discrepancy: computed/published multiphoton endpoint, Q=1e5",
        rep_mp_lo.value / pub_q1e5, 1.0, "report only (flag if > 2x)", True)
    add("8d-iii", "discrepancy: computed preset rescaling ratio (formula gives "
        "kappa_i-linear scaling, not sqrt)",
        rep_mp_lo.value / rep_mp_1.value, 1e-3, "report only", True)

    # 9: microwave vs optical improvement factor.
    factor = mw_vs_optical_factor(70.0, REF_OMEGA_OPTICAL)
    add("9", "microwave-over-optical improvement factor at 70 K",
        factor, REF_IMPROVEMENT, "+- 5%",
        abs(factor - REF_IMPROVEMENT) <= 0.05 * REF_IMPROVEMENT)

    # 10: analytic derivatives vs high-precision Richardson differences.
    from .fdcheck import derivative_check

    worst_fd = derivative_check(n_draws=fd_draws, seed=SEED + 3)
    add("10", "analytic dP vs Richardson central differences (worst relative)",
        worst_fd, 1e-8, "<= 1e-8 where |dP| > 1e-10", worst_fd <= 1e-8)

    # 11: determinism of a representative figure job under rerun and jobs.
    import tempfile

    from .figures import figure_job

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        a = figure_job(4, tmp / "a", jobs=1)[0].read_bytes()
        b = figure_job(4, tmp / "b", jobs=2)[0].read_bytes()
        same = _strip_timestamp(a) == _strip_timestamp(b)
    add("11", "figure job byte-identical across reruns and --jobs (0=no diff)",
        0.0 if same else 1.0, 0.0, "identical", same)

    header = manifest_lines(None, extra=[
        "report = check-paper reference-claims acceptance run",
        f"oracle_draws = {oracle_draws}",
        f"seed = {SEED}",
        "config: baseline = kappa_ex = G = kappa_i, gamma = 1e-3 kappa_i, "
        "detunings and bias zero",
        "config: optimum = kappa_ex = 10 kappa_i, G = 0.1 kappa_i, "
        "gamma = 1e-3 kappa_i",
        "config: presets = optimum at kappa_i = 28 MHz (Q=100) and "
        "28 kHz (Q=1e5), omega_r = 2.8 GHz, T = 70 K, P_in = 1 nW",
        "note: rows 2b, 5b, 5c, 7a, 7b check published values that are not "
        "reproducible from the published formula chain at the stated "
        "parameters; see README for the analysis",
        "note: rows 8d-* quantify the multiphoton endpoint discrepancy "
        "(computed value exceeds the published one by more than 2x and "
        "scales linearly in kappa_i, not as sqrt)",
    ])
    return RunManifest(rows=rows, header=header)


def _cth_deviation(rho: float) -> float:
    """|C_th - 2(P_V + P_H)| at kappa_i/kappa_ex = rho, fixed shift."""
    params = SystemParams(kappa_i=1.0, kappa_ex=1.0 / rho, G=0.1, gamma=1e-3,
                          delta=0.3)
    env = ThermalEnvironment(T=70.0, n_th=thermal_occupation(70.0, 2.8e9))
    budget = noise_budget(params, env)
    probs = outcome_probabilities(params)
    return abs(budget.c_th - 2.0 * (probs.p_v + probs.p_h))


def _strip_timestamp(data: bytes) -> bytes:
    return b"\n".join(line for line in data.split(b"\n")
                      if not line.startswith(b"# timestamp"))
