"""High-precision finite-difference oracle for the probability derivatives.

The analytic chain-rule derivatives are checked against Richardson-
extrapolated central differences of the outcome probabilities with step
1e-6 kappa_i.  In double precision the differencing itself is limited by
rounding noise near 1e-10, so the probabilities entering the differences
are evaluated with mpmath at 40 significant digits; the differencing
scheme is unchanged.
"""

from __future__ import annotations

import numpy as np
from mpmath import mp, mpc, mpf

from .params import SystemParams
from .single_photon import probability_derivatives

mp.dps = 40


def _mp_probs(params: SystemParams, shift: mpf) -> tuple[mpf, mpf, mpf]:
    """(P_V, P_H, P_empty) at a total shift, in arbitrary precision."""
    cav = mpc(params.kappa_ex + params.kappa_i, params.Delta_r)
    g2 = mpf(params.G) ** 2
    branches = []
    for branch in (+1, -1):
        E = mpc(mpf(params.gamma) / 2, params.Delta_q + branch * shift)
        u = cav * E + g2
        branches.append(-1 + 2 * params.kappa_ex * E / u)
    rp, rm = branches
    r_vh = (rp - rm) / 2
    r_hh = (rp + rm) / 2
    p_v = abs(r_vh) ** 2
    p_h = abs(r_hh) ** 2
    return p_v, p_h, 1 - p_v - p_h


def _richardson_fd(params: SystemParams, shift: float, h: float) -> np.ndarray:
    """Central differences at steps h, h/2, h/4 with two Richardson levels."""
    x = mpf(shift)

    def diff(step: mpf) -> list[mpf]:
        up = _mp_probs(params, x + step)
        dn = _mp_probs(params, x - step)
        return [(a - b) / (2 * step) for a, b in zip(up, dn)]

    h = mpf(h)
    d1, d2, d4 = diff(h), diff(h / 2), diff(h / 4)
    r1 = [(4 * b - a) / 3 for a, b in zip(d1, d2)]
    r2 = [(4 * b - a) / 3 for a, b in zip(d2, d4)]
    return np.array([float((16 * b - a) / 15) for a, b in zip(r1, r2)])


def derivative_check(n_draws: int = 200, seed: int = 0,
                     floor: float = 1e-10) -> float:
    """Worst relative deviation of analytic vs FD derivatives over draws.

    Only components with |dP| above `floor` (in 1/kappa_i units) enter the
    comparison, matching the stated validity region.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_draws):
        params = SystemParams(
            kappa_i=1.0,
            kappa_ex=10.0 ** rng.uniform(-1, 2),
            G=10.0 ** rng.uniform(-4, 1),
            gamma=10.0 ** rng.uniform(-4, 0),
            Delta_r=rng.uniform(-10, 10),
            Delta_q=rng.uniform(-10, 10),
            A=rng.uniform(-10, 10),
            delta=rng.uniform(-10, 10),
        )
        analytic = probability_derivatives(params)
        fd = _richardson_fd(params, params.shift, 1e-6 * params.kappa_i)
        for a, b in zip(analytic, fd):
            if abs(a) > floor:
                worst = max(worst, abs(a - b) / abs(a))
    return worst
