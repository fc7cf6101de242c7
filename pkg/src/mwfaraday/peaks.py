"""Peak, FWHM and bracketed-maximum extraction for sampled curves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .params import SystemParams


class NoFeatureError(RuntimeError):
    """Raised when a curve has no usable peak in the sampled range."""


@dataclass(frozen=True)
class PeakInfo:
    """Peak of a sampled curve with linearly interpolated half-max crossings.

    `fwhm` is the width of the contiguous region around the peak where the
    curve stays above half maximum (two-sided).  When a crossing is not
    reached inside the grid the corresponding edge is used and flagged.
    `half_width_right` is the peak-to-right-crossing distance, the natural
    half-width of an even feature centred on the grid origin.
    """

    value: float
    location: float
    fwhm: float
    x_left: float
    x_right: float
    left_clamped: bool
    right_clamped: bool

    @property
    def half_width_right(self) -> float:
        return self.x_right - self.location


def extract_peak(x: np.ndarray, y: np.ndarray) -> PeakInfo:
    """Locate the global maximum of y(x) and its half-max crossings.

    Ties are broken toward the smallest |x|.  A flat or non-positive curve
    has no feature and raises NoFeatureError.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size < 3:
        raise ValueError("x and y must be matching 1-d arrays of size >= 3")
    if not np.all(np.diff(x) > 0):
        raise ValueError("x must be strictly increasing")

    ymax = float(np.max(y))
    ymin = float(np.min(y))
    if not (ymax > 0.0) or ymax == ymin:
        raise NoFeatureError("no feature in range")

    candidates = np.flatnonzero(y == ymax)
    i = int(candidates[np.argmin(np.abs(x[candidates]))])
    half = ymax / 2.0

    x_left, left_clamped = float(x[0]), True
    for j in range(i - 1, -1, -1):
        if y[j] < half:
            x_left = float(x[j] + (half - y[j]) * (x[j + 1] - x[j]) / (y[j + 1] - y[j]))
            left_clamped = False
            break
    x_right, right_clamped = float(x[-1]), True
    for j in range(i + 1, x.size):
        if y[j] < half:
            x_right = float(x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1]))
            right_clamped = False
            break

    return PeakInfo(value=ymax, location=float(x[i]), fwhm=x_right - x_left,
                    x_left=x_left, x_right=x_right,
                    left_clamped=left_clamped, right_clamped=right_clamped)


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-12) -> tuple[float, float]:
    """Golden-section maximization of a unimodal f on [lo, hi]."""
    if not hi > lo:
        raise ValueError("need hi > lo")
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol * max(1.0, abs(a), abs(b)):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def feature_grid(params: SystemParams, n_per_side: int = 2000,
                 span: float = 4.0) -> np.ndarray:
    """Symmetric log-spaced shift grid resolving both narrow and broad features.

    The narrow scale is the width of the spin-induced feature in the
    reflection, (kappa*gamma/2 + G^2)/kappa; the outer scale is a multiple
    of the total cavity linewidth.  The grid contains 0 and is strictly
    increasing, suitable for the curve extractors.
    """
    kappa = params.kappa
    narrow = (kappa * params.gamma / 2.0 + params.G**2) / kappa
    lo = max(narrow * 1e-4, params.kappa_i * 1e-12)
    hi = span * kappa
    g = np.geomspace(lo, hi, n_per_side)
    return np.concatenate([-g[::-1], [0.0], g])
