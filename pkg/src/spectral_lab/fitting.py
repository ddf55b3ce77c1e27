"""Least-squares line fits shared by the scaling, Schwinger and Fourier modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import FitError


@dataclass(frozen=True)
class LineFit:
    slope: float
    intercept: float
    slope_stderr: float
    max_residual: float


def fit_line(x, y) -> LineFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise FitError(f"need >= 3 matching points for a line fit, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise FitError("non-finite data in line fit")
    if np.ptp(x) == 0:
        raise FitError("degenerate abscissae in line fit")
    res = stats.linregress(x, y)
    resid = y - (res.intercept + res.slope * x)
    stderr = float(res.stderr) if np.isfinite(res.stderr) else 0.0
    return LineFit(float(res.slope), float(res.intercept), stderr, float(np.max(np.abs(resid))))


def fit_loglog(x, y) -> LineFit:
    """Fit ``log|y| = a + b·log x``; all ``y`` must share one sign."""
    y = np.asarray(y, dtype=float)
    if np.any(y == 0) or (np.any(y > 0) and np.any(y < 0)):
        raise FitError("log-log fit needs values of one strict sign")
    return fit_line(np.log(np.asarray(x, dtype=float)), np.log(np.abs(y)))
