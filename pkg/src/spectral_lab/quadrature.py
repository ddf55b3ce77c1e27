"""Adaptive Gauss-Kronrod quadrature with convergence diagnostics.

Thin wrapper over QUADPACK (``scipy.integrate.quad``) that turns silent
accuracy warnings into :class:`QuadratureError` and, on bounded intervals,
bisects the failing range so the caller can see where convergence broke.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable, Iterable, Optional, Sequence

from scipy import integrate

from .errors import QuadratureError

EPSABS = 1e-10
EPSREL = 1e-9
LIMIT = 2000
_BISECT_DEPTH = 6


def _quad(fn, a, b, epsabs, epsrel, limit, points, weight=None, wvar=None):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        kwargs = dict(epsabs=epsabs, epsrel=epsrel, limit=limit)
        if points is not None and math.isfinite(a) and math.isfinite(b):
            inner = [p for p in points if a < p < b]
            if inner:
                kwargs["points"] = sorted(set(inner))
        if weight is not None:
            kwargs["weight"] = weight
            kwargs["wvar"] = wvar
        value, err = integrate.quad(fn, a, b, **kwargs)
    ok = not any(issubclass(w.category, integrate.IntegrationWarning) for w in caught)
    ok = ok and math.isfinite(value) and math.isfinite(err)
    return value, err, ok


def _bisect_trace(fn, a, b, epsabs, epsrel, limit, points):
    trace = []
    lo, hi = a, b
    for _ in range(_BISECT_DEPTH):
        mid = 0.5 * (lo + hi)
        left = _quad(fn, lo, mid, epsabs, epsrel, limit, points)
        right = _quad(fn, mid, hi, epsabs, epsrel, limit, points)
        trace.append((lo, mid) + left)
        trace.append((mid, hi) + right)
        if not left[2]:
            hi = mid
        elif not right[2]:
            lo = mid
        else:
            break
    return trace


def integrate_1d(
    fn: Callable[[float], float],
    a: float,
    b: float,
    *,
    epsabs: float = EPSABS,
    epsrel: float = EPSREL,
    limit: int = LIMIT,
    points: Optional[Iterable[float]] = None,
    what: str = "integral",
) -> tuple[float, float]:
    """Integrate ``fn`` over ``[a, b]`` (either end may be infinite).

    Returns ``(value, abs_error)``. Raises :class:`QuadratureError` when the
    routine reports non-convergence or produces a non-finite result.
    """
    if a == b:
        return 0.0, 0.0
    pts: Optional[Sequence[float]] = list(points) if points is not None else None
    value, err, ok = _quad(fn, a, b, epsabs, epsrel, limit, pts)
    if ok:
        return value, err
    trace = [(a, b, value, err, False)]
    if math.isfinite(a) and math.isfinite(b):
        trace += _bisect_trace(fn, a, b, epsabs, epsrel, limit, pts)
    raise QuadratureError(f"{what}: quadrature did not converge on [{a:.6g}, {b:.6g}]", trace)


def integrate_fourier(
    fn: Callable[[float], float],
    a: float,
    omega: float,
    kind: str,
    *,
    epsabs: float = EPSABS,
    limit: int = LIMIT,
    what: str = "Fourier integral",
) -> tuple[float, float]:
    """``∫_a^∞ fn(x)·{sin,cos}(omega·x) dx`` via QUADPACK's QAWF rule."""
    value, err, ok = _quad(fn, a, math.inf, epsabs, 0.0, limit, None, weight=kind, wvar=omega)
    if not ok:
        raise QuadratureError(f"{what}: QAWF did not converge", [(a, math.inf, value, err, False)])
    return value, err
