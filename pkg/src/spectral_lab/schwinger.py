"""Dipole-state energies in the massive-boson picture of two-dimensional QED.

The dipole state is created by the smeared field momentum with a profile
``g`` equal to 1 on ``[0, R]`` and 0 outside ``(−ε, R + ε)``. Its energy above
the vacuum is

    E = (π/2) ∫ g′(x)² dx + (e²/2) ∫ g(x)² dx,

the second term coming from the boson mass ``e/√π``. The gradient term is
bounded in ``R`` while the mass term grows linearly, which is the
confinement signal.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, FitError
from .fitting import fit_line
from .quadrature import integrate_1d

RAMPS = ("linear", "smoothstep")
DEFAULT_R_GRID = tuple(float(r) for r in range(10, 101, 10))
_REL_TOL = 1e-13


def photon_mass(e: float) -> float:
    """Dynamically generated boson mass ``e/√π``."""
    if not e >= 0:
        raise DomainError(f"coupling must be >= 0, got {e}")
    return e / math.sqrt(math.pi)


def _ramp(t):
    return t


def _ramp_d(t):
    return np.ones_like(t)


def _smooth(t):
    return t * t * (3.0 - 2.0 * t)


def _smooth_d(t):
    return 6.0 * t * (1.0 - t)


_RAMP_FUNCS = {"linear": (_ramp, _ramp_d), "smoothstep": (_smooth, _smooth_d)}


@dataclass(frozen=True)
class DipoleProfile:
    """Trapezoid-like profile: 0 → 1 on ``[−ε, 0]``, 1 on ``[0, R]``, 1 → 0 on ``[R, R+ε]``."""

    R: float
    epsilon: float
    ramp: str = "linear"

    def __post_init__(self):
        if not (self.R > 0 and math.isfinite(self.R)):
            raise DomainError(f"R must be > 0, got {self.R}")
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise DomainError(f"epsilon must be > 0, got {self.epsilon}")
        if self.ramp not in RAMPS:
            raise DomainError(f"ramp must be one of {RAMPS}, got {self.ramp!r}")

    @property
    def support(self) -> tuple[float, float]:
        return (-self.epsilon, self.R + self.epsilon)

    def shape(self, x):
        x = np.asarray(x, dtype=float)
        up, _ = _RAMP_FUNCS[self.ramp]
        rise = up(np.clip((x + self.epsilon) / self.epsilon, 0.0, 1.0))
        fall = up(np.clip((self.R + self.epsilon - x) / self.epsilon, 0.0, 1.0))
        out = np.minimum(rise, fall)
        return out if out.ndim else float(out)

    __call__ = shape

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        _, dup = _RAMP_FUNCS[self.ramp]
        eps = self.epsilon
        out = np.zeros_like(x)
        left = (x > -eps) & (x < 0)
        right = (x > self.R) & (x < self.R + eps)
        out = np.where(left, dup(np.clip((x + eps) / eps, 0, 1)) / eps, out)
        out = np.where(right, -dup(np.clip((self.R + eps - x) / eps, 0, 1)) / eps, out)
        return out if out.ndim else float(out)

    def pieces(self) -> list[tuple[float, float]]:
        return [(-self.epsilon, 0.0), (0.0, self.R), (self.R, self.R + self.epsilon)]


def dipole_profile(R: float, epsilon: float, ramp: str = "linear") -> DipoleProfile:
    return DipoleProfile(float(R), float(epsilon), ramp)


@dataclass(frozen=True)
class EnergyReport:
    energy: float
    gradient_part: float
    mass_part: float
    coupling_e: float
    photon_mass: float
    abs_error: float = 0.0


def _piecewise_integral(fn, profile: DipoleProfile) -> tuple[float, float]:
    total = err = 0.0
    for lo, hi in profile.pieces():
        v, e = integrate_1d(lambda x: float(fn(x)), lo, hi, epsabs=0.0, epsrel=_REL_TOL, what="dipole energy")
        total += v
        err += e
    return total, err


def dipole_energy(e: float, p: DipoleProfile) -> EnergyReport:
    """Vacuum-relative energy of the dipole state, by quadrature over the profile pieces."""
    m = photon_mass(e)
    grad_int, e1 = _piecewise_integral(lambda x: p.derivative(x) ** 2, p)
    mass_int, e2 = _piecewise_integral(lambda x: p.shape(x) ** 2, p)
    gradient_part = 0.5 * math.pi * grad_int
    mass_part = 0.5 * e * e * mass_int
    return EnergyReport(
        gradient_part + mass_part, gradient_part, mass_part, float(e), m, 0.5 * math.pi * e1 + 0.5 * e * e * e2
    )


def closed_form_energy(e: float, R: float, epsilon: float, ramp: str = "linear") -> float:
    """Exact energy for the two built-in ramp shapes."""
    if ramp == "linear":
        # ∫g′² = 2/ε, ∫g² = R + 2ε/3
        return math.pi / epsilon + 0.5 * e * e * (R + 2.0 * epsilon / 3.0)
    if ramp == "smoothstep":
        # ∫g′² = 2·(6/5)/ε, ∫g² = R + 2ε·13/35
        return 6.0 * math.pi / (5.0 * epsilon) + 0.5 * e * e * (R + 26.0 * epsilon / 35.0)
    raise DomainError(f"unknown ramp {ramp!r}")


class Confinement(enum.Enum):
    CONFINED = "Confined"
    FINITE_ENERGY = "FiniteEnergy"


@dataclass(frozen=True)
class ConfinementVerdict:
    kind: Confinement
    growth_slope: float
    slope_stderr: float
    upper_slope: float = 0.0

    def __post_init__(self):
        if self.kind is Confinement.CONFINED and not self.growth_slope > 3 * self.slope_stderr:
            raise DomainError("Confined verdict needs growth_slope > 3·slope_stderr")


def check_r_grid(R_grid: Sequence[float]) -> None:
    R = np.asarray(R_grid, dtype=float)
    if R.size < 5:
        raise DomainError(f"R grid needs ≥ 5 points, got {R.size}")
    if np.any(R <= 0) or np.any(np.diff(R) <= 0):
        raise DomainError("R grid must be positive and strictly ascending")
    if R[-1] / R[0] < 10.0 * (1 - 1e-12):
        raise DomainError("R grid must span ≥ 1 decade")


def fit_confinement(R_grid: Sequence[float], energies: Sequence[float]) -> ConfinementVerdict:
    """Decide whether ``limsup E(R)`` diverges from energies on an ascending grid.

    Linear growth must be resolved (slope > 3·stderr) and sustained: the slope
    over the upper half of the grid has to keep at least half the full-grid
    slope. Saturating energies such as ``1 − 1/R`` fail the second test even
    when a straight line fits them with a clearly positive slope.
    """
    check_r_grid(R_grid)
    R = np.asarray(R_grid, dtype=float)
    E = np.asarray(energies, dtype=float)
    if E.shape != R.shape:
        raise FitError("energies and R grid differ in length")
    scale = max(float(np.max(np.abs(E))), 1e-300)
    if np.any(np.diff(E) < -1e-12 * scale):
        raise FitError("fit degenerate: energies are not monotone in R")
    full = fit_line(R, E)
    half = len(R) // 2
    upper = fit_line(R[half:], E[half:]) if len(R) >= 6 else full
    # floor so float noise on a constant energy does not count as growth
    noise = 1e-12 * scale / (R[-1] - R[0])
    resolved = full.slope > 3 * full.slope_stderr and full.slope > noise
    sustained = upper.slope >= 0.5 * full.slope
    kind = Confinement.CONFINED if resolved and sustained else Confinement.FINITE_ENERGY
    return ConfinementVerdict(kind, full.slope, full.slope_stderr, upper.slope)


def energy_sweep(e: float, epsilon: float, R_grid: Sequence[float], ramp: str = "linear") -> list[EnergyReport]:
    return [dipole_energy(e, dipole_profile(R, epsilon, ramp)) for R in R_grid]


def confinement_verdict(
    e: float, epsilon: float, R_grid: Sequence[float] = DEFAULT_R_GRID, ramp: str = "linear"
) -> ConfinementVerdict:
    check_r_grid(R_grid)
    reports = energy_sweep(e, epsilon, R_grid, ramp)
    return fit_confinement(R_grid, [r.energy for r in reports])
