"""Polynomially-bounded spectral measures on the mass-squared half line.

A measure is held constructively: a tuple of point masses (atoms) plus a
continuous density built from a small registry of closed-form families.
The pure-point / continuous split is therefore structural, and
:func:`decompose` only has to hand the two parts back.

Serialization uses TOML::

    [[atom]]
    mass_sq = 1.0
    weight = 0.6

    [continuum]
    family = "bump"
    support = [2.0, 3.0]
    params = { mass = 0.4 }

Several continuum components are written as ``[[continuum]]`` tables.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
import tomli_w

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - exercised on 3.10
    import tomli as tomllib

from .errors import AmbiguousAtomError, DomainError, RenormalizationError
from .quadrature import integrate_1d

SUM_RULE_TOL = 1e-8
ATOM_TOL = 1e-9

# tail test for unbounded supports: ∫[L, 2L] for L = L0·2^k, k = 0..10
_TAIL_L0 = 1.0
_TAIL_STEPS = 10
_TAIL_DECAY = 1.0 - 1e-3

_CERT_GRID = np.geomspace(1e-3, 1e8, 56)


@dataclass(frozen=True)
class SpectralAtom:
    """Point mass ``weight·δ(m² − mass_sq)``."""

    mass_sq: float
    weight: float

    def __post_init__(self):
        if not (math.isfinite(self.mass_sq) and self.mass_sq >= 0):
            raise DomainError(f"atom mass_sq must be finite and >= 0, got {self.mass_sq}")
        if not (math.isfinite(self.weight) and self.weight >= 0):
            raise DomainError(
                f"atom weight must be finite and >= 0 (positive-definite metric), got {self.weight}"
            )


# ---------------------------------------------------------------------------
# density families
# ---------------------------------------------------------------------------


def _check_support(support) -> tuple[float, float]:
    a, b = float(support[0]), float(support[1])
    if not (math.isfinite(a) and a >= 0):
        raise DomainError(f"support start must be finite and >= 0, got {a}")
    if not b > a:
        raise DomainError(f"support must be a non-empty interval, got [{a}, {b}]")
    return a, b


class _Family:
    """Mixin with the quadrature fallbacks shared by all density families."""

    family: str = ""
    support: tuple[float, float]

    def __call__(self, m2):
        m2 = np.asarray(m2, dtype=float)
        a, b = self.support
        inside = (m2 >= a) & (m2 <= b)
        out = np.where(inside, self._raw(np.where(inside, m2, a)), 0.0)
        return out if out.ndim else float(out)

    def _raw(self, m2):
        raise NotImplementedError

    def pointwise(self, m2: float) -> float:
        """Scalar evaluation inside the support (no range check), for quadrature."""
        return float(self._raw(m2))

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.support[1])

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def cumulative(self, L: float) -> float:
        """``∫_0^L density``."""
        a, b = self.support
        hi = min(L, b)
        if hi <= a:
            return 0.0
        value, _ = integrate_1d(self.pointwise, a, hi, points=self.breakpoints, what=f"{self.family} cdf")
        return value

    def poly_bound(self) -> tuple[float, int]:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def scaled(self, c: float):
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantDensity(_Family):
    value: float
    support: tuple[float, float] = (0.0, math.inf)
    family = "constant"

    def __post_init__(self):
        object.__setattr__(self, "support", _check_support(self.support))
        if not self.value >= 0:
            raise DomainError("constant density must be >= 0")

    def _raw(self, m2):
        return np.full_like(np.asarray(m2, dtype=float), self.value)

    def cumulative(self, L):
        a, b = self.support
        return self.value * max(0.0, min(L, b) - a)

    def poly_bound(self):
        if self.bounded:
            return self.value * (self.support[1] - self.support[0]), 0
        return self.value, 1

    def params(self):
        return {"value": self.value}

    def scaled(self, c):
        return ConstantDensity(self.value * c, self.support)


@dataclass(frozen=True)
class PowerDensity(_Family):
    """``coefficient · (m²)^exponent`` on the support."""

    coefficient: float
    exponent: float
    support: tuple[float, float] = (0.0, math.inf)
    family = "power"

    def __post_init__(self):
        object.__setattr__(self, "support", _check_support(self.support))
        if not self.coefficient >= 0:
            raise DomainError("power density coefficient must be >= 0")
        if self.support[0] == 0 and self.exponent <= -1:
            raise DomainError("(m²)^α with α <= -1 is not locally integrable at 0")

    def _raw(self, m2):
        m2 = np.asarray(m2, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            return self.coefficient * np.power(m2, self.exponent)

    def _antiderivative(self, x):
        p = self.exponent + 1.0
        if p == 0:
            return self.coefficient * math.log(x)
        return self.coefficient * x**p / p

    def cumulative(self, L):
        a, b = self.support
        hi = min(L, b)
        if hi <= a:
            return 0.0
        if a == 0:
            return self._antiderivative(hi)
        return self._antiderivative(hi) - self._antiderivative(a)

    def poly_bound(self):
        a, b = self.support
        if self.bounded:
            return self.cumulative(b), 0
        p = self.exponent + 1.0
        if p > 0:
            # c(L^p - a^p)/p <= (c/p)·L^p <= (c/p)(1 + L^N) for N = ceil(p)
            return self.coefficient / p, int(math.ceil(p))
        if p == 0:
            # c·log(L/a) <= c·L/a
            return self.coefficient / a, 1
        return self.coefficient * a**p / (-p), 0

    def params(self):
        return {"coefficient": self.coefficient, "exponent": self.exponent}

    def scaled(self, c):
        return PowerDensity(self.coefficient * c, self.exponent, self.support)


@lru_cache(maxsize=None)
def _bump_norm() -> float:
    value, _ = integrate_1d(lambda t: math.exp(-1.0 / (1.0 - t * t)), -1.0, 1.0, epsrel=1e-13)
    return value


@dataclass(frozen=True)
class BumpDensity(_Family):
    """Smooth compactly-supported bump carrying total mass ``mass``."""

    mass: float
    support: tuple[float, float] = (0.0, 1.0)
    family = "bump"

    def __post_init__(self):
        object.__setattr__(self, "support", _check_support(self.support))
        if not self.bounded:
            raise DomainError("bump density needs a bounded support")
        if not self.mass >= 0:
            raise DomainError("bump mass must be >= 0")

    def _raw(self, m2):
        a, b = self.support
        half = 0.5 * (b - a)
        t = (np.asarray(m2, dtype=float) - 0.5 * (a + b)) / half
        core = np.clip(1.0 - t * t, 0.0, None)
        with np.errstate(divide="ignore"):
            shape = np.where(core > 0, np.exp(-1.0 / np.where(core > 0, core, 1.0)), 0.0)
        return self.mass * shape / (_bump_norm() * half)

    def cumulative(self, L):
        if L >= self.support[1]:
            return self.mass
        return super().cumulative(L)

    def poly_bound(self):
        return self.mass, 0

    def params(self):
        return {"mass": self.mass}

    def scaled(self, c):
        return BumpDensity(self.mass * c, self.support)


@dataclass(frozen=True)
class ExpCutoffDensity(_Family):
    """``coefficient · exp(−m²/scale)``."""

    coefficient: float
    scale: float
    support: tuple[float, float] = (0.0, math.inf)
    family = "exp_cutoff"

    def __post_init__(self):
        object.__setattr__(self, "support", _check_support(self.support))
        if not self.coefficient >= 0 or not self.scale > 0:
            raise DomainError("exp_cutoff needs coefficient >= 0 and scale > 0")

    def _raw(self, m2):
        return self.coefficient * np.exp(-np.asarray(m2, dtype=float) / self.scale)

    def cumulative(self, L):
        a, b = self.support
        hi = min(L, b)
        if hi <= a:
            return 0.0
        return self.coefficient * self.scale * (math.exp(-a / self.scale) - math.exp(-hi / self.scale))

    def poly_bound(self):
        return self.coefficient * self.scale * math.exp(-self.support[0] / self.scale), 0

    def params(self):
        return {"coefficient": self.coefficient, "scale": self.scale}

    def scaled(self, c):
        return ExpCutoffDensity(self.coefficient * c, self.scale, self.support)


@dataclass(frozen=True)
class TabulatedDensity(_Family):
    """Piecewise-linear interpolation of user samples; zero outside the table."""

    mass_sq: tuple[float, ...]
    density: tuple[float, ...]
    family = "tabulated"

    def __post_init__(self):
        xs = tuple(float(x) for x in self.mass_sq)
        ys = tuple(float(y) for y in self.density)
        if len(xs) < 2 or len(xs) != len(ys):
            raise DomainError("tabulated density needs >= 2 (mass_sq, density) pairs of equal length")
        if any(x1 <= x0 for x0, x1 in zip(xs, xs[1:])):
            raise DomainError("tabulated mass_sq must be strictly increasing")
        if min(ys) < 0:
            raise DomainError("tabulated density values must be >= 0")
        object.__setattr__(self, "mass_sq", xs)
        object.__setattr__(self, "density", ys)

    @property
    def support(self):
        return _check_support((self.mass_sq[0], self.mass_sq[-1]))

    @property
    def breakpoints(self):
        return self.mass_sq[1:-1]

    def _raw(self, m2):
        return np.interp(m2, self.mass_sq, self.density)

    def cumulative(self, L):
        xs, ys = np.asarray(self.mass_sq), np.asarray(self.density)
        if L <= xs[0]:
            return 0.0
        hi = min(L, xs[-1])
        keep = xs < hi
        x = np.append(xs[keep], hi)
        y = np.append(ys[keep], np.interp(hi, xs, ys))
        return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))

    def poly_bound(self):
        return self.cumulative(self.mass_sq[-1]), 0

    def params(self):
        return {"mass_sq": list(self.mass_sq), "density": list(self.density)}

    def scaled(self, c):
        return TabulatedDensity(self.mass_sq, tuple(c * y for y in self.density))


FAMILIES = {
    cls.family: cls
    for cls in (ConstantDensity, PowerDensity, BumpDensity, ExpCutoffDensity, TabulatedDensity)
}

Component = Union[ConstantDensity, PowerDensity, BumpDensity, ExpCutoffDensity, TabulatedDensity]


def make_component(family: str, params: Mapping, support=None) -> Component:
    """Build a registered density family from its serialized form."""
    try:
        cls = FAMILIES[family]
    except KeyError:
        raise DomainError(f"unknown density family {family!r}; known: {sorted(FAMILIES)}") from None
    kwargs = dict(params)
    if family == "tabulated":
        return cls(tuple(kwargs["mass_sq"]), tuple(kwargs["density"]))
    if support is not None:
        kwargs["support"] = tuple(float(s) for s in support)
    return cls(**kwargs)


@dataclass(frozen=True)
class ContinuousDensity:
    """Sum of registered density components with a polynomial-growth certificate.

    ``poly_bound = (C, N)`` certifies ``∫_0^L density ≤ C(1 + L^N)``. When not
    supplied it is derived from the components; a supplied certificate is
    checked on a logarithmic grid of ``L`` values.
    """

    components: tuple = ()
    poly_bound: Optional[tuple[float, int]] = None
    certificate_given: bool = field(default=False, compare=False)

    def __post_init__(self):
        comps = tuple(self.components)
        for c in comps:
            if not isinstance(c, tuple(FAMILIES.values())):
                raise DomainError(f"not a registered density component: {c!r}")
        object.__setattr__(self, "components", comps)
        if self.poly_bound is None:
            bounds = [c.poly_bound() for c in comps]
            C = sum(b[0] for b in bounds) if bounds else 0.0
            N = max((b[1] for b in bounds), default=0)
            object.__setattr__(self, "poly_bound", (float(C), int(N)))
        else:
            C, N = self.poly_bound
            if not (C >= 0 and int(N) == N and N >= 0):
                raise DomainError("poly_bound must be (C >= 0, integer N >= 0)")
            object.__setattr__(self, "poly_bound", (float(C), int(N)))
            object.__setattr__(self, "certificate_given", True)
            bad = self.certificate_violations()
            if bad:
                L, lhs, rhs = bad[0]
                raise DomainError(
                    f"poly_bound (C={C}, N={N}) fails at L={L:.4g}: ∫_0^L = {lhs:.6g} > {rhs:.6g}"
                )

    @classmethod
    def zero(cls) -> "ContinuousDensity":
        return cls(())

    def __call__(self, m2):
        m2 = np.asarray(m2, dtype=float)
        total = np.zeros_like(m2)
        for c in self.components:
            total = total + c(m2)
        return total if total.ndim else float(total)

    @property
    def is_zero(self) -> bool:
        return not self.components

    @property
    def support(self) -> tuple[float, float]:
        if not self.components:
            return (0.0, 0.0)
        return (min(c.support[0] for c in self.components), max(c.support[1] for c in self.components))

    def cumulative(self, L: float) -> float:
        return sum(c.cumulative(L) for c in self.components)

    def certificate_violations(self, grid: Iterable[float] = _CERT_GRID):
        C, N = self.poly_bound
        out = []
        for L in grid:
            lhs = self.cumulative(float(L))
            rhs = C * (1.0 + L**N)
            if lhs > rhs * (1 + 1e-12) + 1e-300:
                out.append((float(L), lhs, rhs))
        return out

    def scaled(self, c: float) -> "ContinuousDensity":
        bound = (self.poly_bound[0] * c, self.poly_bound[1]) if self.certificate_given else None
        return ContinuousDensity(tuple(comp.scaled(c) for comp in self.components), bound)

    def __add__(self, other: "ContinuousDensity") -> "ContinuousDensity":
        if self.certificate_given or other.certificate_given:
            (c1, n1), (c2, n2) = self.poly_bound, other.poly_bound
            bound = (c1 + c2, max(n1, n2))
        else:
            bound = None
        return ContinuousDensity(self.components + other.components, bound)

    def probe_points(self, n: int = 64) -> np.ndarray:
        """Deterministic sample of mass² values covering every component support."""
        pts = []
        for c in self.components:
            a, b = c.support
            hi = b if math.isfinite(b) else max(10.0 * (a + 1.0), 100.0)
            pts.append(np.linspace(a, hi, n))
        return np.unique(np.concatenate(pts)) if pts else np.zeros(0)


@dataclass(frozen=True)
class MassTotal:
    """Total measure; ``value`` is ``math.inf`` when the tail test detects divergence."""

    value: float
    quadrature_error: float = 0.0

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)


@dataclass(frozen=True)
class SpectralMeasure:
    """Källén-Lehmann measure ``dρ = Σ Z_i δ(m² − m_i²) + σ(m²) dm²``."""

    atoms: tuple = ()
    continuum: ContinuousDensity = field(default_factory=ContinuousDensity.zero)

    def __post_init__(self):
        atoms = tuple(a if isinstance(a, SpectralAtom) else SpectralAtom(*a) for a in self.atoms)
        masses = [a.mass_sq for a in atoms]
        if len(set(masses)) != len(masses):
            raise DomainError("atoms must have pairwise distinct mass_sq (discrete pure-point part)")
        object.__setattr__(self, "atoms", atoms)
        if self.continuum is None:
            object.__setattr__(self, "continuum", ContinuousDensity.zero())
        pts = self.continuum.probe_points()
        if pts.size and np.min(self.continuum(pts)) < 0:
            raise DomainError("continuum density must be >= 0")

    @classmethod
    def compose(cls, atoms: Sequence = (), continuum: Optional[ContinuousDensity] = None):
        return cls(tuple(atoms), continuum if continuum is not None else ContinuousDensity.zero())

    def scaled(self, c: float) -> "SpectralMeasure":
        if not c >= 0:
            raise DomainError("measures can only be scaled by c >= 0")
        return SpectralMeasure(
            tuple(SpectralAtom(a.mass_sq, a.weight * c) for a in self.atoms), self.continuum.scaled(c)
        )

    def __add__(self, other: "SpectralMeasure") -> "SpectralMeasure":
        weights: dict[float, float] = {}
        for a in self.atoms + other.atoms:
            weights[a.mass_sq] = weights.get(a.mass_sq, 0.0) + a.weight
        atoms = tuple(SpectralAtom(m, w) for m, w in weights.items())
        return SpectralMeasure(atoms, self.continuum + other.continuum)


def free_field(mass_sq: float = 1.0) -> SpectralMeasure:
    """The free scalar field: a single unit atom, ``Z = 1``."""
    return SpectralMeasure((SpectralAtom(mass_sq, 1.0),))


def flat_density(support=(0.0, math.inf), value: float = 1.0) -> SpectralMeasure:
    """``dρ = value · dm²`` with no discrete part."""
    return SpectralMeasure((), ContinuousDensity((ConstantDensity(value, tuple(support)),)))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def random_finite_measure(rng: np.random.Generator) -> SpectralMeasure:
    """Seeded finite-mass measure: 1-3 atoms on ``[0, 10]`` plus 1-2 compact bumps."""
    n_atoms = int(rng.integers(1, 4))
    masses = rng.uniform(0.0, 10.0, n_atoms)
    weights = rng.uniform(0.05, 1.0, n_atoms)
    atoms = tuple(SpectralAtom(float(m), float(w)) for m, w in zip(masses, weights))
    comps = []
    for _ in range(int(rng.integers(1, 3))):
        start, length, mass = rng.uniform(0.0, 20.0), rng.uniform(0.1, 10.0), rng.uniform(0.05, 1.0)
        comps.append(BumpDensity(float(mass), (float(start), float(start + length))))
    return SpectralMeasure(atoms, ContinuousDensity(tuple(comps)))


def _component_total(c) -> MassTotal:
    a, b = c.support
    if math.isfinite(b):
        value, err = integrate_1d(c.pointwise, a, b, points=c.breakpoints, what=f"{c.family} mass")
        return MassTotal(value, err)

    # unbounded support: compare ∫[L, 2L] over doubling L; a tail that stops
    # shrinking means the measure is not finite
    L0 = max(_TAIL_L0, 2.0 * a)
    tails = []
    for k in range(_TAIL_STEPS + 1):
        L = L0 * 2.0**k
        tails.append(c.cumulative(2 * L) - c.cumulative(L))
    if tails[-1] > 0 and tails[-1] >= _TAIL_DECAY * tails[-2]:
        return MassTotal(math.inf, 0.0)
    value, err = integrate_1d(c.pointwise, a, math.inf, what=f"{c.family} mass")
    return MassTotal(value, err)


def total_mass(m: SpectralMeasure) -> MassTotal:
    """``Σ Z_i + ∫ dσ``; ``+∞`` when any continuum tail fails to decay."""
    value = math.fsum(a.weight for a in m.atoms)
    err = 0.0
    for c in m.continuum.components:
        part = _component_total(c)
        if not part.is_finite:
            return MassTotal(math.inf, 0.0)
        value += part.value
        err += part.quadrature_error
    return MassTotal(value, err)


def decompose(m: SpectralMeasure) -> tuple[list[SpectralAtom], ContinuousDensity]:
    """Split into the pure-point part and the continuous part."""
    return list(m.atoms), m.continuum


def z_at(m: SpectralMeasure, mass_sq: float, tol: float = ATOM_TOL) -> float:
    """Weight of the atom at ``mass_sq`` (within ``tol``), or 0 if there is none."""
    if not tol > 0:
        raise DomainError("tol must be > 0")
    hits = [a for a in m.atoms if abs(a.mass_sq - mass_sq) <= tol]
    if len(hits) > 1:
        raise AmbiguousAtomError(
            f"{len(hits)} atoms within {tol:g} of mass_sq={mass_sq}: {[a.mass_sq for a in hits]}"
        )
    return hits[0].weight if hits else 0.0


class SumRule(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    DIVERGENT = "divergent"


@dataclass(frozen=True)
class SumRuleCheck:
    outcome: SumRule
    total: float

    def __str__(self):
        if self.outcome is SumRule.FAILS:
            return f"Fails({self.total:.12g})"
        return {SumRule.HOLDS: "Holds", SumRule.DIVERGENT: "Divergent"}[self.outcome]


def check_etcr_sum_rule(m: SpectralMeasure, tol: float = SUM_RULE_TOL) -> SumRuleCheck:
    """Test the equal-time sum rule ``∫ dρ = 1``."""
    if not tol > 0:
        raise DomainError("tol must be > 0")
    total = total_mass(m)
    if not total.is_finite:
        return SumRuleCheck(SumRule.DIVERGENT, math.inf)
    if abs(total.value - 1.0) <= tol:
        return SumRuleCheck(SumRule.HOLDS, total.value)
    return SumRuleCheck(SumRule.FAILS, total.value)


def _particle_atom(m: SpectralMeasure, particle_mass_sq: Optional[float], tol: float) -> SpectralAtom:
    if not m.atoms:
        raise RenormalizationError("renormalization undefined at Z=0 (no discrete component)")
    if particle_mass_sq is None:
        if len(m.atoms) > 1:
            raise RenormalizationError("several atoms present; pass particle_mass_sq to designate one")
        return m.atoms[0]
    z = z_at(m, particle_mass_sq, tol)
    for a in m.atoms:
        if abs(a.mass_sq - particle_mass_sq) <= tol:
            return a
    assert z == 0.0
    raise RenormalizationError(f"renormalization undefined at Z=0 (no atom at mass_sq={particle_mass_sq})")


def renormalize(
    m: SpectralMeasure, particle_mass_sq: Optional[float] = None, tol: float = ATOM_TOL
) -> SpectralMeasure:
    """Return ``dg = dρ / Z`` for the designated particle atom."""
    atom = _particle_atom(m, particle_mass_sq, tol)
    if atom.weight == 0:
        raise RenormalizationError("renormalization undefined at Z=0")
    return m.scaled(1.0 / atom.weight)


# ---------------------------------------------------------------------------
# TOML round trip
# ---------------------------------------------------------------------------


def _component_table(c) -> dict:
    table = {"family": c.family}
    if c.family != "tabulated":
        table["support"] = [float(c.support[0]), float(c.support[1])]
    table["params"] = c.params()
    return table


def measure_to_dict(m: SpectralMeasure) -> dict:
    doc: dict = {}
    if m.atoms:
        doc["atom"] = [{"mass_sq": a.mass_sq, "weight": a.weight} for a in m.atoms]
    tables = [_component_table(c) for c in m.continuum.components]
    if m.continuum.certificate_given:
        C, N = m.continuum.poly_bound
        for t in tables:
            t["poly_bound"] = [C, N]
    if len(tables) == 1:
        doc["continuum"] = tables[0]
    elif tables:
        doc["continuum"] = tables
    return doc


def measure_from_dict(doc: Mapping) -> SpectralMeasure:
    atoms = tuple(SpectralAtom(float(a["mass_sq"]), float(a["weight"])) for a in doc.get("atom", ()))
    raw = doc.get("continuum", ())
    if isinstance(raw, Mapping):
        raw = [raw]
    comps = []
    bound = None
    for t in raw:
        comps.append(make_component(t["family"], t.get("params", {}), t.get("support")))
        if "poly_bound" in t:
            bound = (float(t["poly_bound"][0]), int(t["poly_bound"][1]))
    return SpectralMeasure(atoms, ContinuousDensity(tuple(comps), bound))


def _toml_value(v) -> str:
    if isinstance(v, Mapping):
        return "{ " + ", ".join(f"{k} = {_toml_value(x)}" for k, x in v.items()) + " }"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    return tomli_w.dumps({"v": v}).split("=", 1)[1].strip()


def _toml_section(header: str, table: Mapping) -> str:
    return header + "\n" + "".join(f"{k} = {_toml_value(v)}\n" for k, v in table.items())


def dumps_measure(m: SpectralMeasure) -> str:
    """TOML text with ``[[atom]]`` tables and one ``[continuum]`` (or several ``[[continuum]]``)."""
    doc = measure_to_dict(m)
    parts = [_toml_section("[[atom]]", a) for a in doc.get("atom", ())]
    cont = doc.get("continuum")
    if isinstance(cont, Mapping):
        parts.append(_toml_section("[continuum]", cont))
    elif cont:
        parts.extend(_toml_section("[[continuum]]", c) for c in cont)
    return "\n".join(parts)


def loads_measure(text: str) -> SpectralMeasure:
    return measure_from_dict(tomllib.loads(text))


def write_measure(m: SpectralMeasure, path) -> None:
    Path(path).write_text(dumps_measure(m))


def read_measure(path) -> SpectralMeasure:
    return loads_measure(Path(path).read_text())
