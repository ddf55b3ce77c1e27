"""Numerical laboratory for Källén-Lehmann spectral measures, scaling degrees,
dipole confinement energies and power-law Fourier scaling."""

__version__ = "0.1.0"

from .errors import (
    AmbiguousAtomError,
    DegreeUndetectableError,
    DomainError,
    FitError,
    PairingDivergentError,
    QuadratureError,
    RenormalizationError,
    SpectralLabError,
    TheoremViolationError,
)
from .ftscale import ExponentFit, PowerLawSpec, fit_position_exponent, smeared_power_ft
from .kernel import (
    Evaluation,
    TestFunction,
    free_two_point_direct,
    free_two_point_spacelike,
    kl_two_point,
    smeared_free,
)
from .measure import (
    BumpDensity,
    ConstantDensity,
    ContinuousDensity,
    ExpCutoffDensity,
    MassTotal,
    PowerDensity,
    SpectralAtom,
    SpectralMeasure,
    SumRule,
    SumRuleCheck,
    TabulatedDensity,
    check_etcr_sum_rule,
    decompose,
    free_field,
    flat_density,
    random_finite_measure,
    renormalize,
    total_mass,
    z_at,
)
from .scaling import (
    ScalingFit,
    ScalingGrid,
    SingularityVerdict,
    Verdict,
    classify,
    estimate_scaling_degree,
    scaled_value,
)
from .schwinger import (
    ConfinementVerdict,
    DipoleProfile,
    EnergyReport,
    confinement_verdict,
    dipole_energy,
    dipole_profile,
    photon_mass,
)

__all__ = [
    "AmbiguousAtomError",
    "BumpDensity",
    "ConfinementVerdict",
    "ConstantDensity",
    "ContinuousDensity",
    "DegreeUndetectableError",
    "DipoleProfile",
    "DomainError",
    "EnergyReport",
    "Evaluation",
    "ExpCutoffDensity",
    "ExponentFit",
    "FitError",
    "MassTotal",
    "PairingDivergentError",
    "PowerDensity",
    "PowerLawSpec",
    "QuadratureError",
    "RenormalizationError",
    "ScalingFit",
    "ScalingGrid",
    "SingularityVerdict",
    "SpectralAtom",
    "SpectralLabError",
    "SpectralMeasure",
    "SumRule",
    "SumRuleCheck",
    "TabulatedDensity",
    "TestFunction",
    "TheoremViolationError",
    "Verdict",
    "check_etcr_sum_rule",
    "classify",
    "confinement_verdict",
    "decompose",
    "dipole_energy",
    "dipole_profile",
    "estimate_scaling_degree",
    "fit_position_exponent",
    "flat_density",
    "free_field",
    "free_two_point_direct",
    "free_two_point_spacelike",
    "kl_two_point",
    "photon_mass",
    "random_finite_measure",
    "renormalize",
    "scaled_value",
    "smeared_free",
    "smeared_power_ft",
    "total_mass",
    "z_at",
]
