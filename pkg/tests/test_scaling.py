import math

import numpy as np
import pytest

from spectral_lab.errors import DegreeUndetectableError, DomainError, TheoremViolationError
from spectral_lab.kernel import TestFunction, kl_two_point, smeared_free
from spectral_lab.measure import (
    BumpDensity,
    ContinuousDensity,
    PowerDensity,
    SpectralAtom,
    SpectralMeasure,
    flat_density,
    free_field,
)
from spectral_lab.scaling import (
    DEFAULT_LAMBDAS,
    ScalingFit,
    ScalingGrid,
    SingularityVerdict,
    Verdict,
    aitken_limit,
    check_lambdas,
    classify,
    degrees_under_cutoffs,
    estimate_scaling_degree,
    fit_scaling_degree,
    scaled_value,
    scaling_grid,
    truncate,
)

F = TestFunction()


def power_measure(alpha):
    return SpectralMeasure((), ContinuousDensity((PowerDensity(1.0, alpha),)))


def synthetic_grid(degree, noise=0.0, seed=0):
    lam = np.asarray(DEFAULT_LAMBDAS)
    rng = np.random.default_rng(seed)
    vals = lam**-degree * (1 + noise * rng.standard_normal(lam.size))
    return ScalingGrid(tuple(lam), tuple(vals), tuple(1e-14 * np.abs(vals)))


# --- grid checks -----------------------------------------------------------


def test_lambda_grid_requirements():
    check_lambdas(DEFAULT_LAMBDAS)
    with pytest.raises(DomainError, match="8 points"):
        check_lambdas(DEFAULT_LAMBDAS[:5])
    with pytest.raises(DomainError, match="geometric"):
        check_lambdas([2.0**-k for k in range(4, 12)] + [1e-6])
    with pytest.raises(DomainError, match="decades"):
        check_lambdas([2.0**-k for k in range(1, 9)])
    with pytest.raises(DomainError, match="decreasing"):
        check_lambdas(list(reversed(DEFAULT_LAMBDAS)))


def test_scaled_value_domain():
    with pytest.raises(DomainError):
        scaled_value(free_field(), F, 0.0)
    with pytest.raises(DomainError):
        scaled_value(free_field(), F, 1.5)


# --- scaled values ----------------------------------------------------------


def test_unit_lambda_is_the_two_point_function():
    m = SpectralMeasure((SpectralAtom(1.0, 0.6),), ContinuousDensity((BumpDensity(0.4, (2.0, 3.0)),)))
    assert scaled_value(m, F, 1.0) == kl_two_point(m, F)


def test_single_atom_limit():
    lam = 2.0**-12
    v = scaled_value(free_field(4.0), F, lam).value
    assert lam**2 * v == pytest.approx(smeared_free(0.0, F).value, rel=1e-6)


def test_flat_density_ratio_is_two_to_the_four():
    # μ = λ m substitution: W_λ = λ^{-4} ∫ S(√u) du exactly for the untruncated density
    a = scaled_value(flat_density(), F, 0.5).value
    b = scaled_value(flat_density(), F, 0.25).value
    assert b / a == pytest.approx(16.0, rel=1e-9)


def test_truncated_flat_ratio_drifts_towards_free_value():
    m = truncate(flat_density(), 100.0)
    r_coarse = scaled_value(m, F, 1.0).value / scaled_value(m, F, 0.5).value
    r_fine = scaled_value(m, F, 2.0**-10).value / scaled_value(m, F, 2.0**-11).value
    assert r_coarse == pytest.approx(1 / 16, rel=0.05)
    assert r_fine == pytest.approx(1 / 4, rel=1e-3)


def test_grid_rows():
    g = scaling_grid(free_field(), F, DEFAULT_LAMBDAS[:8])
    assert len(g.rows()) == 8 and g.rows()[0][0] == DEFAULT_LAMBDAS[0]


# --- fitting ----------------------------------------------------------------


@pytest.mark.parametrize("degree", [0.5, 2.0, 4.0, 6.5])
def test_fit_recovers_exact_power(degree):
    fit = fit_scaling_degree(synthetic_grid(degree))
    assert fit.degree == pytest.approx(degree, abs=1e-9)
    assert fit.window == 6 and fit.residual < 1e-9


def test_fit_stderr_reflects_noise():
    fit = fit_scaling_degree(synthetic_grid(2.0, noise=1e-3))
    assert 1e-5 < fit.stderr < 1e-2
    assert abs(fit.degree - 2.0) < 5 * fit.stderr


def test_fit_window_bounds():
    with pytest.raises(DomainError):
        fit_scaling_degree(synthetic_grid(2.0), window=4)
    with pytest.raises(DomainError):
        fit_scaling_degree(synthetic_grid(2.0), window=12)


def test_fit_rejects_sign_change():
    g = synthetic_grid(2.0)
    vals = list(g.values)
    vals[-2] = -vals[-2]
    with pytest.raises(DegreeUndetectableError, match="undetectable with this probe"):
        fit_scaling_degree(ScalingGrid(g.lambdas, tuple(vals), g.abs_errors))


def test_fit_rejects_noise_floor():
    g = synthetic_grid(2.0)
    errs = tuple(abs(v) for v in g.values)
    with pytest.raises(DegreeUndetectableError, match="undetectable with this probe"):
        fit_scaling_degree(ScalingGrid(g.lambdas, g.values, errs))


def test_summary_line():
    fit = ScalingFit(2.0004, 1e-3, 1e-4)
    assert fit.summary().startswith("degree=2.00 ")


# --- degrees of model measures -------------------------------------------------


def test_free_field_degree():
    fit = estimate_scaling_degree(free_field(), F)
    assert fit.degree == pytest.approx(2.0, abs=0.05)


@pytest.mark.parametrize("alpha,expect,tol", [(0.0, 4.0, 0.1), (0.5, 5.0, 0.1), (1.0, 6.0, 0.15)])
def test_power_density_degree(alpha, expect, tol):
    assert estimate_scaling_degree(power_measure(alpha), F).degree == pytest.approx(expect, abs=tol)


def test_probe_independence():
    degrees = [estimate_scaling_degree(free_field(), TestFunction(width=w)).degree for w in (0.5, 1, 2, 4, 8)]
    assert max(degrees) - min(degrees) < 0.1


def test_grid_refinement_is_stable():
    base = estimate_scaling_degree(free_field(), F)
    finer = estimate_scaling_degree(free_field(), F, tuple(2.0**-k for k in range(4, 16)))
    assert abs(finer.degree - base.degree) < base.stderr


def test_mixed_finite_measure_is_free_like():
    m = SpectralMeasure((SpectralAtom(1.0, 0.6),), ContinuousDensity((BumpDensity(0.4, (2.0, 3.0)),)))
    fit = estimate_scaling_degree(m, F)
    assert fit.degree <= 2 + 3 * fit.stderr
    v = classify(m, F)
    assert v.kind is Verdict.FREE_LIKE and v.sigma_mass_finite


# --- classification -----------------------------------------------------------


def test_classify_free_field():
    v = classify(free_field(), F)
    assert v.kind is Verdict.FREE_LIKE and v.sigma_mass_finite


def test_classify_flat_density():
    v = classify(flat_density(), F)
    assert v.kind is Verdict.SATISFIES and not v.sigma_mass_finite
    assert v.degree == pytest.approx(4.0, abs=0.1)


@pytest.mark.parametrize("cutoff", [1e2, 1e3, 1e4])
def test_fixed_cutoffs_are_free_like(cutoff):
    # a finite cutoff leaves a finite-mass measure; the small-λ window sees degree 2
    v = classify(truncate(flat_density(), cutoff), F)
    assert v.kind is Verdict.FREE_LIKE and v.sigma_mass_finite


def test_window_relative_cutoffs_stabilize_at_four():
    lam_min = DEFAULT_LAMBDAS[-1]
    fits = degrees_under_cutoffs(flat_density(), F, [c / lam_min**2 for c in (1e2, 1e3, 1e4)])
    degrees = [f.degree for f in fits]
    assert all(abs(d - 4.0) < 0.1 for d in degrees)
    assert aitken_limit(degrees) == pytest.approx(4.0, abs=0.1)


def test_truncate_keeps_atoms_and_cuts_support():
    m = SpectralMeasure((SpectralAtom(1.0, 0.5),), ContinuousDensity((PowerDensity(1.0, 1.0),)))
    t = truncate(m, 50.0)
    assert t.atoms == m.atoms and t.continuum.components[0].support == (0.0, 50.0)


def test_theorem_violation_is_a_hard_error(monkeypatch):
    import spectral_lab.scaling as sc

    fake = ScalingFit(3.0, 0.01, 0.0)
    monkeypatch.setattr(sc, "estimate_scaling_degree", lambda *a, **k: fake)
    with pytest.raises(TheoremViolationError, match="pipeline"):
        sc.classify(free_field(), F)


def test_verdict_invariant():
    with pytest.raises(DomainError):
        SingularityVerdict(Verdict.SATISFIES, True, 4.0)
    with pytest.raises(DomainError):
        SingularityVerdict(Verdict.SATISFIES, False, 2.0)


def test_aitken():
    seq = [4.0 + 0.5**k for k in range(1, 6)]
    assert aitken_limit(seq) == pytest.approx(4.0, abs=1e-12)
    assert aitken_limit([1.0, 1.0, 1.0]) == 1.0
    with pytest.raises(DomainError):
        aitken_limit([1.0, 2.0])


def test_parallel_grid_matches_serial():
    lams = DEFAULT_LAMBDAS[:8]
    a = scaling_grid(free_field(), F, lams, workers=1)
    b = scaling_grid(free_field(), F, lams, workers=2)
    assert a == b
    assert all(math.isfinite(v) for v in b.values)
