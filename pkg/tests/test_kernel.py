import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from spectral_lab.errors import DomainError, PairingDivergentError
from spectral_lab.kernel import (
    Evaluation,
    TestFunction,
    free_two_point_direct,
    free_two_point_spacelike,
    kl_two_point,
    pairing,
    smeared_free,
)
from spectral_lab.measure import (
    BumpDensity,
    ConstantDensity,
    ContinuousDensity,
    PowerDensity,
    SpectralAtom,
    SpectralMeasure,
    flat_density,
    free_field,
)

# K₁(1)/(4π²) with the tabulated K₁(1) = 0.6019072301972346
K1_AT_1_OVER_4PI2 = 0.6019072301972346 / (4 * math.pi**2)


def smeared_closed_form(mass, width=1.0, amplitude=1.0):
    """Centred Gaussian: (4πA/w²)·z·(K₁(z) − K₀(z)), z = (w·mass)²/4."""
    if mass == 0:
        return 4 * math.pi * amplitude / width**2
    z = (width * mass) ** 2 / 4
    return 4 * math.pi * amplitude / width**2 * z * (special.k1(z) - special.k0(z))


def smeared_nested(mass, f):
    """2D (|p|, cos θ) nested quadrature with the full complex phase."""
    w, A = f.width, f.amplitude
    c0, c = f.center[0], f.spatial_offset

    def g(ct, p):
        om = math.hypot(p, mass)
        return 2 * math.pi * p * p / om * A * math.exp(-w * w * (om * om + p * p) / 4) * math.cos(om * c0 - p * ct * c)

    v, _ = integrate.dblquad(g, 0, math.inf, -1, 1, epsabs=1e-13, epsrel=1e-12)
    return v


# --- probe -----------------------------------------------------------------


def test_probe_validation():
    with pytest.raises(DomainError):
        TestFunction(width=0.0)
    with pytest.raises(DomainError):
        TestFunction(center=(0.0, 1.0))


def test_probe_is_normalized_to_amplitude():
    # ∫ f d⁴x = f̃(0) = A
    f = TestFunction(width=0.7, amplitude=2.5)
    r = integrate.quad(lambda r: 2 * math.pi**2 * r**3 * f((r, 0, 0, 0)), 0, math.inf)[0]
    assert r == pytest.approx(2.5, rel=1e-10)
    assert f.fourier(0.0, [0, 0, 0]) == pytest.approx(2.5)


@settings(max_examples=40, deadline=None)
@given(
    p=st.lists(st.floats(-5, 5), min_size=4, max_size=4),
    c=st.lists(st.floats(-2, 2), min_size=4, max_size=4),
    w=st.floats(0.2, 4.0),
)
def test_probe_fourier_decay(p, c, w):
    f = TestFunction(tuple(c), w, 1.5)
    bound = 1.5 * math.exp(-w * w * sum(x * x for x in p) / 4)
    assert abs(f.fourier(p[0], p[1:])) <= bound * (1 + 1e-12)


# --- Δ₊ at spacelike separation --------------------------------------------


def test_massless_value():
    assert free_two_point_spacelike(0.0, 1.0).value == pytest.approx(1 / (4 * math.pi**2), rel=1e-15)
    assert free_two_point_direct(0.0, 1.0).value == pytest.approx(1 / (4 * math.pi**2), rel=1e-10)


def test_unit_mass_value():
    ev = free_two_point_spacelike(1.0, 1.0)
    assert ev.value == pytest.approx(K1_AT_1_OVER_4PI2, rel=1e-12)
    assert free_two_point_direct(1.0, 1.0, "fourier").value == pytest.approx(ev.value, rel=1e-8)
    assert free_two_point_direct(1.0, 1.0, "proper_time").value == pytest.approx(ev.value, rel=1e-8)


def test_exponential_decay():
    a, b = free_two_point_spacelike(1.0, 5.0).value, free_two_point_spacelike(1.0, 10.0).value
    # m K₁(mr)/r ~ r^{-3/2} e^{-mr}
    asym = (5.0 / 10.0) ** 1.5 * math.exp(-5.0)
    assert b / a == pytest.approx(asym, rel=0.05)


@pytest.mark.parametrize("mass", [0.1, 0.5, 1.0, 3.0])
@pytest.mark.parametrize("r", [0.2, 1.0, 3.0])
def test_direct_routes_agree(mass, r):
    exact = free_two_point_spacelike(mass, r).value
    assert abs(free_two_point_direct(mass, r, "fourier").value / exact - 1) <= 1e-8
    assert abs(free_two_point_direct(mass, r, "proper_time").value / exact - 1) <= 1e-8


def test_spacelike_domain():
    with pytest.raises(DomainError):
        free_two_point_spacelike(1.0, 0.0)
    with pytest.raises(DomainError):
        free_two_point_direct(1.0, -1.0)
    with pytest.raises(DomainError):
        free_two_point_direct(1.0, 1.0, "series")


def test_evaluation_error_must_be_finite():
    with pytest.raises(DomainError):
        Evaluation(1.0, math.inf)


# --- smeared Δ₊ --------------------------------------------------------------


def test_zero_amplitude():
    assert smeared_free(1.0, TestFunction(amplitude=0.0)) == Evaluation(0.0, 0.0)


@pytest.mark.parametrize("mass", [0.0, 0.3, 1.0, 4.0])
@pytest.mark.parametrize("width", [0.5, 1.0, 2.0])
def test_centred_closed_form(mass, width):
    ev = smeared_free(mass, TestFunction(width=width))
    exact = smeared_closed_form(mass, width)
    assert ev.value == pytest.approx(exact, rel=1e-9)
    assert ev.abs_error <= 1e-9 * abs(ev.value)


def test_nested_quadrature_oracle():
    f = TestFunction((0.3, 0.5, 0.0, 0.0), 1.3, 2.0)
    ev = smeared_free(1.0, f)
    assert ev.value == pytest.approx(smeared_nested(1.0, f), rel=1e-8)
    assert ev.imag != 0.0
    g = TestFunction(width=1.0)
    assert smeared_free(1.0, g).value == pytest.approx(smeared_nested(1.0, g), rel=1e-8)


def test_massless_continuity():
    f = TestFunction(width=1.0)
    scale = smeared_free(0.0, f).value
    assert abs(smeared_free(0.0, f).value - smeared_free(1e-6, f).value) <= 1e-6 * scale


@settings(max_examples=25, deadline=None)
@given(m1=st.floats(0.0, 5.0), dm=st.floats(0.0, 5.0), w=st.floats(0.3, 3.0))
def test_mass_monotonicity(m1, dm, w):
    f = TestFunction(width=w)
    assert smeared_free(m1, f).value >= smeared_free(m1 + dm, f).value * (1 - 1e-12)


# --- Källén-Lehmann pairing ------------------------------------------------


def test_single_atom_reduction():
    f = TestFunction(width=0.8)
    assert kl_two_point(free_field(2.0), f).value == smeared_free(math.sqrt(2.0), f).value


def test_mixed_measure_against_nested_oracle():
    f = TestFunction(width=1.0)
    bump = BumpDensity(0.4, (2.0, 3.0))
    m = SpectralMeasure((SpectralAtom(1.0, 0.6),), ContinuousDensity((bump,)))
    oracle = 0.6 * smeared_closed_form(1.0)
    oracle += integrate.quad(lambda u: bump(u) * smeared_closed_form(math.sqrt(u)), 2.0, 3.0,
                             epsabs=0, epsrel=1e-12)[0]
    ev = kl_two_point(m, f)
    assert ev.value == pytest.approx(oracle, rel=1e-7)


def test_linearity():
    f = TestFunction((0.0, 0.4, 0.0, 0.0), 1.2)
    m1 = SpectralMeasure((SpectralAtom(1.0, 0.6),), ContinuousDensity((BumpDensity(0.4, (2.0, 3.0)),)))
    m2 = SpectralMeasure((SpectralAtom(4.0, 0.3),), ContinuousDensity((ConstantDensity(0.2, (0.0, 5.0)),)))
    a, b = 0.7, 2.5
    lhs = kl_two_point(m1.scaled(a) + m2.scaled(b), f).value
    rhs = a * kl_two_point(m1, f).value + b * kl_two_point(m2, f).value
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_positivity_for_centred_probe():
    f = TestFunction(width=1.5)
    rng = np.random.default_rng(5)
    for _ in range(5):
        m = SpectralMeasure(
            (SpectralAtom(float(rng.uniform(0, 10)), float(rng.uniform(0.1, 1))),),
            ContinuousDensity((BumpDensity(float(rng.uniform(0.1, 1)), (1.0, 1.0 + float(rng.uniform(0.5, 5)))),)),
        )
        assert kl_two_point(m, f).value > 0


def test_polynomially_growing_density_pairs_finitely():
    # ∫ dm² m² S(m) converges thanks to the probe envelope
    m = SpectralMeasure((), ContinuousDensity((PowerDensity(1.0, 1.0),)))
    ev = kl_two_point(m, TestFunction())
    oracle = integrate.quad(lambda u: u * smeared_closed_form(math.sqrt(u)), 0, math.inf, epsrel=1e-12)[0]
    assert ev.value == pytest.approx(oracle, rel=1e-8)


def test_flat_density_pairing_value():
    ev = kl_two_point(flat_density(), TestFunction())
    oracle = integrate.quad(lambda u: smeared_closed_form(math.sqrt(u)), 0, math.inf, epsrel=1e-12)[0]
    assert ev.value == pytest.approx(oracle, rel=1e-8)


def test_divergent_pairing():
    # (m²)^400 outgrows anything double precision can hold against the probe envelope
    m = SpectralMeasure((), ContinuousDensity((PowerDensity(1.0, 400.0),)))
    with pytest.raises(PairingDivergentError, match="divergent"):
        kl_two_point(m, TestFunction())


def test_mass_scale_domain():
    with pytest.raises(DomainError):
        pairing(free_field(), TestFunction(), mass_scale=0.0)
