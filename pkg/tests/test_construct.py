import numpy as np
import pytest

from invspec.errors import ProfileError
from invspec.profiles import (
    Mollifier,
    SymplecticProfile,
    bump_profile,
    canonical_gamma_profile,
    concave_conjugate,
    fubini_study_potential,
    fubini_study_profile,
    gamma_can,
    gamma_from_potential,
    gamma_fs,
    legendre_fenchel,
    mixture_profile,
    moment_inverse,
    potential_from_gamma,
    reflect,
    samples_profile,
)

X = np.linspace(1e-3, 1 - 1e-3, 999)


@pytest.fixture(scope="module")
def constructed():
    return {
        "canonical": potential_from_gamma(canonical_gamma_profile()),
        "fs": potential_from_gamma(fubini_study_profile()),
        "bump": potential_from_gamma(bump_profile(3.0, Mollifier(0.1, 0.45, 0.15))),
    }


def test_canonical_value_at_zero(constructed):
    assert constructed["canonical"](0.0) == pytest.approx(0.0, abs=1e-14)


def test_canonical_matches_closed_form_up_to_constant(constructed):
    u = np.linspace(-5, 5, 41)
    F = constructed["canonical"]
    c = F(u) - (np.minimum(0, u) - 0.25 * np.exp(-2 * np.abs(u)))
    assert np.ptp(c) < 1e-10
    assert c[0] == pytest.approx(0.25, abs=1e-10)


def test_fs_matches_up_to_constant(constructed):
    u = np.linspace(-5, 5, 41)
    c = constructed["fs"](u) - fubini_study_potential()(u)
    assert np.ptp(c) <= 1e-6
    assert c[0] == pytest.approx(0.5 * np.log(2.0), abs=1e-10)


@pytest.mark.parametrize("name,ref", [("canonical", gamma_can), ("fs", gamma_fs)])
def test_round_trip(constructed, name, ref):
    back = gamma_from_potential(constructed[name], X)
    assert np.max(np.abs(back / ref(X) - 1)) < 1e-6


def test_round_trip_bump(constructed):
    g = bump_profile(3.0, Mollifier(0.1, 0.45, 0.15))
    back = gamma_from_potential(constructed["bump"], X)
    assert np.max(np.abs(back / g(X) - 1)) < 1e-6


def test_slope_gap(constructed):
    for F in constructed.values():
        assert abs(F.slope_gap - 1.0) <= 1e-8
        assert F.slope_minus_inf == pytest.approx(1.0, abs=1e-8)
        assert F.slope_plus_inf == pytest.approx(0.0, abs=1e-8)


def test_constructed_is_concave_and_bounded(constructed):
    u = np.linspace(-40, 40, 801)
    for F in constructed.values():
        assert np.all(F.d2(u) < 0)
        assert np.all(np.abs(F(u) - np.minimum(0, u)) < 2.0)


def test_moment_coordinate_matches_integral(constructed):
    # G_g(x) = -int_{1/2}^x 1/gamma
    from scipy.integrate import quad

    g = bump_profile(3.0, Mollifier(0.1, 0.45, 0.15))
    F = constructed["bump"]
    for x in (0.1, 0.3, 0.5, 0.62, 0.9):
        ref = -quad(lambda s: 1 / g(s), 0.5, x, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        assert moment_inverse(F, x) == pytest.approx(ref, abs=1e-9)


def test_constructed_duality(constructed):
    x = np.linspace(0.02, 0.98, 49)
    for F in constructed.values():
        G = moment_inverse(F, x)
        assert np.allclose(legendre_fenchel(F, x), x * G - F(G), atol=1e-10)


def test_constructed_involution(constructed):
    u = np.linspace(-8, 8, 17)
    F = constructed["bump"]
    back = concave_conjugate(lambda x: legendre_fenchel(F, x), u)
    assert np.max(np.abs(back - F(u))) < 1e-8


def test_constructed_derivative_consistency(constructed):
    u = np.linspace(-4, 4, 17)
    h = 1e-5
    for name in ("fs", "bump"):
        F = constructed[name]
        assert np.allclose(F.d1(u), (F(u + h) - F(u - h)) / (2 * h), rtol=1e-6, atol=1e-9)
        assert np.allclose(F.d2(u), (F.d1(u + h) - F.d1(u - h)) / (2 * h), rtol=1e-6, atol=1e-9)


def test_reflection_of_constructed():
    g = bump_profile(2.0, Mollifier(0.1, 0.4, 0.1))
    F, Fr = potential_from_gamma(g), potential_from_gamma(reflect(g))
    x = np.linspace(0.05, 0.95, 19)
    assert np.allclose(gamma_from_potential(Fr, x), gamma_from_potential(F, 1 - x), atol=1e-10)


def test_samples_and_mixture_normalized():
    xs = np.linspace(0.05, 0.95, 19)
    for g in (samples_profile(xs, gamma_fs(xs)), mixture_profile(0.3)):
        assert abs(potential_from_gamma(g).slope_gap - 1) <= 1e-8


def test_rejects_profiles_outside_class_g():
    g = SymplecticProfile(lambda x: gamma_fs(x) + 0.5 * np.sqrt(x * (1 - x)))
    with pytest.raises(ProfileError):
        potential_from_gamma(g)


def test_total_mass_by_quadrature(constructed):
    # int -F'' du over the line equals the slope gap, independently of the slopes
    from scipy.integrate import quad

    for F in constructed.values():
        f = lambda u, F=F: -float(F.d2(np.array([u]))[0])
        pieces = ((-40, -5), (-5, 0), (0, 5), (5, 40))
        total = sum(quad(f, a, b, epsabs=1e-14, epsrel=1e-13, limit=400)[0] for a, b in pieces)
        assert abs(total - 1.0) <= 1e-8
