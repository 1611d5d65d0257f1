import numpy as np
import pytest

from invspec.errors import ProfileError
from invspec.profiles import (
    HermitianProfile,
    SymplecticProfile,
    between_hermitian_profile,
    bump_profile,
    canonical_gamma_profile,
    canonical_hermitian,
    canonical_hermitian_profile,
    check_hypothesis,
    constant_hermitian_profile,
    fubini_study_hermitian_profile,
    fubini_study_profile,
    gamma_can,
    mixture_profile,
    samples_hermitian_profile,
    validate_hermitian,
)
from invspec.profiles.hermitian import richardson


def test_canonical_hermitian_examples():
    assert canonical_hermitian(2, 0.75) == pytest.approx(0.25)
    assert np.all(canonical_hermitian(0, np.linspace(0, 1, 11)) == 1.0)
    assert canonical_hermitian(1, 0.25) == 1.0
    with pytest.raises(ProfileError):
        canonical_hermitian(-1, 0.5)


def test_validate_canonical_m3():
    r = validate_hermitian(canonical_hermitian_profile(3))
    assert r.passed and r.limit_coeff == pytest.approx(8.0, rel=1e-10)


def test_validate_rejects_extra_vanishing():
    for m in (0, 1, 2):
        h = HermitianProfile(lambda x, m=m: (1 - x) ** (m + 1), m=m)
        r = validate_hermitian(h)
        assert not r.passed and not r.limit_nonzero


def test_validate_rejects_blowup():
    h = HermitianProfile(lambda x: (1 - x) ** 0.5, m=1)
    assert not validate_hermitian(h).passed


def test_validate_constant_and_fs():
    r = validate_hermitian(constant_hermitian_profile())
    assert r.passed and r.limit_coeff == pytest.approx(1.0)
    r = validate_hermitian(fubini_study_hermitian_profile(2))
    assert r.passed and r.limit_coeff == pytest.approx(1.0)


def test_hermitian_rejects_negative_degree():
    with pytest.raises(ProfileError):
        HermitianProfile(lambda x: x, m=-1)


def test_richardson_removes_linear_error():
    h = 2.0 ** -np.arange(6)
    best, err = richardson(3.0 + 0.7 * h + 0.2 * h ** 2)
    assert best == pytest.approx(3.0, abs=1e-12) and err < 1e-12


def test_hypothesis_fs_constant():
    r = check_hypothesis(fubini_study_profile(), constant_hermitian_profile(), 0)
    assert r.operative_ok and r.lower_ok and r.upper_ok


def test_hypothesis_canonical_self_comparison():
    for m in (0, 1, 3):
        r = check_hypothesis(canonical_gamma_profile(), canonical_hermitian_profile(m), m)
        assert r.operative_ok
        assert not r.strict_interior
        assert r.worst_margin_lower == pytest.approx(0.0, abs=1e-15)


def test_hypothesis_upper_violation_at_midpoint():
    g = SymplecticProfile(lambda x: np.minimum(1.01 * gamma_can(x), gamma_can(x) + 4 * gamma_can(x) ** 2))
    r = check_hypothesis(g, constant_hermitian_profile(), 0)
    assert not r.upper_ok and r.lower_ok
    assert r.worst_margin_upper < 0
    assert r.argmin_upper == pytest.approx(0.5)


def test_hypothesis_margins_consistent_with_verdicts():
    for g in (fubini_study_profile(), bump_profile(4.0), mixture_profile(0.2)):
        for t in (0.0, 0.5, 1.0):
            r = check_hypothesis(g, between_hermitian_profile(1, g, t), 1)
            assert r.lower_ok == (r.worst_margin_lower >= -r.atol)
            assert r.upper_ok == (r.worst_margin_upper >= -r.atol)
            assert r.strict_interior == (r.strict_margin > 0)
            assert r.operative_ok


def test_between_profile_strict_interior():
    g = fubini_study_profile()
    r = check_hypothesis(g, between_hermitian_profile(2, g, 0.5), 2)
    assert r.strict_interior


def test_between_rejects_bad_t():
    with pytest.raises(ProfileError):
        between_hermitian_profile(0, fubini_study_profile(), 1.5)


def test_samples_hermitian():
    xs = np.linspace(0, 0.95, 20)
    h = samples_hermitian_profile(2, xs, (1 - xs) ** 2)
    assert np.allclose(h(xs), (1 - xs) ** 2, rtol=1e-12)
    assert validate_hermitian(h).passed
