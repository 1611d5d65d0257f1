import numpy as np
import pytest

from invspec.spectrum import SpectrumResult, read_spectrum_csv


def make():
    return SpectrumResult.from_raw([0.0, 4.0, 12.0], "fem", 1, error_estimates=[0, 1e-7, 2e-7],
                                   mesh_sizes=(64, 128), meta={"grading": 2.0})


def test_normalization_exact():
    r = make()
    assert np.array_equal(r.eigenvalues, np.array([0.0, 2.0, 6.0]))
    assert r.normalization == 0.5


def test_csv_round_trip():
    r = make()
    text = r.to_csv()
    assert text.splitlines()[0] == "j,lambda,mu_raw,error_estimate,method"
    back = read_spectrum_csv(text, m=1)
    assert np.array_equal(back.eigenvalues, r.eigenvalues)
    assert back.to_csv() == text


def test_json_round_trip():
    r = make()
    back = SpectrumResult.from_json(r.to_json())
    assert back.to_json() == r.to_json()
    assert back.mesh_sizes == (64, 128)


def test_validation():
    with pytest.raises(ValueError):
        SpectrumResult(eigenvalues=[0, 1], raw=[0], method="fem", m=0)
    with pytest.raises(ValueError):
        SpectrumResult.from_raw([0, 1], "guess", 0)
    with pytest.raises(ValueError):
        read_spectrum_csv("j,lambda,mu_raw,error_estimate,method\n")
