import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridom.errors import DomainError
from hybridom.params import (
    HBAR,
    SPEED_OF_LIGHT,
    TWO_PI,
    DriveParams,
    PowerCalibration,
    SystemParams,
    amplitude_to_power,
    angular_to_cyclic,
    cyclic_to_angular,
    reference_params,
    power_to_amplitude,
    validate,
    validate_drive,
)


def test_cyclic_to_angular_examples():
    assert cyclic_to_angular(0.0) == 0.0
    assert cyclic_to_angular(10e6) == pytest.approx(6.2831853e7, rel=1e-8)
    assert cyclic_to_angular(215e3) == pytest.approx(1.3509e6, rel=1e-4)


@given(st.floats(min_value=-1e12, max_value=1e12, allow_nan=False))
def test_frequency_round_trip(f):
    assert angular_to_cyclic(cyclic_to_angular(f)) == pytest.approx(f, rel=1e-15, abs=1e-300)


def test_power_to_amplitude_zero_power():
    assert power_to_amplitude(0.0, 1064e-9, TWO_PI * 215e3) == 0.0


def test_power_to_amplitude_reference_point():
    # recomputed by hand: photon energy hc/lambda, then sqrt(2 kappa P / E_photon)
    e_photon = HBAR * 2 * math.pi * SPEED_OF_LIGHT / 1064e-9
    expected = math.sqrt(2 * (2 * math.pi * 215e3) * 6e-6 / e_photon)
    got = power_to_amplitude(6e-6, 1064e-9, TWO_PI * 215e3)
    assert got == pytest.approx(expected, rel=1e-14)
    assert got == pytest.approx(9.3e9, rel=0.01)


@pytest.mark.parametrize("lam", [0.0, -1e-6])
def test_power_to_amplitude_rejects_bad_wavelength(lam):
    with pytest.raises(DomainError):
        power_to_amplitude(1e-6, lam, 1e6)


@given(st.floats(min_value=0, max_value=1.0), st.floats(min_value=1e3, max_value=1e9))
def test_power_amplitude_round_trip(P, kappa):
    E = power_to_amplitude(P, 1064e-9, kappa)
    assert amplitude_to_power(E, 1064e-9, kappa) == pytest.approx(P, rel=1e-12, abs=1e-30)


def test_conversions_bit_identical():
    a = power_to_amplitude(3.3e-6, 780e-9, 1.234e6)
    b = power_to_amplitude(3.3e-6, 780e-9, 1.234e6)
    assert a == b


def test_anchored_calibration_hits_reference():
    cal = PowerCalibration("anchored")
    assert cal.amplitude(6e-6, TWO_PI * 215e3) == pytest.approx(TWO_PI * 2e6, rel=1e-14)
    # same kappa * P scaling as the physical formula
    assert cal.amplitude(24e-6, TWO_PI * 215e3) == pytest.approx(TWO_PI * 4e6, rel=1e-14)
    assert cal.power(TWO_PI * 2e6, TWO_PI * 215e3) == pytest.approx(6e-6, rel=1e-14)


def test_physical_calibration_matches_formula():
    cal = PowerCalibration("physical")
    assert cal.amplitude(6e-6, 1e6) == power_to_amplitude(6e-6, 1064e-9, 1e6)


def test_unknown_calibration_mode():
    with pytest.raises(DomainError):
        PowerCalibration("magic").amplitude(1e-6, 1e6)


def test_reference_preset_validates():
    p = reference_params()
    assert validate(p).ok
    assert p.g0 == pytest.approx(TWO_PI * 1.2e6)
    assert p.sideband_resolved


def test_zero_kappa_fails():
    report = validate(reference_params(kappa=0.0))
    assert not report.ok
    assert "kappa must be positive" in report.violations


def test_inversion_out_of_range():
    report = validate(reference_params(sigma_z_ss=2.0))
    assert not report.ok
    assert any("sigma_z_ss" in v for v in report.violations)


def test_from_hz_passes_through_dimensionless_fields():
    p = SystemParams.from_hz(omega_m=1.0, gamma_m=1.0, kappa=1.0, delta_c=1.0, g0=1.0,
                             g_ac=1.0, gamma_a=1.0, delta_a=1.0, sigma_z_ss=-1.0, lambda_l=5e-7)
    assert p.kappa == TWO_PI and p.sigma_z_ss == -1.0 and p.lambda_l == 5e-7


def test_probe_strength_limit():
    assert validate_drive(DriveParams(1.0, 0.1)).ok
    assert not validate_drive(DriveParams(1.0, 0.2)).ok
    assert validate_drive(DriveParams(1.0, 0.2), strict=False).ok
