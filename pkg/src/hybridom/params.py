"""Physical parameter model, unit conversions and validation.

All rates, detunings and couplings are stored in angular units (rad/s).  The
mechanical quadratures are dimensionless, so the radiation-pressure coupling
is a single rate ``g0`` and neither the mirror mass nor the cavity length
appear anywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import DomainError

HBAR = 1.054571817e-34  # J s
SPEED_OF_LIGHT = 299792458.0  # m/s
TWO_PI = 2.0 * math.pi

DEFAULT_WAVELENGTH = 1064e-9  # m
MAX_PROBE_RATIO = 0.1


def cyclic_to_angular(f):
    """Convert a cyclic frequency in Hz to rad/s."""
    return TWO_PI * np.asarray(f, dtype=float) if np.ndim(f) else TWO_PI * float(f)


def angular_to_cyclic(w):
    """Convert an angular frequency in rad/s to Hz."""
    return np.asarray(w, dtype=float) / TWO_PI if np.ndim(w) else float(w) / TWO_PI


def laser_angular_frequency(lambda_l: float) -> float:
    if not lambda_l > 0:
        raise DomainError(f"wavelength must be positive, got {lambda_l!r}")
    return TWO_PI * SPEED_OF_LIGHT / lambda_l


def power_to_amplitude(P_l: float, lambda_l: float, kappa: float) -> float:
    """Drive amplitude ``E_l = sqrt(2 kappa P_l / (hbar omega_l))`` in 1/s.

    Parameters
    ----------
    P_l : float
        Laser power in W.
    lambda_l : float
        Vacuum wavelength in m; sets the photon energy.
    kappa : float
        Cavity amplitude decay rate in rad/s.
    """
    omega_l = laser_angular_frequency(lambda_l)
    if P_l < 0:
        raise DomainError(f"power must be nonnegative, got {P_l!r}")
    if kappa < 0:
        raise DomainError(f"kappa must be nonnegative, got {kappa!r}")
    return math.sqrt(2.0 * kappa * P_l / (HBAR * omega_l))


def amplitude_to_power(E_l: float, lambda_l: float, kappa: float) -> float:
    """Inverse of :func:`power_to_amplitude`."""
    omega_l = laser_angular_frequency(lambda_l)
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa!r}")
    return E_l * E_l * HBAR * omega_l / (2.0 * kappa)


@dataclass(frozen=True)
class PowerCalibration:
    """Map a pump power onto a drive amplitude.

    ``physical`` uses the photon energy at ``lambda_l``.  ``anchored`` keeps
    the same ``E_l**2 ~ kappa * P_l`` scaling but fixes the proportionality so
    that ``p_ref`` at ``kappa_ref`` gives ``e_ref``; with the defaults, 6 uW at
    kappa/2pi = 215 kHz drives E_l/2pi = 2 MHz.
    """

    mode: str = "physical"
    p_ref: float = 6e-6
    kappa_ref: float = TWO_PI * 215e3
    e_ref: float = TWO_PI * 2e6

    def __post_init__(self):
        if self.mode not in ("physical", "anchored"):
            raise DomainError(f"unknown power calibration {self.mode!r}")
        if self.mode == "anchored" and not (self.p_ref > 0 and self.kappa_ref > 0 and self.e_ref > 0):
            raise DomainError("anchored calibration needs positive p_ref, kappa_ref and e_ref")

    @property
    def quantum(self) -> float:
        """Effective energy per drive quantum (J) of the anchored mapping."""
        return 2.0 * self.kappa_ref * self.p_ref / self.e_ref**2

    def amplitude(self, P_l: float, kappa: float, lambda_l: float = DEFAULT_WAVELENGTH) -> float:
        if self.mode == "physical":
            return power_to_amplitude(P_l, lambda_l, kappa)
        if P_l < 0:
            raise DomainError(f"power must be nonnegative, got {P_l!r}")
        return math.sqrt(2.0 * kappa * P_l / self.quantum)

    def power(self, E_l: float, kappa: float, lambda_l: float = DEFAULT_WAVELENGTH) -> float:
        if self.mode == "physical":
            return amplitude_to_power(E_l, lambda_l, kappa)
        return E_l * E_l * self.quantum / (2.0 * kappa)


@dataclass(frozen=True)
class SystemParams:
    """Rates of the hybrid cavity (all in rad/s unless noted).

    ``sigma_z_ss`` is the frozen atomic inversion and ``lambda_l`` the pump
    wavelength in m, used only for power conversion.
    """

    omega_m: float
    gamma_m: float
    kappa: float
    delta_c: float
    g0: float
    g_ac: float
    gamma_a: float
    delta_a: float
    sigma_z_ss: float = 1.0
    lambda_l: float = DEFAULT_WAVELENGTH

    @property
    def sideband_resolved(self) -> bool:
        return self.omega_m > self.kappa

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_hz(cls, **values) -> "SystemParams":
        """Build from X/2pi values given in Hz; ``sigma_z_ss`` and ``lambda_l`` pass through."""
        out = {}
        for name, v in values.items():
            out[name] = v if name in ("sigma_z_ss", "lambda_l") else cyclic_to_angular(v)
        return cls(**out)


@dataclass(frozen=True)
class DriveParams:
    """Pump amplitude ``E_l`` and probe amplitude ``E_p`` (1/s), probe detuning ``delta`` (rad/s)."""

    E_l: float
    E_p: float
    delta: float = 0.0


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate(params: SystemParams) -> ValidationReport:
    """Check the invariants of a parameter record without raising."""
    v = []
    for name, value in params.as_dict().items():
        if not math.isfinite(value):
            v.append(f"{name} must be finite")
    if not params.omega_m > 0:
        v.append("omega_m must be positive")
    if not params.kappa > 0:
        v.append("kappa must be positive")
    if not params.gamma_m >= 0:
        v.append("gamma_m must be nonnegative")
    if not params.gamma_a >= 0:
        v.append("gamma_a must be nonnegative")
    if not params.lambda_l > 0:
        v.append("lambda_l must be positive")
    if not -1.0 <= params.sigma_z_ss <= 1.0:
        v.append("sigma_z_ss must lie in [-1, 1]")
    return ValidationReport(tuple(v))


def validate_drive(drive: DriveParams, strict: bool = True) -> ValidationReport:
    v = []
    if not drive.E_l >= 0:
        v.append("E_l must be nonnegative")
    if not drive.E_p >= 0:
        v.append("E_p must be nonnegative")
    if strict and drive.E_p > MAX_PROBE_RATIO * drive.E_l:
        v.append(f"E_p must not exceed {MAX_PROBE_RATIO} * E_l (weak-probe linearization)")
    return ValidationReport(tuple(v))


def reference_params(**overrides) -> SystemParams:
    """The base parameter set of the hybrid system (Delta_a = +omega_m)."""
    base = SystemParams.from_hz(
        omega_m=10e6,
        gamma_m=140.0,
        kappa=215e3,
        delta_c=10e6,
        g0=1.2e6,
        g_ac=4e6,
        gamma_a=200e3,
        delta_a=10e6,
    )
    return base.replace(**overrides) if overrides else base


REFERENCE_PUMP_AMPLITUDE = TWO_PI * 2e6  # E_l in 1/s
