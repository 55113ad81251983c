"""First-order probe response: sideband amplitudes, transmission and phase.

Linearizing the mean-field equations around the pump steady state with
``h = h_s + h_- exp(-i delta t) + h_+ exp(+i delta t)`` gives, per unit probe
drive, a 2x2 system for ``(c_-, conj(c_+))``::

    [kappa + i(Dt - delta) - S(delta) - i G n ]  c_-      - i G c_s**2 conj(c_+)  = E_p
    i G conj(c_s)**2 c_-  + [kappa - i(Dt + delta) - conj(S(-delta)) + i G n] conj(c_+) = 0

with ``Dt`` the effective detuning, ``n = |c_s|**2``, ``G = g0**2 chi(delta)``,
``chi`` the mechanical susceptibility and ``S(x) = g_ac**2 <sigma_z> /
(gamma_a + i (Delta_a - x))`` the atomic self-energy.  The full derivation is
in ``docs/derivation.md``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError
from .params import SystemParams
from .steady import SteadyState, solve_steady_state


class Variant(str, enum.Enum):
    ORACLE_CONSISTENT = "oracle-consistent"
    PAPER_LITERAL = "paper-literal"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            raise DomainError(
                f"unknown response variant {value!r}; expected one of "
                + ", ".join(v.value for v in cls)
            ) from None


@dataclass(frozen=True)
class ProbeResponse:
    delta: float
    c_minus: complex
    c_plus: complex
    T: complex
    T_sq: float
    phi_t: float


def mechanical_susceptibility(params: SystemParams, delta):
    """``omega_m / (omega_m**2 - delta**2 - i gamma_m delta)``."""
    delta = np.asarray(delta, dtype=float)
    w = params.omega_m
    chi = w / (w * w - delta * delta - 1j * params.gamma_m * delta)
    return chi if chi.ndim else complex(chi)


def atomic_self_energy(params: SystemParams, delta):
    """``g_ac**2 <sigma_z> / (gamma_a + i (Delta_a - delta))``."""
    delta = np.asarray(delta, dtype=float)
    num = params.g_ac**2 * params.sigma_z_ss
    if num == 0:
        return np.zeros(delta.shape, complex)
    return num / (params.gamma_a + 1j * (params.delta_a - delta))


def _check_steady(params: SystemParams, steady: SteadyState):
    if steady.params != params:
        raise ContractError("steady state was solved for a different parameter set")


def _linearized(params, steady, delta):
    """Normalized ``c_-/E_p`` and ``conj(c_+)/E_p`` from the 2x2 solve."""
    G = params.g0**2 * mechanical_susceptibility(params, delta)
    n = steady.n_s
    cs = steady.c_s
    dt = steady.delta_tilde
    k = params.kappa
    a11 = k + 1j * (dt - delta) - atomic_self_energy(params, delta) - 1j * G * n
    a12 = -1j * G * cs * cs
    a21 = 1j * G * np.conj(cs) ** 2
    a22 = k - 1j * (dt + delta) - np.conj(atomic_self_energy(params, -delta)) + 1j * G * n
    det = a11 * a22 - a12 * a21
    return a22 / det, -a21 / det


def factored_closed_form(params, steady, delta, literal_cavity_detuning=False):
    """Normalized ``c_-/E_p`` from the factored closed form ``(A - B) / den``.

    ``A' = conj(A(-delta))`` and ``B' = conj(B(-delta))``.  As written, ``A``
    carries ``-i Delta_c - i Dt``; by default the ``Delta_c`` there is read as
    the probe detuning, the only reading that reduces to the atom-free
    transparency formula.  ``literal_cavity_detuning=True`` keeps it verbatim.
    """
    delta = np.asarray(delta, dtype=float)
    n = steady.n_s
    dt = steady.delta_tilde

    def C(x):
        return 1j * params.g0**2 * mechanical_susceptibility(params, x) * n

    def A(x):
        det_term = params.delta_c if literal_cavity_detuning else x
        return params.kappa - 1j * det_term - 1j * dt + C(x)

    def B(x):
        num = params.g_ac**2 * params.sigma_z_ss
        if num == 0:
            return np.zeros(np.shape(x), complex)
        return num / (params.gamma_a - 1j * params.delta_a - 1j * x)

    a, b, c = A(delta), B(delta), C(delta)
    a_p, b_p = np.conj(A(-delta)), np.conj(B(-delta))
    den = b * b_p + (a - c) * (a_p + c) - (a * b_p + a_p * b) + 2j * c * dt
    return (a - b) / den


def _normalized_sidebands(params, steady, delta, variant):
    variant = Variant.parse(variant)
    if variant is Variant.ORACLE_CONSISTENT:
        return _linearized(params, steady, delta)
    cm = factored_closed_form(params, steady, delta)
    # the factored form gives c_- only; close it with the second row of the 2x2 system
    G = params.g0**2 * mechanical_susceptibility(params, delta)
    a21 = 1j * G * np.conj(steady.c_s) ** 2
    a22 = (params.kappa - 1j * (steady.delta_tilde + delta)
           - np.conj(atomic_self_energy(params, -delta)) + 1j * G * steady.n_s)
    return cm, -a21 * cm / a22


def transmission_from_normalized(params, cm_norm):
    """``T = 1 - 2 kappa c_- / E_p`` (input coupling sqrt(2 kappa) on both sides)."""
    return 1.0 - 2.0 * params.kappa * cm_norm


def probe_response(params, steady, E_p, delta, variant=Variant.ORACLE_CONSISTENT) -> ProbeResponse:
    """Probe-sideband amplitudes and transmission at a single detuning."""
    _check_steady(params, steady)
    if not E_p > 0:
        raise DomainError(f"E_p must be positive, got {E_p!r}")
    cm_n, cp_conj_n = _normalized_sidebands(params, steady, float(delta), variant)
    T = complex(transmission_from_normalized(params, cm_n))
    return ProbeResponse(
        delta=float(delta),
        c_minus=complex(E_p * cm_n),
        c_plus=complex(np.conj(E_p * cp_conj_n)),
        T=T,
        T_sq=abs(T) ** 2,
        phi_t=float(np.angle(T)),
    )


def transmission(params, steady, delta, variant=Variant.ORACLE_CONSISTENT):
    """Vectorized complex ``T(delta)`` for an array of detunings."""
    _check_steady(params, steady)
    cm_n, _ = _normalized_sidebands(params, steady, np.asarray(delta, dtype=float), variant)
    return transmission_from_normalized(params, cm_n)


def transmission_spectrum(params, E_l, E_p, delta_grid, variant=Variant.ORACLE_CONSISTENT):
    """One :class:`ProbeResponse` per grid point, sharing a single steady state."""
    grid = np.asarray(delta_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("delta_grid must be a nonempty 1-D sequence")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("delta_grid must be strictly increasing")
    if not E_p > 0:
        raise DomainError(f"E_p must be positive, got {E_p!r}")
    steady = solve_steady_state(params, E_l)
    cm_n, cp_n = _normalized_sidebands(params, steady, grid, variant)
    T = transmission_from_normalized(params, cm_n)
    return [
        ProbeResponse(
            delta=float(d),
            c_minus=complex(E_p * a),
            c_plus=complex(np.conj(E_p * b)),
            T=complex(t),
            T_sq=float(abs(t) ** 2),
            phi_t=float(np.angle(t)),
        )
        for d, a, b, t in zip(grid, cm_n, cp_n, T)
    ]


def empty_cavity_transmission(kappa, delta_c, delta):
    """``1 - 2 kappa / (kappa + i (Delta_c - delta))``."""
    delta = np.asarray(delta, dtype=float)
    return 1.0 - 2.0 * kappa / (kappa + 1j * (delta_c - delta))


def feature_width(delta_grid, T_sq) -> float:
    """Outer full width of the spectral feature at half its excursion.

    The baseline is the mean of the two end samples; the width spans the first
    to the last sample whose deviation from the baseline reaches half of the
    largest deviation.
    """
    d = np.asarray(delta_grid, dtype=float)
    y = np.asarray(T_sq, dtype=float)
    dev = np.abs(y - 0.5 * (y[0] + y[-1]))
    peak = dev.max()
    if peak == 0:
        return 0.0
    idx = np.flatnonzero(dev >= 0.5 * peak)
    return float(d[idx[-1]] - d[idx[0]])
