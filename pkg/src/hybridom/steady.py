"""Self-consistent pump operating point.

With the mirror displacement and the atomic coherence eliminated, the
intracavity pump amplitude satisfies ``c_s = E_l / D(n_s)`` where

    D(n) = kappa + i (Delta_c - g0**2 n / omega_m) - g_ac**2 <sigma_z> / (gamma_a + i Delta_a)

and ``n_s = |c_s|**2``.  Taking the modulus squared turns this into a real
cubic in ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SolverError
from .params import SystemParams

REAL_ROOT_TOL = 1e-7


def cubic_roots(coeffs) -> np.ndarray:
    """All roots of ``a n**3 + b n**2 + c n + d``, highest power first.

    Leading zero coefficients reduce the degree.  Roots come from the
    companion matrix and are then polished with one Newton step each.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (4,):
        raise ValueError("cubic_roots expects exactly 4 coefficients")
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        raise DomainError("all coefficients are zero")
    poly = coeffs[nz[0]:]
    roots = np.roots(poly).astype(complex)
    dpoly = np.polyder(poly)
    for i, r in enumerate(roots):
        d = np.polyval(dpoly, r)
        if d != 0:
            step = np.polyval(poly, r) / d
            cand = r - step
            if abs(np.polyval(poly, cand)) <= abs(np.polyval(poly, r)):
                roots[i] = cand
    return roots


@dataclass(frozen=True)
class SteadyState:
    params: SystemParams
    E_l: float
    c_s: complex
    n_s: float
    delta_tilde: float
    q_s: float
    sigma_s: complex
    branch_count: int


def atomic_term(params: SystemParams) -> complex:
    """``g_ac**2 <sigma_z> / (gamma_a + i Delta_a)``, the atom's pull on the cavity."""
    num = params.g_ac**2 * params.sigma_z_ss
    if num == 0:
        return 0j
    den = complex(params.gamma_a, params.delta_a)
    if den == 0:
        raise DomainError("atomic term diverges: gamma_a = 0 and delta_a = 0")
    return num / den


def cavity_denominator(params: SystemParams, n):
    """``D(n)`` for scalar or array photon numbers."""
    a = params.g0**2 / params.omega_m
    return params.kappa + 1j * (params.delta_c - a * np.asarray(n)) - atomic_term(params)


def steady_cubic(params: SystemParams, E_l: float) -> np.ndarray:
    """Coefficients of ``n |D(n)|**2 - E_l**2``, highest power first."""
    a = params.g0**2 / params.omega_m
    s = atomic_term(params)
    k = params.kappa - s.real
    w = params.delta_c - s.imag
    return np.array([a * a, -2.0 * a * w, k * k + w * w, -E_l * E_l])


def _polish_real(coeffs, x):
    p = np.poly1d(coeffs)
    dp = p.deriv()
    for _ in range(8):
        d = dp(x)
        if d == 0:
            break
        step = p(x) / d
        nxt = x - step
        if abs(p(nxt)) > abs(p(x)):
            break
        x = nxt
        if abs(step) <= 4 * np.finfo(float).eps * max(abs(x), 1e-300):
            break
    return x


def solve_steady_state(params: SystemParams, E_l: float) -> SteadyState:
    """Solve for the pump operating point on the lowest-amplitude branch."""
    if E_l < 0:
        raise DomainError(f"E_l must be nonnegative, got {E_l!r}")
    s = atomic_term(params)
    if E_l == 0:
        n = 0.0
        branch_count = 1
    else:
        coeffs = steady_cubic(params, E_l)
        roots = cubic_roots(coeffs)
        scale = np.abs(roots).max()
        real = sorted(
            r.real for r in roots
            if abs(r.imag) <= REAL_ROOT_TOL * max(abs(r), scale * 1e-12) and r.real >= 0
        )
        if not real:
            raise SolverError(f"no nonnegative real root for E_l = {E_l!r}")
        real = [_polish_real(coeffs, r) for r in real]
        real = [r for r in real if r >= 0]
        if not real:
            raise SolverError(f"no nonnegative real root for E_l = {E_l!r}")
        n = float(min(real))
        branch_count = len(real)
    D = cavity_denominator(params, n)
    if D == 0:
        raise SolverError("cavity denominator vanishes at the steady state")
    c_s = complex(E_l / D)
    q_s = params.g0 * n / params.omega_m
    if s == 0:
        sigma_s = 0j
    else:
        sigma_s = 1j * params.g_ac * c_s * params.sigma_z_ss / complex(params.gamma_a, params.delta_a)
    return SteadyState(
        params=params,
        E_l=float(E_l),
        c_s=c_s,
        n_s=n,
        delta_tilde=params.delta_c - params.g0**2 * n / params.omega_m,
        q_s=q_s,
        sigma_s=complex(sigma_s),
        branch_count=branch_count,
    )


def fixed_point_residual(steady: SteadyState) -> float:
    """``|c_s (kappa + i Delta~ - atomic) - E_l|``; zero at an exact solution."""
    p = steady.params
    D = p.kappa + 1j * steady.delta_tilde - atomic_term(p)
    return abs(steady.c_s * D - steady.E_l)
