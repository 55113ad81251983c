"""Phase unwrapping and group delay ``tau_g = d phi_t / d omega_p``.

The pump frequency is fixed, so differentiating with respect to the probe
frequency is the same as differentiating with respect to ``delta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArityError, ConvergenceError, DomainError, GridTooCoarseError
from .response import Variant, transmission
from .steady import solve_steady_state

UNWRAP_MARGIN = 1e-6
DELAY_RTOL = 1e-3
DELAY_MAX_HALVINGS = 10
DELAY_START_FRACTION = 1e-4  # initial micro-grid half-width in units of omega_m


def unwrap_phase(phi_raw) -> np.ndarray:
    """Remove 2pi jumps so that consecutive samples differ by less than pi.

    Raises
    ------
    GridTooCoarseError
        If some minimal increment is within ``1e-6`` of pi, in which case the
        direction of the jump is ambiguous.
    """
    phi = np.asarray(phi_raw, dtype=float)
    if phi.ndim != 1 or phi.size == 0:
        raise ArityError("unwrap_phase needs a nonempty 1-D sequence")
    steps = np.diff(phi)
    inc = steps - 2.0 * math.pi * np.round(steps / (2.0 * math.pi))
    bad = np.flatnonzero(np.abs(inc) >= math.pi - UNWRAP_MARGIN)
    if bad.size:
        k = int(bad[0])
        raise GridTooCoarseError(k + 1, float(inc[k]))
    out = np.empty_like(phi)
    out[0] = phi[0]
    # shift each sample by a whole number of turns so the increment is inc
    shifts = np.cumsum(inc - steps)
    out[1:] = phi[1:] + shifts
    return out


def _is_uniform(x, rtol=1e-6):
    h = np.diff(x)
    return np.all(np.abs(h - h[0]) <= rtol * abs(h[0]))


def group_delay(delta_grid, phi_unwrapped, richardson: bool = False) -> np.ndarray:
    """Derivative of the unwrapped phase on the full grid.

    Interior points use the central difference
    ``(phi[k+1] - phi[k-1]) / (delta[k+1] - delta[k-1])``; the two end points
    use second-order one-sided three-point stencils.  With ``richardson=True``
    (uniform grids only) every point with two neighbours on each side is
    replaced by ``(4 D_h - D_2h) / 3``.
    """
    x = np.asarray(delta_grid, dtype=float)
    y = np.asarray(phi_unwrapped, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("grid and phase must be 1-D arrays of equal length")
    if x.size < 3:
        raise ArityError(f"group_delay needs at least 3 points, got {x.size}")
    if np.any(np.diff(x) <= 0):
        raise DomainError("delta grid must be strictly increasing")
    tau = np.empty_like(y)
    tau[1:-1] = (y[2:] - y[:-2]) / (x[2:] - x[:-2])
    tau[0] = _one_sided(x[0], x[1], x[2], y[0], y[1], y[2])
    tau[-1] = _one_sided(x[-1], x[-2], x[-3], y[-1], y[-2], y[-3])
    if richardson:
        if not _is_uniform(x):
            raise DomainError("Richardson refinement requires a uniform grid")
        if x.size >= 5:
            d_h = tau[2:-2]
            d_2h = (y[4:] - y[:-4]) / (x[4:] - x[:-4])
            tau[2:-2] = (4.0 * d_h - d_2h) / 3.0
    return tau


def _one_sided(x0, x1, x2, y0, y1, y2):
    # derivative at x0 of the quadratic through the three points
    h1 = x1 - x0
    h2 = x2 - x0
    # written in differences so that constant data gives exactly zero
    return (h2 / (h1 * (h2 - h1)) * (y1 - y0)
            - h1 / (h2 * (h2 - h1)) * (y2 - y0))


@dataclass(frozen=True)
class DispersionCurve:
    delta_grid: np.ndarray
    phi_raw: np.ndarray
    phi_unwrapped: np.ndarray
    tau_g: np.ndarray
    stencil_order: int = 2
    richardson: bool = False


def dispersion_curve(delta_grid, phi_raw, richardson=False) -> DispersionCurve:
    phi_u = unwrap_phase(phi_raw)
    tau = group_delay(delta_grid, phi_u, richardson=richardson)
    return DispersionCurve(
        delta_grid=np.asarray(delta_grid, dtype=float),
        phi_raw=np.asarray(phi_raw, dtype=float),
        phi_unwrapped=phi_u,
        tau_g=tau,
        richardson=richardson,
    )


def _micro_estimate(params, steady, delta0, half_width, variant):
    h = 0.5 * half_width
    grid = delta0 + h * np.arange(-2, 3)
    phi = unwrap_phase(np.angle(transmission(params, steady, grid, variant)))
    d_h = (phi[3] - phi[1]) / (2.0 * h)
    d_2h = (phi[4] - phi[0]) / (4.0 * h)
    return (4.0 * d_h - d_2h) / 3.0


def delay_at(params, E_l, E_p, delta0, variant=Variant.ORACLE_CONSISTENT,
             rtol=DELAY_RTOL, max_halvings=DELAY_MAX_HALVINGS, start_fraction=DELAY_START_FRACTION):
    """Group delay (s) at ``delta0`` from an adaptively shrunk 5-point grid.

    The half-width starts at ``start_fraction * omega_m`` and is halved until
    two successive Richardson-refined estimates agree to ``rtol``.  The phase
    itself does not depend on ``E_p``; the argument is kept so the call
    mirrors the other response operations.
    """
    if not E_p > 0:
        raise DomainError(f"E_p must be positive, got {E_p!r}")
    steady = solve_steady_state(params, E_l)
    w = start_fraction * params.omega_m
    estimates = [None]
    for _ in range(max_halvings + 1):
        try:
            est = _micro_estimate(params, steady, delta0, w, variant)
        except GridTooCoarseError:
            est = None
        prev = estimates[-1]
        if est is not None and prev is not None and abs(est - prev) <= rtol * abs(est):
            return float(est)
        estimates.append(est)
        w *= 0.5
    raise ConvergenceError(
        f"group delay at delta0 = {delta0!r} did not converge", estimates[-2], estimates[-1]
    )
