"""Direct time integration of the mean-field equations.

This is the ground truth for the closed-form modules: it integrates the
nonlinear equations of motion (dimensionless quadratures, frozen inversion)

    dq/dt     = omega_m p
    dp/dt     = -omega_m q - gamma_m p + g0 |c|**2
    dc/dt     = -(kappa + i Delta_c) c + i g0 c q - i g_ac sigma + E_l + E_p exp(-i delta t)
    dsigma/dt = -(gamma_a + i Delta_a) sigma + i g_ac c <sigma_z>

and reads the tone amplitudes off the settled tail by demodulation.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

from .errors import AlignmentError, ArityError, DomainError, InstabilityError, StiffnessError
from .params import DriveParams, SystemParams
from .steady import solve_steady_state

METHOD_ORDER = 5
DIVERGENCE_FACTOR = 1e12


@dataclass(frozen=True)
class MeanFieldState:
    q: float = 0.0
    p: float = 0.0
    c: complex = 0j
    sigma: complex = 0j
    t: float = 0.0

    def to_array(self) -> np.ndarray:
        c = complex(self.c)
        s = complex(self.sigma)
        return np.array([self.q, self.p, c.real, c.imag, s.real, s.imag], dtype=float)

    @classmethod
    def from_array(cls, y, t=0.0) -> "MeanFieldState":
        return cls(float(y[0]), float(y[1]), complex(y[2], y[3]), complex(y[4], y[5]), float(t))


def derivative(state: MeanFieldState, params: SystemParams, drives: DriveParams, t=None) -> MeanFieldState:
    """Right-hand side of the equations of motion at ``state``."""
    t = state.t if t is None else t
    c = complex(state.c)
    s = complex(state.sigma)
    dq = params.omega_m * state.p
    dp = -params.omega_m * state.q - params.gamma_m * state.p + params.g0 * abs(c) ** 2
    dc = (-(params.kappa + 1j * params.delta_c) * c + 1j * params.g0 * c * state.q
          - 1j * params.g_ac * s + drives.E_l + drives.E_p * np.exp(-1j * drives.delta * t))
    ds = -(params.gamma_a + 1j * params.delta_a) * s + 1j * params.g_ac * c * params.sigma_z_ss
    return MeanFieldState(dq, dp, complex(dc), complex(ds), t)


def steady_initial_state(params: SystemParams, E_l: float) -> MeanFieldState:
    """The pump-only fixed point, a convenient start that skips the pump transient."""
    ss = solve_steady_state(params, E_l)
    return MeanFieldState(q=ss.q_s, p=0.0, c=ss.c_s, sigma=ss.sigma_s)


def _complex_block(a):
    return np.array([[a.real, -a.imag], [a.imag, a.real]])


def jacobian(params: SystemParams, E_l: float) -> np.ndarray:
    """Real 6x6 Jacobian at the pump fixed point, variables ``(q, p, Re c, Im c, Re s, Im s)``."""
    ss = solve_steady_state(params, E_l)
    c = ss.c_s
    J = np.zeros((6, 6))
    J[0, 1] = params.omega_m
    J[1, 0] = -params.omega_m
    J[1, 1] = -params.gamma_m
    J[1, 2:4] = 2.0 * params.g0 * c.real, 2.0 * params.g0 * c.imag
    dc_dq = 1j * params.g0 * c
    J[2:4, 0] = dc_dq.real, dc_dq.imag
    J[2:4, 2:4] = _complex_block(-(params.kappa + 1j * params.delta_c) + 1j * params.g0 * ss.q_s)
    J[2:4, 4:6] = _complex_block(-1j * params.g_ac)
    J[4:6, 2:4] = _complex_block(1j * params.g_ac * params.sigma_z_ss)
    J[4:6, 4:6] = _complex_block(-(params.gamma_a + 1j * params.delta_a))
    return J


def slowest_decay_rate(params: SystemParams, E_l: float) -> float:
    """``-max Re(eigenvalue)`` of the Jacobian; positive means linearly stable."""
    return float(-np.linalg.eigvals(jacobian(params, E_l)).real.max())


# --- compiled kernel -------------------------------------------------------

@njit(cache=True)
def _rhs(t, y, pr, out):
    wm, gm, k, dc, g0, gac, ga, da, sz, el, ep, d = (
        pr[0], pr[1], pr[2], pr[3], pr[4], pr[5], pr[6], pr[7], pr[8], pr[9], pr[10], pr[11])
    q = y[0]
    cr = y[2]
    ci = y[3]
    sr = y[4]
    si = y[5]
    cosd = math.cos(d * t)
    sind = math.sin(d * t)
    out[0] = wm * y[1]
    out[1] = -wm * q - gm * y[1] + g0 * (cr * cr + ci * ci)
    out[2] = -k * cr + dc * ci - g0 * q * ci + gac * si + el + ep * cosd
    out[3] = -k * ci - dc * cr + g0 * q * cr - gac * sr - ep * sind
    out[4] = -ga * sr + da * si - gac * sz * ci
    out[5] = -ga * si - da * sr + gac * sz * cr


# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                                22 / 525, -1 / 40)


@njit(cache=True)
def _dopri_uniform(y0, pr, dt_out, nout, rtol, atol, bound):
    """Adaptive DP5(4) landing exactly on ``k * dt_out``.

    status: 0 ok, 1 diverged, 2 step underflow.
    """
    n = y0.size
    Y = np.empty((nout, n))
    y = y0.copy()
    Y[0] = y
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    k5 = np.empty(n)
    k6 = np.empty(n)
    k7 = np.empty(n)
    yt = np.empty(n)
    ynew = np.empty(n)
    t = 0.0
    h = dt_out / 4.0
    nacc = 0
    nrej = 0
    eps = 2.220446049250313e-16
    _rhs(t, y, pr, k1)
    for i in range(1, nout):
        t_target = i * dt_out
        while t < t_target:
            if t + h >= t_target:
                hs = t_target - t
                last = True
            else:
                hs = h
                last = False
            if hs < 16.0 * eps * max(t_target, dt_out):
                if last:
                    t = t_target
                    break
                return Y, nacc, nrej, 2, t
            for j in range(n):
                yt[j] = y[j] + hs * _A21 * k1[j]
            _rhs(t + _C2 * hs, yt, pr, k2)
            for j in range(n):
                yt[j] = y[j] + hs * (_A31 * k1[j] + _A32 * k2[j])
            _rhs(t + _C3 * hs, yt, pr, k3)
            for j in range(n):
                yt[j] = y[j] + hs * (_A41 * k1[j] + _A42 * k2[j] + _A43 * k3[j])
            _rhs(t + _C4 * hs, yt, pr, k4)
            for j in range(n):
                yt[j] = y[j] + hs * (_A51 * k1[j] + _A52 * k2[j] + _A53 * k3[j] + _A54 * k4[j])
            _rhs(t + _C5 * hs, yt, pr, k5)
            for j in range(n):
                yt[j] = y[j] + hs * (_A61 * k1[j] + _A62 * k2[j] + _A63 * k3[j]
                                     + _A64 * k4[j] + _A65 * k5[j])
            _rhs(t + hs, yt, pr, k6)
            for j in range(n):
                ynew[j] = y[j] + hs * (_B1 * k1[j] + _B3 * k3[j] + _B4 * k4[j]
                                       + _B5 * k5[j] + _B6 * k6[j])
            _rhs(t + hs, ynew, pr, k7)
            err = 0.0
            for j in range(n):
                e = hs * (_E1 * k1[j] + _E3 * k3[j] + _E4 * k4[j] + _E5 * k5[j]
                          + _E6 * k6[j] + _E7 * k7[j])
                sc = atol + rtol * max(abs(y[j]), abs(ynew[j]))
                err += (e / sc) ** 2
            err = math.sqrt(err / n)
            if err <= 1.0:
                t = t_target if last else t + hs
                for j in range(n):
                    y[j] = ynew[j]
                    k1[j] = k7[j]
                nacc += 1
                for j in range(n):
                    if not abs(y[j]) <= bound[j]:
                        Y[i:] = np.nan
                        return Y, nacc, nrej, 1, t
                fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
                if not last or fac < 1.0:
                    h = hs * fac
            else:
                nrej += 1
                h = hs * max(0.2, 0.9 * err ** -0.2)
        Y[i] = y
    return Y, nacc, nrej, 0, t


# --- public API -------------------------------------------------------------

@dataclass(frozen=True)
class IntegratorControls:
    """Knobs of :func:`integrate`.

    ``dt_out`` defaults to ``samples_per_period`` samples per beat period
    ``2 pi / |delta|`` (or per mechanical period when ``delta = 0``), which
    keeps the output grid aligned with demodulation windows.  ``initial`` is
    either ``"zero"``, ``"steady"`` (pump fixed point) or a
    :class:`MeanFieldState`.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    samples_per_period: int = 64
    dt_out: float | None = None
    initial: object = "zero"
    divergence_factor: float = DIVERGENCE_FACTOR


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    states: np.ndarray
    dt_out: float
    accepted_steps: int
    rejected_steps: int
    method_order: int
    params: SystemParams
    drives: DriveParams

    @property
    def q(self):
        return self.states[:, 0]

    @property
    def p(self):
        return self.states[:, 1]

    @property
    def c(self):
        return self.states[:, 2] + 1j * self.states[:, 3]

    @property
    def sigma(self):
        return self.states[:, 4] + 1j * self.states[:, 5]

    def state(self, k: int) -> MeanFieldState:
        return MeanFieldState.from_array(self.states[k], self.t[k])


def _divergence_bounds(params, drives, y0, factor):
    s_c = max((abs(drives.E_l) + abs(drives.E_p)) / params.kappa, abs(complex(y0[2], y0[3])), 1.0)
    s_q = max(abs(params.g0) * s_c * s_c / params.omega_m, abs(y0[0]), abs(y0[1]), 1.0)
    atom_rate = max(math.hypot(params.gamma_a, params.delta_a), params.kappa)
    s_s = max(abs(params.g_ac) * s_c / atom_rate, abs(complex(y0[4], y0[5])), 1.0)
    return factor * np.array([s_q, s_q, s_c, s_c, s_s, s_s])


def _parameter_vector(params, drives):
    return np.array([
        params.omega_m, params.gamma_m, params.kappa, params.delta_c, params.g0,
        params.g_ac, params.gamma_a, params.delta_a, params.sigma_z_ss,
        drives.E_l, drives.E_p, drives.delta,
    ], dtype=float)


def default_dt_out(params, drives, samples_per_period=64):
    w = abs(drives.delta) if drives.delta != 0 else params.omega_m
    return 2.0 * math.pi / w / samples_per_period


def integrate(params: SystemParams, drives: DriveParams, t_end: float,
              controls: IntegratorControls | None = None) -> Trajectory:
    """Integrate from ``t = 0`` to (at most) ``t_end`` on a uniform output grid."""
    controls = controls or IntegratorControls()
    if not t_end > 0:
        raise DomainError(f"t_end must be positive, got {t_end!r}")
    init = controls.initial
    if isinstance(init, str):
        if init == "zero":
            init = MeanFieldState()
        elif init == "steady":
            init = steady_initial_state(params, drives.E_l)
        else:
            raise DomainError(f"unknown initial condition {init!r}")
    y0 = init.to_array()
    dt = controls.dt_out or default_dt_out(params, drives, controls.samples_per_period)
    nout = int(math.floor(t_end / dt * (1 + 1e-12))) + 1
    if nout < 2:
        raise DomainError("t_end is shorter than one output interval")
    bound = _divergence_bounds(params, drives, y0, controls.divergence_factor)
    Y, nacc, nrej, status, t_stop = _dopri_uniform(
        y0, _parameter_vector(params, drives), dt, nout, controls.rtol, controls.atol, bound)
    if status == 1:
        raise InstabilityError(t_stop)
    if status == 2:
        raise StiffnessError(t_stop)
    return Trajectory(
        t=np.arange(nout) * dt,
        states=Y,
        dt_out=dt,
        accepted_steps=int(nacc),
        rejected_steps=int(nrej),
        method_order=METHOD_ORDER,
        params=params,
        drives=drives,
    )


@dataclass(frozen=True)
class DemodResult:
    h_s: complex
    h_minus: complex
    h_plus: complex
    residual: float


def demodulate_signal(t, h, delta, window: int) -> DemodResult:
    """Project the last ``window`` beat periods of ``h(t)`` onto ``1, exp(-/+ i delta t)``."""
    t = np.asarray(t, dtype=float)
    h = np.asarray(h)
    if window < 10:
        raise DomainError(f"demodulation window must cover at least 10 periods, got {window}")
    if delta == 0:
        raise DomainError("demodulation needs a nonzero beat frequency")
    dt = t[1] - t[0]
    samples = window * 2.0 * math.pi / abs(delta) / dt
    m = int(round(samples))
    if abs(samples - m) > 1e-6 * samples:
        raise AlignmentError(
            f"{window} beat periods span {samples:.9g} samples; not a whole number"
        )
    if m + 1 > t.size:
        raise ArityError(f"window needs {m + 1} samples, trajectory has {t.size}")
    tt = t[-(m + 1):]
    hh = h[-(m + 1):]
    w = np.ones(m + 1)
    w[0] = w[-1] = 0.5
    w /= m
    h_s = complex(np.sum(w * hh))
    h_minus = complex(np.sum(w * hh * np.exp(1j * delta * tt)))
    h_plus = complex(np.sum(w * hh * np.exp(-1j * delta * tt)))
    ac = float(np.sum(w * np.abs(hh - h_s) ** 2))
    tones = abs(h_minus) ** 2 + abs(h_plus) ** 2
    residual = max(0.0, 1.0 - tones / ac) if ac > 0 else 0.0
    return DemodResult(h_s, h_minus, h_plus, residual)


def demodulate(traj: Trajectory, delta: float, window: int) -> dict:
    """Tone amplitudes of ``c``, ``q`` and ``sigma`` over the trajectory tail."""
    return {
        name: demodulate_signal(traj.t, getattr(traj, name), delta, window)
        for name in ("c", "q", "sigma")
    }


def oracle_c_minus(params: SystemParams, E_l: float, E_p: float, delta: float, t_end: float,
                   window: int = 20, controls: IntegratorControls | None = None) -> DemodResult:
    """Demodulated cavity tones for one probe detuning, starting at the pump fixed point."""
    controls = controls or IntegratorControls(initial="steady")
    traj = integrate(params, DriveParams(E_l, E_p, delta), t_end, controls)
    return demodulate_signal(traj.t, traj.c, delta, window)


def write_trajectory_csv(traj: Trajectory, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "q", "p", "re_c", "im_c", "re_sigma", "im_sigma"])
        for t, row in zip(traj.t, traj.states):
            w.writerow([f"{t:.17g}"] + [f"{v:.17g}" for v in row])
    return path
