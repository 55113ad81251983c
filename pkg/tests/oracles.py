"""Independent reference implementations used only by the tests."""
import numpy as np


def steady_residual_function(params, E_l):
    """``f(n) = n |D(n)|**2 - E_l**2`` written directly from D, not from the cubic coefficients."""
    atom = 0j
    if params.g_ac != 0 and params.sigma_z_ss != 0:
        atom = params.g_ac**2 * params.sigma_z_ss / complex(params.gamma_a, params.delta_a)

    def f(n):
        D = params.kappa + 1j * (params.delta_c - params.g0**2 * n / params.omega_m) - atom
        return n * np.abs(D) ** 2 - E_l**2

    return f


def bracket_lowest_root(params, E_l, points=1_000_000, rtol=1e-12):
    """Lowest nonnegative root of ``f`` by a sign-change scan plus bisection."""
    f = steady_residual_function(params, E_l)
    atom_re = 0.0
    if params.g_ac != 0:
        atom_re = (params.g_ac**2 * params.sigma_z_ss * params.gamma_a
                   / (params.gamma_a**2 + params.delta_a**2))
    k_eff = max(abs(params.kappa - atom_re), 1e-300)
    upper = (E_l / min(params.kappa, k_eff)) ** 2
    while True:
        grid = np.linspace(0.0, upper, points)
        vals = f(grid)
        idx = np.flatnonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))
        if idx.size:
            break
        upper *= 4.0
    lo, hi = grid[idx[0]], grid[idx[0] + 1]
    flo = f(lo)
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def random_params(rng):
    """One randomized physically sensible parameter draw, angular units."""
    from hybridom.params import TWO_PI, SystemParams

    w = TWO_PI * rng.uniform(1e6, 20e6)
    return SystemParams(
        omega_m=w,
        gamma_m=TWO_PI * rng.uniform(10.0, 1e4),
        kappa=w * rng.uniform(0.01, 1.0),
        delta_c=w * rng.uniform(-2.0, 2.0),
        g0=TWO_PI * rng.uniform(0.0, 2e6),
        g_ac=TWO_PI * rng.uniform(0.0, 8e6),
        gamma_a=TWO_PI * rng.uniform(5e4, 1e6),
        delta_a=w * rng.uniform(-2.0, 2.0),
        sigma_z_ss=rng.choice([-1.0, 1.0]),
    )
