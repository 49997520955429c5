"""Distance functionals from the Bernstein spaces of bandlimited functions.

dist_q(f, sigma) is computed from the spectral representation as the L^q
norm of fhat outside [-sigma, sigma]; the infimum characterization is
never searched.  Weighted variants cover distances of derivatives and the
fractional tail integrals that characterize Lipschitz membership.
"""

import numpy as np

from .errors import NonConvergence
from . import numerics
from .numerics import tail_region, FULL

__all__ = [
    "dist",
    "dist_derivative",
    "fractional_tail",
    "derivative_free_bound",
    "derivative_free_constant_ratio",
]


def dist(S, q, sigma):
    """dist_q(f, B^2_sigma) = (int_{|v|>=sigma} |fhat|^q dv)^{1/q}."""
    if not sigma >= 0:
        raise ValueError("sigma must be nonnegative")
    key = ("dist", q, sigma)
    return S.cached(key, lambda: numerics.integrate_abs_q(S, q, 0.0, tail_region(sigma)) ** (1.0 / q))


def dist_derivative(S, q, sigma, k):
    """dist_q(f^{(k)}, B^2_sigma) = (int_{|v|>=sigma} |v^k fhat|^q dv)^{1/q}."""
    if k < 0 or int(k) != k:
        raise ValueError("derivative order must be a nonnegative integer")
    if k == 0:
        return dist(S, q, sigma)
    key = ("dist_derivative", q, sigma, k)
    return S.cached(
        key, lambda: numerics.integrate_abs_q(S, q, float(k) * q, tail_region(sigma)) ** (1.0 / q)
    )


def fractional_tail(S, sigma, beta):
    """int_{|v|>=sigma} |v|^{2 beta} |fhat|^2 dv."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    key = ("fractional_tail", sigma, beta)
    return S.cached(key, lambda: numerics.integrate_abs_q(S, 2.0, 2.0 * beta, tail_region(sigma)))


def derivative_free_bound(S, r, q, sigma, delta_grid=None):
    """The integral factor {int_sigma^inf v^{-q/2} omega_r(f, 1/v)^q dv}^{1/q}.

    omega_r is sampled on delta_grid and interpolated log-linearly in
    between; below the smallest sampled delta it is extrapolated with the
    local power law fitted to the last decade of samples.  The multiplying
    constant of the estimate is unknown and deliberately not applied.
    """
    from .smoothness import modulus_profile

    if delta_grid is None:
        delta_grid = np.geomspace(2.0**-14, 1.0, 57)
    delta_grid = np.sort(np.asarray(delta_grid, dtype=float))
    omega = modulus_profile(S, r, delta_grid)
    pos = omega > 0.0
    if not np.any(pos):
        return 0.0
    ld, lo = np.log(delta_grid[pos]), np.log(omega[pos])

    def omega_interp(delta):
        return np.exp(np.interp(np.log(delta), ld, lo))

    d_min = float(delta_grid[pos][0])
    # local decay exponent from the smallest sampled decade
    mask = delta_grid[pos] <= d_min * 8.0
    if mask.sum() >= 2:
        a_loc = np.polyfit(ld[mask], lo[mask], 1)[0]
    else:
        a_loc = 0.0
    v_hi = 1.0 / d_min
    total = 0.0
    if v_hi > sigma:
        edges = np.geomspace(sigma, v_hi, 257)
        clo, chi = edges[:-1], edges[1:]
        nodes, wts = np.polynomial.legendre.leggauss(8)
        mid, half = 0.5 * (clo + chi), 0.5 * (chi - clo)
        x = mid[:, None] + half[:, None] * nodes[None, :]
        vals = x ** (-q / 2.0) * omega_interp(1.0 / x) ** q
        total += float(np.einsum("sk,k,s->", vals, wts, half))
    # extrapolated tail: omega(delta) ~ omega(d_min) (delta/d_min)^a_loc
    p = q * a_loc + q / 2.0
    if p <= 1.0:
        raise NonConvergence("tail of the derivative-free integral does not converge")
    v0 = max(v_hi, sigma)
    total += omega_interp(d_min) ** q * (v0 * d_min) ** (-q * a_loc) * v0 ** (1.0 - p) / (p - 1.0)
    return total ** (1.0 / q)


def derivative_free_constant_ratio(S, r, q, sigmas):
    """Empirical max over sigmas of dist / derivative-free integral.

    Reported as an observation on the unknown constant of the estimate;
    never asserted against a reference value.
    """
    ratios = []
    for s in sigmas:
        bound = derivative_free_bound(S, r, q, s)
        if bound > 0.0:
            ratios.append(dist(S, q, s) / bound)
    return max(ratios) if ratios else float("nan")
