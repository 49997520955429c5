"""Extended sampling, reproducing-kernel, Parseval, Bernstein and
Nikolskii relations for non-bandlimited signals.

Remainders are computed two independent ways where possible: from
truncated time-domain sums with explicit truncation budgets, and exactly
on the spectral side (aliasing bands for the sampling series, shifted
inner products via the Poisson summation identity for sample sums).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import UnsupportedTimeEval
from . import numerics
from .numerics import FULL, interval, adaptive_quadrature, oscillatory_inversion
from .distances import dist, dist_derivative
from .spectrum import RectAtom, Spectrum

__all__ = [
    "RemainderReport",
    "wks_series",
    "wks_remainder_spectral",
    "wks_bound",
    "wks_extremal_ratio",
    "rkf_approx",
    "rkf_remainder",
    "rkf_bound",
    "rkf_extremal_ratio",
    "sample_sum_sq",
    "parseval_remainder",
    "parseval_bound",
    "bernstein_check",
    "nikolskii_sum",
    "nikolskii_check",
    "wks_extremal",
    "rkf_extremal",
]


@dataclass(frozen=True)
class RemainderReport:
    value: float
    bound: float
    budget: float

    @property
    def ok(self):
        return self.value <= self.bound + self.budget + 1e-12


# ---------------------------------------------------------------------------
# cardinal sampling series
# ---------------------------------------------------------------------------


def _require_atoms(S):
    if S.tails:
        raise UnsupportedTimeEval("time-domain sums need a purely atomic spectrum")


def wks_series(S, h, t, K=None):
    """Truncated cardinal series sum_{|k|<=K} f(hk) sinc(t/h - k).

    Returns (values, budget); budget bounds the dropped |k| > K terms via
    the closed-form decay envelope of f and of sinc.
    """
    _require_atoms(S)
    if not h > 0:
        raise ValueError("step must be positive")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    A, B = S.decay_coeffs()
    tau_max = max((abs(a.tau) for a in S.atoms), default=0.0)
    t_max = float(np.max(np.abs(t)))
    K_min = int(np.ceil((2.0 * (t_max + tau_max) + 1.0) / h)) + 2
    if K is None:
        K = max(K_min, 20000)
    K = max(int(K), K_min)
    k = np.arange(-K, K + 1)
    samples = S.time_eval(h * k)
    vals = np.einsum("k,tk->t", samples, np.sinc(t[:, None] / h - k[None, :]))
    # |f(hk)| <= A/(hk) + B/(hk)^2 and |sinc(t/h - k)| <= 2/(pi k) for
    # k >= K >= 2(t_max + tau_max)/h, summed over both signs of k
    budget = 2.0 * ((2.0 * A / (np.pi * h)) / K + (B / (np.pi * h**2)) / K**2)
    return vals, float(budget)


def wks_remainder_spectral(S, h, t):
    """Exact sampling remainder f - cardinal series, via aliasing bands:
    (1/sqrt(2pi)) sum_{k != 0} (1 - e^{-i 2 pi k t / h})
        int_{(2k-1)pi/h}^{(2k+1)pi/h} fhat(v) e^{ivt} dv."""
    _require_atoms(S)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    R = S.support_radius()
    k_max = int(np.ceil((R * h) / (2.0 * np.pi) + 1.0))
    out = np.zeros(t.shape, dtype=complex)
    for k in range(-k_max, k_max + 1):
        if k == 0:
            continue
        lo, hi = (2 * k - 1) * np.pi / h, (2 * k + 1) * np.pi / h
        if hi <= -R or lo >= R:
            continue
        band = np.array([oscillatory_inversion(S, ti, interval(lo, hi)) for ti in t])
        out += (1.0 - np.exp(-2j * np.pi * k * t / h)) * band
    return out


def wks_bound(S, h):
    """sqrt(2/pi) dist_1(f, pi/h)."""
    return float(np.sqrt(2.0 / np.pi) * dist(S, 1.0, np.pi / h))


def wks_extremal(h):
    """sinc(2t/h - 1): vanishes at all sample points hk, half of its band
    lies beyond pi/h, and it attains the sampling error bound."""
    return Spectrum(atoms=(RectAtom(amp=h / 2.0, w=2.0 * np.pi / h, c=0.0, tau=h / 2.0),))


def wks_extremal_ratio(h):
    """max_t |remainder| / bound for the extremal; equals 1 up to
    quadrature error."""
    S = wks_extremal(h)
    t = np.array([h / 2.0])
    rem = np.abs(wks_remainder_spectral(S, h, t))
    return float(np.max(rem) / wks_bound(S, h))


# ---------------------------------------------------------------------------
# reproducing kernel formula
# ---------------------------------------------------------------------------


def rkf_approx(S, h, t):
    """(1/h) int f(u) sinc((t-u)/h) du = inversion of fhat over |v| <= pi/h."""
    if not h > 0:
        raise ValueError("step must be positive")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    cut = min(np.pi / h, S.support_radius())
    return np.array([oscillatory_inversion(S, ti, interval(-cut, cut)) for ti in t])


def rkf_remainder(S, h, t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return S.time_eval(t) - rkf_approx(S, h, t)


def rkf_bound(S, h):
    """(1/sqrt(2pi)) dist_1(f, pi/h)."""
    return float(dist(S, 1.0, np.pi / h) / np.sqrt(2.0 * np.pi))


def rkf_extremal(h):
    """sinc(2t/h): attains the reproducing-kernel error bound at t = 0."""
    return Spectrum(atoms=(RectAtom(amp=h / 2.0, w=2.0 * np.pi / h, c=0.0, tau=0.0),))


def rkf_extremal_ratio(h):
    S = rkf_extremal(h)
    rem = np.abs(rkf_remainder(S, h, np.array([0.0])))
    return float(np.max(rem) / rkf_bound(S, h))


# ---------------------------------------------------------------------------
# Poisson-summation sample sums and the Parseval remainder
# ---------------------------------------------------------------------------


def _cross_inner(S1, S2, omega):
    """int fhat1(v) conj(fhat2(v - omega)) dv, exact pairwise quadrature."""
    total = 0.0 + 0.0j
    tau_scale = max(
        [abs(a.tau) for a in S1.atoms] + [abs(a.tau) for a in S2.atoms] + [0.0]
    )
    cap = np.pi / (1.0 + tau_scale)
    for a1 in S1.atoms:
        l1, r1 = _atom_span(a1)
        for a2 in S2.atoms:
            l2, r2 = _atom_span(a2)
            lo, hi = max(l1, l2 + omega), min(r1, r2 + omega)
            if hi <= lo:
                continue
            # split at the envelope kinks of both atoms
            cuts = sorted(
                {lo, hi}
                | {x for x in (a1.c, a2.c + omega) if lo < x < hi}
            )
            for a, b in zip(cuts[:-1], cuts[1:]):
                edges = np.linspace(a, b, max(2, int(np.ceil((b - a) / cap)) + 1))
                for u, w in zip(edges[:-1], edges[1:]):
                    total += adaptive_quadrature(
                        lambda v: _atom_density(a1, v) * np.conj(_atom_density(a2, v - omega)),
                        u,
                        w,
                    )
    return total


def _atom_span(a):
    if isinstance(a, RectAtom):
        return a.c - a.w, a.c + a.w
    return a.c - 2.0 * np.pi * a.b, a.c + 2.0 * np.pi * a.b


def _atom_density(a, v):
    S = Spectrum(atoms=(a,))
    return S.density(np.atleast_1d(np.asarray(v, dtype=float)))


def sample_sum_sq(S1, S2, h):
    """h sum_k f(hk) conj(g(hk)), exactly, through Poisson summation:
    equals sum_m int fhat(v) conj(ghat(v - 2 pi m / h)) dv."""
    _require_atoms(S1)
    _require_atoms(S2)
    if not h > 0:
        raise ValueError("step must be positive")
    R = S1.support_radius() + S2.support_radius()
    m_max = int(np.ceil(R * h / (2.0 * np.pi))) + 1
    total = 0.0 + 0.0j
    for m in range(-m_max, m_max + 1):
        total += _cross_inner(S1, S2, 2.0 * np.pi * m / h)
    return total


def parseval_remainder(S_f, S_g, h):
    """R_h = int f conj(g) - h sum_k f(hk) conj(g(hk)), both sides exact."""
    return complex(numerics.inner_product(S_f, S_g) - sample_sum_sq(S_f, S_g, h))


def parseval_bound(S_f, S_g, h, C=1.0):
    """C h { dist_2(f', pi/h) + dist_2(g', pi/h)
            + h dist_2(f', pi/h) dist_2(g', pi/h) };  C is not specified
    by the estimate and defaults to 1 for rate studies."""
    df = dist_derivative(S_f, 2.0, np.pi / h, 1)
    dg = dist_derivative(S_g, 2.0, np.pi / h, 1)
    return float(C * h * (df + dg + h * df * dg))


# ---------------------------------------------------------------------------
# Bernstein and Nikolskii
# ---------------------------------------------------------------------------


def bernstein_check(S, s, sigma):
    """||f^{(s)}|| <= sigma^s ||f|| + dist_2(f^{(s)}, sigma), with the exact
    low/high band split of the left side."""
    if s < 1 or int(s) != s:
        raise ValueError("derivative order must be a positive integer")
    s = int(s)
    lhs_sq = numerics.integrate_abs_q(S, 2.0, 2.0 * s, FULL)
    low_sq = numerics.integrate_abs_q(S, 2.0, 2.0 * s, interval(-sigma, sigma))
    tail = dist_derivative(S, 2.0, sigma, s)
    l2 = numerics.l2_norm(S)
    lhs = float(np.sqrt(lhs_sq))
    rhs = sigma**s * l2 + tail
    return {
        "lhs": lhs,
        "rhs": rhs,
        "l2": l2,
        "tail_dist": tail,
        "low_band": float(np.sqrt(low_sq)),
        "split_residual": float(abs(lhs_sq - (low_sq + tail**2))),
        "ok": bool(lhs <= rhs + 1e-12),
    }


def nikolskii_sum(S, h):
    """{h sum_k |f(hk)|^2}^{1/2}, exact via Poisson summation."""
    val = sample_sum_sq(S, S, h)
    return float(np.sqrt(max(val.real, 0.0)))


def nikolskii_check(S, h, sigma):
    """{h sum |f(hk)|^2}^{1/2} <= (1 + h sigma) ||f|| + h dist_2(f', sigma)."""
    lhs = nikolskii_sum(S, h)
    l2 = numerics.l2_norm(S)
    d1 = dist_derivative(S, 2.0, sigma, 1)
    rhs = (1.0 + h * sigma) * l2 + h * d1
    return {"lhs": lhs, "rhs": rhs, "l2": l2, "dist_deriv": d1, "ok": bool(lhs <= rhs + 1e-12)}
