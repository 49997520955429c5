"""Witness functions separating the smoothness and modulation spaces.

Each family is a lacunary series sum_n a_n sinc^2(b_n t) e^{i c_n t} of
triangle atoms with pairwise disjoint spectral supports (or a pure power
tail).  Builders return truncated spectra carrying closed-form bounds on
the L^2 and spectral-L^1 truncation error, so every computed quantity can
be checked against its infinite-series target with an explicit budget.
"""

import math

import numpy as np
from scipy.special import polygamma

from .errors import InvalidFamilyParams
from .spectrum import PowerTail, Spectrum, TruncationInfo

__all__ = [
    "FAMILIES",
    "build",
    "coefficient",
    "atom_band_sq",
    "coefficient_tail_sum",
    "dropped_scaled_band_sum",
    "membership_report",
    "DYADIC_N_CAP",
]

# centers 2^n overflow the exactly-representable integer range long before
# this, but n <= 40 keeps every band edge an exact double
DYADIC_N_CAP = 40

_B_QUARTER = 1.0 / (4.0 * np.pi)
# ||triangle-atom spectrum||_2^2 = amp^2 * 2/(3b); for b = 1/(4pi) this is
# amp^2 * 8 pi / 3
_UNIT_MASS_QUARTER = 8.0 * np.pi / 3.0


def _coeff_f_gamma_delta(n, gamma, delta):
    return 1.0 / (n**gamma * np.log(n) ** delta)


_FAMILY_DEFS = {
    # name: (first n, coefficient, center, bandwidth, dyadic growth?)
    "f_gamma_delta": {
        "n0": 2,
        "params": ("gamma", "delta"),
        "coeff": _coeff_f_gamma_delta,
        "center": lambda n: n + 0.5,
        "b": lambda n: 1.0 / (2.0 * np.pi * n),
        "dyadic": False,
    },
    "dyadic_log": {
        "n0": 1,
        "params": (),
        "coeff": lambda n: 1.0 / n**2,
        "center": lambda n: 2.0**n - 0.5,
        "b": lambda n: _B_QUARTER,
        "dyadic": True,
    },
    "dyadic_sqrt": {
        "n0": 1,
        "params": (),
        "coeff": lambda n: 2.0 ** (-n / 2.0),
        "center": lambda n: 2.0**n - 0.5,
        "b": lambda n: _B_QUARTER,
        "dyadic": True,
    },
    "quadratic_ln34": {
        "n0": 2,
        "params": (),
        "coeff": lambda n: 1.0 / (n**1.5 * np.log(n) ** 0.75),
        "center": lambda n: float(n) ** 2 - 0.5,
        "b": lambda n: _B_QUARTER,
        "dyadic": False,
    },
    "quadratic_plain": {
        "n0": 2,
        "params": (),
        "coeff": lambda n: n**-1.5,
        "center": lambda n: float(n) ** 2 - 0.5,
        "b": lambda n: _B_QUARTER,
        "dyadic": False,
    },
    "quadratic_ln1": {
        "n0": 2,
        "params": (),
        "coeff": lambda n: 1.0 / (n**1.5 * np.log(n)),
        "center": lambda n: float(n) ** 2 - 0.5,
        "b": lambda n: _B_QUARTER,
        "dyadic": False,
    },
    "power_tail": {
        "n0": None,
        "params": ("gamma",),
    },
}

FAMILIES = tuple(_FAMILY_DEFS)


def coefficient(name, n, **params):
    d = _family(name)
    if d["n0"] is None:
        raise InvalidFamilyParams("%s has no series coefficients" % name)
    return float(d["coeff"](n, **params) if d["params"] else d["coeff"](n))


def _family(name):
    if name not in _FAMILY_DEFS:
        raise InvalidFamilyParams("unknown family %r" % name)
    return _FAMILY_DEFS[name]


def _check_params(name, d, params):
    missing = [p for p in d["params"] if p not in params]
    extra = [p for p in params if p not in d["params"]]
    if missing or extra:
        raise InvalidFamilyParams(
            "%s takes parameters %s" % (name, ", ".join(d["params"]) or "none")
        )
    if name == "f_gamma_delta":
        if not params["gamma"] > 1.0 or params["delta"] < 0.0:
            raise InvalidFamilyParams("need gamma > 1 and delta >= 0")
    if name == "power_tail" and not params["gamma"] > 0.5:
        raise InvalidFamilyParams("need gamma > 1/2")


def _truncation_bounds(name, N, params):
    """Closed-form bounds on ||f - f_N||_2^2, ||fhat - fhat_N||_1 and the
    unit-band-sum mass of the dropped terms n > N (integral comparison for
    monotone summands; the dyadic tails are exact)."""
    root = math.sqrt(_UNIT_MASS_QUARTER)
    if name == "f_gamma_delta":
        g, dl = params["gamma"], params["delta"]
        # sum_{n>N} (4 pi n / 3) a_n^2 <= (4pi/3) ln^{-2d}N int_N^inf u^{1-2g}
        l2_sq = (4.0 * np.pi / 3.0) * N ** (2.0 - 2.0 * g) / ((2.0 * g - 2.0) * np.log(N) ** (2 * dl))
        l1 = np.sqrt(2.0 * np.pi) * N ** (1.0 - g) / ((g - 1.0) * np.log(N) ** dl)
        # dropped unit-band terms a_n sqrt(4 pi n / 3); convergent iff g > 3/2
        if g > 1.5:
            m21 = np.sqrt(4.0 * np.pi / 3.0) * N ** (1.5 - g) / ((g - 1.5) * np.log(N) ** dl)
        else:
            m21 = math.inf
        return l2_sq, float(l1), float(m21)
    if name == "dyadic_log":
        l2_sq = _UNIT_MASS_QUARTER / (3.0 * N**3)
        l1 = np.sqrt(2.0 * np.pi) / N
        m21 = root * coefficient_tail_sum(name, N)
    elif name == "dyadic_sqrt":
        l2_sq = _UNIT_MASS_QUARTER * 2.0 ** (-N)
        l1 = np.sqrt(2.0 * np.pi) * 2.0 ** (-N / 2.0) / (1.0 - 2.0 ** (-0.5))
        m21 = root * coefficient_tail_sum(name, N)
    elif name == "quadratic_ln34":
        l2_sq = _UNIT_MASS_QUARTER / (2.0 * N**2 * np.log(N) ** 1.5)
        l1 = np.sqrt(2.0 * np.pi) * 2.0 / (np.sqrt(N) * np.log(N) ** 0.75)
        m21 = root * 2.0 / (np.sqrt(N) * np.log(N) ** 0.75)
    elif name == "quadratic_plain":
        l2_sq = _UNIT_MASS_QUARTER / (2.0 * N**2)
        l1 = np.sqrt(2.0 * np.pi) * 2.0 / np.sqrt(N)
        m21 = root * 2.0 / np.sqrt(N)
    elif name == "quadratic_ln1":
        l2_sq = _UNIT_MASS_QUARTER / (2.0 * N**2 * np.log(N) ** 2)
        l1 = np.sqrt(2.0 * np.pi) * 2.0 / (np.sqrt(N) * np.log(N))
        m21 = root * 2.0 / (np.sqrt(N) * np.log(N))
    else:
        raise InvalidFamilyParams(name)
    return float(l2_sq), float(l1), float(m21)


def build(name, N=None, **params):
    """Truncated spectrum of the named family with N series terms kept.

    The returned spectrum carries a TruncationInfo with closed-form bounds
    ``l2`` on ||f - f_N||_2 and ``l1_spectral`` on the dropped spectral
    L^1 mass.  Dyadic-center families are capped at N <= 40 to keep all
    band edges exact doubles.
    """
    d = _family(name)
    _check_params(name, d, params)
    if name == "power_tail":
        return Spectrum(tails=(PowerTail(params["gamma"]),))
    if N is None:
        N = DYADIC_N_CAP if d["dyadic"] else 400
    N = int(N)
    if N < d["n0"]:
        raise InvalidFamilyParams("need at least one term")
    if d["dyadic"] and N > DYADIC_N_CAP:
        raise InvalidFamilyParams("dyadic centers are exact only up to N=%d" % DYADIC_N_CAP)
    ns = np.arange(d["n0"], N + 1)
    amp = np.array([coefficient(name, int(n), **params) for n in ns])
    c = np.array([d["center"](int(n)) for n in ns])
    b = np.array([d["b"](int(n)) for n in ns])
    l2_sq, l1, m21 = _truncation_bounds(name, N, params)
    trunc = TruncationInfo(
        family=name,
        params=dict(params),
        n_terms=len(ns),
        bounds={"l2": float(np.sqrt(l2_sq)), "l2_sq": l2_sq, "l1_spectral": l1, "m21": m21},
    )
    return Spectrum.from_triangle_arrays(amp, b, c, trunc=trunc)


def coefficient_tail_sum(name, N):
    """Exact sum_{n > N} a_n for the families with closed-form tails."""
    if name == "dyadic_log":
        # sum_{n>N} n^-2 = psi'(N+1)
        return float(polygamma(1, N + 1))
    if name == "dyadic_sqrt":
        return 2.0 ** (-(N + 1) / 2.0) / (1.0 - 2.0**-0.5)
    raise InvalidFamilyParams("no closed-form coefficient tail for %r" % name)


def dropped_scaled_band_sum(name, N, h):
    """Exact contribution of the dropped terms n > N to the non-central
    scaled band sum at step h = 2^{-k}, 0 <= k <= N, dyadic families only.

    Each dropped spectral interval [2^n - 1, 2^n] lies inside a single
    non-central width-1/h band (its right edge is a multiple of 2^k and its
    width 1 is below the band width), so the term contributes exactly
    a_n * sqrt(8 pi / (3 h)), and the infinite series over n > N has a
    closed form.
    """
    d = _family(name)
    if not d.get("dyadic"):
        raise InvalidFamilyParams("dropped band sums are exact only for dyadic centers")
    k = round(math.log2(1.0 / h))
    if not (0 <= k <= N and 2.0**-k == h):
        raise InvalidFamilyParams("need h = 2^-k with 0 <= k <= N")
    return math.sqrt(_UNIT_MASS_QUARTER / h) * coefficient_tail_sum(name, N)


def atom_band_sq(name, n, **params):
    """Exact spectral mass a_n^2 ||phihat_n||_2^2 of the n-th term."""
    d = _family(name)
    _check_params(name, d, params)
    a = coefficient(name, n, **params)
    return a**2 * 2.0 / (3.0 * d["b"](n))


_MEMBERSHIP = {
    "f_gamma_delta": {
        "description": "gamma=alpha+1, delta=1/2: in lip_r(alpha) but not in "
        "the order-alpha Riesz space; delta=0: in Lip_r(alpha) \\ lip_r(alpha); "
        "gamma=3/2, delta=1: in F2 and S2_h for all h, but not in M^{2,1}",
        "in": ("F2", "L2", "C"),
        "not_in": (),
    },
    "dyadic_log": {
        "description": "in M^{2,1} but not in the sup-readapted space; "
        "dist_2 decays only logarithmically, so in no Lip_r(alpha)",
        "in": ("M21", "L2", "C"),
        "not_in": ("Mn", "Lip"),
    },
    "dyadic_sqrt": {
        "description": "in the readapted space but not in the order-1/2 "
        "Riesz space; its modulus is not o(delta^{1/2})",
        "in": ("Mn", "M21", "L2", "C"),
        "not_in": ("Riesz(1/2)",),
    },
    "quadratic_ln34": {
        "description": "in the order-1/2 Riesz space and F2 but not in the "
        "readapted space",
        "in": ("Riesz(1/2)", "F2", "L2", "C"),
        "not_in": ("Mn",),
    },
    "quadratic_plain": {
        "description": "in Lip_r(1/2) and F2 but in neither the order-1/2 "
        "Riesz space nor the readapted space",
        "in": ("Lip_r(1/2)", "F2", "L2", "C"),
        "not_in": ("Riesz(1/2)", "Mn"),
    },
    "quadratic_ln1": {
        "description": "in the readapted space but not in its uniform "
        "subclass: the outer band sums approach a positive level",
        "in": ("Mn", "M21", "L2", "C"),
        "not_in": ("M21*",),
    },
    "power_tail": {
        "description": "spectral power law |v|^{-gamma}: in the order-beta "
        "Riesz space for beta < gamma - 1/2 and in no Lip_r(alpha) with "
        "alpha > gamma - 1/2",
        "in": ("L2",),
        "not_in": (),
    },
}


def membership_report(name):
    """Claimed space memberships of the (untruncated) family, as data."""
    _family(name)
    return dict(_MEMBERSHIP[name])
