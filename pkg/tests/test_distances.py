"""Distance functionals against closed forms and frozen quad oracles."""

import numpy as np
import pytest

from bandlim.distances import (
    derivative_free_bound,
    derivative_free_constant_ratio,
    dist,
    dist_derivative,
    fractional_tail,
)
from bandlim.spectrum import PowerTail, Spectrum, TriangleAtom, sinc_spectrum

# scipy.integrate.quad oracle: int_{|v|>=1} |fhat| for Triangle(1.2, 0.4, 0.7, 0.3)
ORACLE_DIST1_TRI = 1.3238416287137473


def test_sinc_dist_closed_form():
    # rect density of height 1/sqrt(2 pi) on (-pi, pi):
    # dist_2(f, sigma)^2 = 2 (pi - sigma) / (2 pi) for sigma < pi, else 0
    S = sinc_spectrum(1.0)
    for sigma in (0.5, 1.5, 3.0):
        assert dist(S, 2.0, sigma) == pytest.approx(np.sqrt((np.pi - sigma) / np.pi), rel=1e-10)
    assert dist(S, 2.0, np.pi) == pytest.approx(0.0, abs=1e-9)
    assert dist(S, 2.0, 4.0) == 0.0


def test_triangle_dist1_frozen_oracle():
    S = Spectrum([TriangleAtom(1.2, 0.4, 0.7, 0.3)])
    assert dist(S, 1.0, 1.0) == pytest.approx(ORACLE_DIST1_TRI, rel=1e-10)


def test_power_tail_closed_forms():
    g = 1.5
    S = Spectrum(tails=(PowerTail(g),))
    for sigma in (1.0, 4.0, 64.0):
        # 2 int_sigma^inf v^{-2g} dv and 2 int_sigma^inf v^{-g} dv
        assert dist(S, 2.0, sigma) == pytest.approx(
            np.sqrt(2.0 * sigma ** (1.0 - 2.0 * g) / (2.0 * g - 1.0)), rel=1e-9
        )
        assert dist(S, 1.0, sigma) == pytest.approx(
            2.0 * sigma ** (1.0 - g) / (g - 1.0), rel=1e-9
        )


def test_dist_derivative_and_fractional_tail_closed_forms():
    g = 2.5
    S = Spectrum(tails=(PowerTail(g),))
    sigma = 8.0
    # weight v^2: 2 int_sigma^inf v^{2-2g} dv
    assert dist_derivative(S, 2.0, sigma, 1) == pytest.approx(
        np.sqrt(2.0 * sigma ** (3.0 - 2.0 * g) / (2.0 * g - 3.0)), rel=1e-9
    )
    beta = 0.75
    assert fractional_tail(S, sigma, beta) == pytest.approx(
        2.0 * sigma ** (1.0 + 2.0 * beta - 2.0 * g) / (2.0 * g - 1.0 - 2.0 * beta), rel=1e-8
    )
    assert dist_derivative(S, 2.0, sigma, 0) == dist(S, 2.0, sigma)


def test_dist_monotone_in_sigma():
    S = Spectrum([TriangleAtom(1.0, 0.3, 1.2, 0.5)], tails=(PowerTail(1.5),))
    sig = np.array([0.5, 1.0, 2.0, 4.0, 8.0])
    vals = [dist(S, 2.0, s) for s in sig]
    assert all(a >= b - 1e-12 for a, b in zip(vals[:-1], vals[1:]))


def test_derivative_free_bound_runs():
    S = Spectrum(tails=(PowerTail(1.2),))
    val = derivative_free_bound(S, 1, 2.0, 4.0)
    assert np.isfinite(val) and val > 0.0
    ratio = derivative_free_constant_ratio(S, 1, 2.0, [2.0, 8.0])
    assert np.isfinite(ratio) and ratio > 0.0


def test_invalid_arguments():
    S = sinc_spectrum()
    with pytest.raises(ValueError):
        dist(S, 2.0, -1.0)
    with pytest.raises(ValueError):
        dist_derivative(S, 2.0, 1.0, -1)
    with pytest.raises(ValueError):
        fractional_tail(S, 1.0, -0.5)
