"""Integration machinery against closed forms and frozen quad oracles.

Frozen constants were produced by an offline scipy.integrate.quad script
working directly on the closed-form densities (independent of the segment
machinery under test).
"""

import numpy as np
import pytest

from bandlim import numerics
from bandlim.errors import DivergentIntegral
from bandlim.numerics import (
    FULL,
    adaptive_quadrature,
    band_sq,
    cumulative_sq,
    integrate_abs_q,
    inner_product,
    interval,
    l1_spectral_norm,
    l2_norm,
    normalize_region,
    tail_region,
    weighted_l2_sq,
)
from bandlim.spectrum import PowerTail, RectAtom, Spectrum, TriangleAtom

# overlapping mix: triangle support (-1.813.., 3.213..), rect (-1.6, 0.6)
MIX = Spectrum([TriangleAtom(1.2, 0.4, 0.7, 0.3), RectAtom(0.8, 1.1, -0.5, -0.2)])

# scipy.integrate.quad oracle on |density|^1.5 * |v|^0.5 and |density|^2
ORACLE_MIX_Q15_W05 = 2.960568003260516
ORACLE_MIX_L2_SQ = 3.4651112962417905
# quad oracle: int fhat1 conj(fhat2) for triangle+tail(1.3) x rect+tail(1.7)
ORACLE_INNER_MIXED = 2.1533216476078625 - 0.12511673598627943j
# quad oracle: int_{-inf}^{2.5} (|v|^-0.8 + |v|^-1.4)^2 1_{|v|>=1} dv
ORACLE_CUM_2TAIL_2P5 = 6.1541757525511525


def test_overlapping_mix_against_quad_oracle():
    assert integrate_abs_q(MIX, 1.5, 0.5, FULL) == pytest.approx(ORACLE_MIX_Q15_W05, rel=1e-8)
    assert integrate_abs_q(MIX, 2.0, 0.0, FULL) == pytest.approx(ORACLE_MIX_L2_SQ, rel=1e-9)
    assert l2_norm(MIX) == pytest.approx(np.sqrt(ORACLE_MIX_L2_SQ), rel=1e-9)


def test_triangle_norm_closed_forms():
    # area of the spectral triangle: peak * halfwidth = amp * sqrt(2 pi);
    # squared L2: peak^2 * (2/3) * halfwidth = amp^2 * 2/(3b)
    for amp, b in ((1.0, 0.5), (2.3, 0.07), (0.4, 3.0)):
        S = Spectrum([TriangleAtom(amp, b, c=1.3, tau=0.9)])
        assert l1_spectral_norm(S) == pytest.approx(amp * np.sqrt(2.0 * np.pi), rel=1e-12)
        assert l2_norm(S) == pytest.approx(amp * np.sqrt(2.0 / (3.0 * b)), rel=1e-12)


def test_rect_norm_closed_forms():
    for amp, w in ((1.0, np.pi), (0.8, 1.1)):
        S = Spectrum([RectAtom(amp, w, c=-0.4, tau=0.2)])
        assert l1_spectral_norm(S) == pytest.approx(2.0 * w * amp / np.sqrt(2.0 * np.pi), rel=1e-12)
        assert l2_norm(S) == pytest.approx(amp * np.sqrt(w / np.pi), rel=1e-12)


def test_power_tail_closed_forms():
    S = Spectrum(tails=(PowerTail(1.5),))
    # 2 int_1^inf v^-3 = 1;  2 int_1^inf v^-1.5 = 4
    assert weighted_l2_sq(S, FULL, tail_power=(0.0, 1.0)) == pytest.approx(1.0, rel=1e-10)
    assert integrate_abs_q(S, 1.0, 0.0, FULL) == pytest.approx(4.0, rel=1e-10)


def test_weighted_l2_matches_power_weight_path():
    S = Spectrum([TriangleAtom(1.2, 0.4, 0.7, 0.3)])
    via_mult = weighted_l2_sq(S, FULL, mult2=lambda v: v**2)
    via_weight = integrate_abs_q(S, 2.0, 2.0, FULL)
    assert via_mult == pytest.approx(via_weight, rel=1e-11)


def test_adaptive_quadrature_basics():
    assert adaptive_quadrature(lambda x: 3.0 * x**2, 0.0, 2.0) == pytest.approx(8.0, rel=1e-12)
    z = adaptive_quadrature(lambda x: np.exp(1j * x), 0.0, np.pi)
    assert z == pytest.approx(2.0j, abs=1e-10)
    assert adaptive_quadrature(lambda x: x, 1.0, 1.0) == 0.0


def test_inner_product_mixed_against_quad_oracle():
    S1 = Spectrum([TriangleAtom(1.2, 0.4, 0.7, 0.3)], tails=(PowerTail(1.3),))
    S2 = Spectrum([RectAtom(0.8, 1.1, -0.5, -0.2)], tails=(PowerTail(1.7),))
    z = inner_product(S1, S2)
    assert z == pytest.approx(ORACLE_INNER_MIXED, abs=2e-8)
    assert inner_product(S2, S1) == pytest.approx(np.conj(z), abs=1e-10)


def test_inner_product_is_l2_sq_on_diagonal():
    S = Spectrum([TriangleAtom(1.2, 0.4, 0.7, 0.3)])
    assert inner_product(S, S).real == pytest.approx(l2_norm(S) ** 2, rel=1e-10)
    assert abs(inner_product(S, S).imag) < 1e-12


def test_cumulative_sq_two_tails_cross_terms():
    S = Spectrum(tails=(PowerTail(0.8), PowerTail(1.4)))
    # the squared sum of densities carries the 2 v^{-(g1+g2)} cross term
    assert cumulative_sq(S, 2.5)[0] == pytest.approx(ORACLE_CUM_2TAIL_2P5, rel=1e-9)
    assert cumulative_sq(S, -1.5)[0] < cumulative_sq(S, 2.5)[0]


def test_cumulative_sq_totals_and_bands():
    S = Spectrum([TriangleAtom(1.0, 0.3, 1.2, 0.5), RectAtom(0.7, 1.5, -0.4, 0.2)])
    R = S.support_radius()
    assert cumulative_sq(S, R + 1.0)[0] == pytest.approx(l2_norm(S) ** 2, rel=1e-10)
    edges = np.linspace(-R, R, 17)
    masses = band_sq(S, edges[:-1], edges[1:])
    assert np.all(masses >= 0.0)
    assert float(np.sum(masses)) == pytest.approx(l2_norm(S) ** 2, rel=1e-10)


def test_oscillatory_inversion_recovers_time_values():
    S = Spectrum([TriangleAtom(1.0, 0.3, 1.2, 0.5)])
    R = S.support_radius()
    for t in (0.0, 1.7, -6.3, 25.0):
        z = numerics.oscillatory_inversion(S, t, interval(-R, R))
        assert z == pytest.approx(complex(S.time_eval(t)), abs=1e-10)


def test_divergence_detection():
    S = Spectrum(tails=(PowerTail(0.6),))
    with pytest.raises(DivergentIntegral):
        integrate_abs_q(S, 1.0, 0.0, FULL)  # q*gamma = 0.6 <= 1
    with pytest.raises(ValueError):
        weighted_l2_sq(S, FULL, mult2=lambda v: v**2)  # no tail model given


def test_region_helpers():
    assert normalize_region([(3.0, 1.0), (0.0, 1.0), (0.5, 2.0)]) == ((0.0, 2.0),)
    assert tail_region(2.0) == ((-np.inf, -2.0), (2.0, np.inf))
    assert interval(1, 4) == ((1.0, 4.0),)
    assert integrate_abs_q(MIX, 2.0, 0.0, ()) == 0.0


def test_empty_spectrum_is_zero():
    S = Spectrum()
    assert l2_norm(S) == 0.0
    assert l1_spectral_norm(S) == 0.0
    assert cumulative_sq(S, 3.0)[0] == 0.0
