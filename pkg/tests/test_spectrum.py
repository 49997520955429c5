"""Closed-form checks of the spectral atom representations."""

import numpy as np
import pytest

from bandlim import numerics
from bandlim.errors import UnsupportedTimeEval
from bandlim.spectrum import (
    SQRT_2PI,
    PowerTail,
    RectAtom,
    Spectrum,
    TriangleAtom,
    sinc_spectrum,
)

TRI = TriangleAtom(amp=1.2, b=0.4, c=0.7, tau=0.3)
RECT = RectAtom(amp=0.8, w=1.1, c=-0.5, tau=-0.2)


def test_triangle_density_closed_form():
    S = Spectrum([TRI])
    peak = 1.2 / (SQRT_2PI * 0.4)
    half = 2.0 * np.pi * 0.4
    # peak value at the center, with the tau phase
    assert S.density(0.7)[0] == pytest.approx(peak * np.exp(-1j * 0.7 * 0.3), rel=1e-14)
    # linear drop to zero at the edges
    v_mid = 0.7 + 0.5 * half
    assert abs(S.density(v_mid)[0]) == pytest.approx(0.5 * peak, rel=1e-14)
    assert S.density(0.7 + 1.01 * half)[0] == 0.0
    assert S.density(0.7 - 1.01 * half)[0] == 0.0


def test_rect_density_closed_form():
    S = Spectrum([RECT])
    inside = S.density(-0.5)[0]
    assert inside == pytest.approx((0.8 / SQRT_2PI) * np.exp(1j * 0.5 * (-0.2)), rel=1e-14)
    assert S.density(-0.5 + 1.2)[0] == 0.0


def test_sinc_time_samples():
    # sinc(t) is 1 at 0 and vanishes at the other integers
    S = sinc_spectrum(1.0)
    vals = S.time_eval(np.arange(-3.0, 4.0))
    expect = np.zeros(7)
    expect[3] = 1.0
    assert np.allclose(vals, expect, atol=1e-14)


def test_triangle_time_closed_form():
    S = Spectrum([TRI])
    t = np.array([-1.3, 0.0, 0.8, 2.4])
    expect = 1.2 * np.sinc(0.4 * (t - 0.3)) ** 2 * np.exp(1j * 0.7 * (t - 0.3))
    assert np.allclose(S.time_eval(t), expect, rtol=1e-13)


def test_time_eval_matches_spectral_inversion():
    S = Spectrum([TRI, RECT])
    R = S.support_radius()
    for t in (-2.1, 0.0, 0.45, 3.3):
        inv = numerics.oscillatory_inversion(S, t, numerics.interval(-R, R))
        assert inv == pytest.approx(complex(S.time_eval(t)), abs=1e-10)


def test_scaled_density():
    S = Spectrum([TRI, RECT])
    v = np.linspace(-3.0, 4.0, 37)
    assert np.allclose(S.scaled(2.5).density(v), 2.5 * S.density(v), rtol=1e-14)


def test_dilated_density_identity():
    # f(lam t) has density lam^{-1} fhat(v / lam)
    S = Spectrum([TRI, RECT])
    lam = 0.75
    v = np.linspace(-3.0, 4.0, 37)
    assert np.allclose(S.dilated(lam).density(v), S.density(v / lam) / lam, rtol=1e-13)


def test_tails_reject_time_side_and_dilation():
    S = Spectrum(tails=(PowerTail(1.5),))
    with pytest.raises(UnsupportedTimeEval):
        S.time_eval(0.0)
    with pytest.raises(UnsupportedTimeEval):
        S.dilated(2.0)
    with pytest.raises(ValueError):
        S.scaled(2.0)


def test_from_triangle_arrays_matches_atoms():
    amp = np.array([0.5, 1.5])
    b = np.array([0.2, 0.6])
    c = np.array([-1.0, 4.0])
    S_bulk = Spectrum.from_triangle_arrays(amp, b, c)
    S_atoms = Spectrum([TriangleAtom(0.5, 0.2, -1.0), TriangleAtom(1.5, 0.6, 4.0)])
    v = np.linspace(-3.0, 9.0, 101)
    assert np.allclose(S_bulk.density(v), S_atoms.density(v), rtol=1e-14)
    assert S_bulk.n_atoms == 2
    assert list(S_bulk.atoms)[0] == TriangleAtom(0.5, 0.2, -1.0)


def test_time_envelope_dominates():
    S = Spectrum([TRI, RECT])
    t = np.linspace(-40.0, 40.0, 401)
    assert np.all(S.time_envelope(t) + 1e-12 >= np.abs(S.time_eval(t)))


def test_decay_coeffs_bound():
    S = Spectrum([TRI, RECT])
    A, B = S.decay_coeffs()
    t = np.geomspace(2.0, 500.0, 80)
    for sign in (1.0, -1.0):
        assert np.all(np.abs(S.time_eval(sign * t)) <= A / t + B / t**2 + 1e-12)


def test_support_radius_and_breakpoints():
    S = Spectrum([TRI, RECT])
    assert S.support_radius() == pytest.approx(0.7 + 2.0 * np.pi * 0.4)
    bps = S.breakpoints()
    for p in (-1.6, -0.5, 0.6, 0.7, 0.7 - 2.0 * np.pi * 0.4, 0.7 + 2.0 * np.pi * 0.4):
        assert np.min(np.abs(bps - p)) < 1e-12
    assert Spectrum().support_radius() == 0.0


def test_disjointness_flag():
    assert not Spectrum([TRI, RECT]).is_disjoint  # overlapping supports
    assert Spectrum([TriangleAtom(1.0, 0.1, 0.0), TriangleAtom(1.0, 0.1, 5.0)]).is_disjoint


def test_envelope_sq_matches_density_for_disjoint():
    S = Spectrum([TriangleAtom(1.0, 0.1, 0.0), RectAtom(0.5, 0.3, 5.0, 0.7)])
    v = np.linspace(-2.0, 6.0, 301)
    assert np.allclose(S.envelope_sq(v), np.abs(S.density(v)) ** 2, rtol=1e-13)


def test_immutability_and_validation():
    S = Spectrum([TRI])
    with pytest.raises(AttributeError):
        S.atoms = ()
    with pytest.raises(ValueError):
        TriangleAtom(1.0, b=0.0)
    with pytest.raises(ValueError):
        RectAtom(1.0, w=-1.0)
    with pytest.raises(ValueError):
        PowerTail(0.5)
    with pytest.raises(TypeError):
        Spectrum([object()])
    with pytest.raises(TypeError):
        Spectrum(tails=(TRI,))


def test_cache_is_idempotent():
    S = Spectrum([TRI])
    calls = []
    assert S.cached(("k",), lambda: calls.append(1) or 7.0) == 7.0
    assert S.cached(("k",), lambda: calls.append(1) or 9.0) == 7.0
    assert calls == [1]
