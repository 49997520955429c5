"""Difference norms, moduli and Besov seminorms against frozen oracles.

Frozen constants come from offline scipy.integrate.quad scripts applied to
the closed-form spectral multiplier identity
||Delta_h^r f||^2 = int (2 sin(h v / 2))^{2r} |fhat|^2 dv.
"""

import numpy as np
import pytest

from bandlim.smoothness import (
    besov_seminorm,
    difference_norm,
    lipschitz_slope,
    modulus,
    modulus_profile,
)
from bandlim.spectrum import PowerTail, Spectrum, TriangleAtom, sinc_spectrum

# quad oracle: sinc spectrum, r = 1, h = 0.7
ORACLE_DIFF_SINC = 1.12438159841597
# quad oracle: Triangle(1.2, 0.4, 0.7, 0.3), r = 2, h = 0.9
ORACLE_DIFF_TRI_R2 = 1.7110906958618468
# period-resolved quad oracle: PowerTail(1.2), r = 1, h in {2^-2, 2^-8}
ORACLE_DIFF_PT_H2 = 8.3046429065e-01
ORACLE_DIFF_PT_H8 = 5.1057167754e-02
# closed-form shell masses of PowerTail(1.5), sup of 2^{0.75 k} shell norms
ORACLE_BESOV_PT = 1.45647531512197


def test_difference_norm_frozen_oracles():
    assert difference_norm(sinc_spectrum(1.0), 1, 0.7) == pytest.approx(ORACLE_DIFF_SINC, rel=1e-10)
    S = Spectrum([TriangleAtom(1.2, 0.4, 0.7, 0.3)])
    assert difference_norm(S, 2, 0.9) == pytest.approx(ORACLE_DIFF_TRI_R2, rel=1e-10)


def test_difference_norm_power_tail_frozen_oracles():
    S = Spectrum(tails=(PowerTail(1.2),))
    assert difference_norm(S, 1, 2.0**-2) == pytest.approx(ORACLE_DIFF_PT_H2, rel=1e-9)
    assert difference_norm(S, 1, 2.0**-8) == pytest.approx(ORACLE_DIFF_PT_H8, rel=1e-9)


def test_difference_norm_upper_bound():
    # (2 sin)^{2r} <= 4^r pointwise, so the norm is at most 2^r ||f||_2
    S = Spectrum([TriangleAtom(1.0, 0.3, 1.2, 0.5)])
    l2 = np.sqrt(2.0 / (3.0 * 0.3))
    for r, h in ((1, 0.4), (2, 1.7), (3, 11.0)):
        assert difference_norm(S, r, h) <= 2.0**r * l2 + 1e-10


def test_modulus_is_sup_including_endpoint():
    S = Spectrum([TriangleAtom(1.0, 0.3, 1.2, 0.5)])
    delta = 0.8
    assert modulus(S, 1, delta) >= difference_norm(S, 1, delta) - 1e-12
    # nondecreasing in delta
    deltas = np.geomspace(0.05, 2.0, 9)
    prof = modulus_profile(S, 1, deltas)
    assert np.all(np.diff(prof) >= -1e-12)


def test_modulus_profile_matches_pointwise_modulus():
    S = Spectrum([TriangleAtom(1.0, 0.3, 1.2, 0.5)])
    deltas = np.array([0.1, 0.4, 1.3])
    prof = modulus_profile(S, 1, deltas, grid_size=32)
    for d, v in zip(deltas, prof):
        # the master grid refines each per-delta grid, so the shared
        # profile can only see more candidate steps
        assert v >= modulus(S, 1, d, grid_size=32) - 1e-12


def test_besov_power_tail_frozen_oracle():
    S = Spectrum(tails=(PowerTail(1.5),))
    assert besov_seminorm(S, 0.75) == pytest.approx(ORACLE_BESOV_PT, rel=1e-9)


def test_besov_atom_only():
    # single shell: mass of the atom, weight 2^{alpha k} of its shell
    S = Spectrum([TriangleAtom(1.0, 1.0 / (4.0 * np.pi), 3.0)])
    mass = 2.0 / (3.0 / (4.0 * np.pi))  # amp^2 * 2 / (3b)
    assert besov_seminorm(S, 0.5) == pytest.approx(2.0 * np.sqrt(mass), rel=1e-9)  # k = 2 shell


def test_lipschitz_slope_atom():
    # for small h the multiplier is ~ h|v|, so the modulus scales like h
    S = Spectrum([TriangleAtom(1.0, 0.2, 2.0)])
    fit = lipschitz_slope(S, 1, 1e-3, 1e-2, n_points=6)
    assert fit.slope == pytest.approx(1.0, abs=0.02)
    assert fit.r_squared > 0.999


def test_lipschitz_slope_power_tail():
    # |fhat|^2 = v^{-2.4}: difference-norm scaling h^{gamma - 1/2} = h^{0.7}
    S = Spectrum(tails=(PowerTail(1.2),))
    from bandlim.rates import loglog_fit

    hs = np.geomspace(2.0**-12, 2.0**-5, 8)
    fit = loglog_fit([(h, difference_norm(S, 1, h)) for h in hs])
    assert fit.slope == pytest.approx(0.7, abs=0.02)


def test_invalid_arguments():
    S = sinc_spectrum()
    with pytest.raises(ValueError):
        difference_norm(S, 0, 0.5)
    with pytest.raises(ValueError):
        difference_norm(S, 1, 0.0)
    with pytest.raises(ValueError):
        modulus(S, 1, -1.0)
    with pytest.raises(ValueError):
        besov_seminorm(S, 0.0)
