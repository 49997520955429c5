"""bandlim: exact spectral representations of bandlimited-plus-tail signals
and the distance, smoothness, Riesz and modulation functionals built on them."""

from .spectrum import (
    TriangleAtom,
    RectAtom,
    PowerTail,
    TruncationInfo,
    Spectrum,
    sinc_spectrum,
)
from .numerics import (
    integrate_abs_q,
    weighted_l2_sq,
    adaptive_quadrature,
    oscillatory_inversion,
    inner_product,
    l2_norm,
    l1_spectral_norm,
    tail_region,
    interval,
    FULL,
)
from . import errors

__all__ = [
    "TriangleAtom",
    "RectAtom",
    "PowerTail",
    "TruncationInfo",
    "Spectrum",
    "sinc_spectrum",
    "integrate_abs_q",
    "weighted_l2_sq",
    "adaptive_quadrature",
    "oscillatory_inversion",
    "inner_product",
    "l2_norm",
    "l1_spectral_norm",
    "tail_region",
    "interval",
    "FULL",
    "errors",
]

__version__ = "0.1.0"
