"""Exact frequency-side representations of test functions.

A :class:`Spectrum` is a finite sum of triangle atoms, rectangle atoms and
power-law tails, each with a closed-form spectral density.  The Fourier
convention is

    fhat(v) = (1/sqrt(2 pi)) * integral f(u) exp(-i u v) du,

so a rectangle density of height 1/sqrt(2 pi) on (-pi, pi) corresponds to
the normalized cardinal sine sinc(t) = sin(pi t)/(pi t) in time.

All norm computations downstream treat the density as an exact piecewise
object; nothing in this package is sampled from time-domain signals.
"""

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import UnsupportedTimeEval

__all__ = [
    "TriangleAtom",
    "RectAtom",
    "PowerTail",
    "TruncationInfo",
    "Spectrum",
    "sinc_spectrum",
    "SQRT_2PI",
]

SQRT_2PI = float(np.sqrt(2.0 * np.pi))

_KIND_TRI = 0
_KIND_RECT = 1


@dataclass(frozen=True)
class TriangleAtom:
    """Time side amp*sinc^2(b(t-tau))*exp(ic(t-tau)).

    The density is a triangle of half-width 2*pi*b centered at c with peak
    amp/(sqrt(2 pi) b), carrying the phase exp(-i v tau).
    """

    amp: float
    b: float
    c: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("triangle atom needs b > 0")

    @property
    def support(self):
        half = 2.0 * np.pi * self.b
        return (self.c - half, self.c + half)


@dataclass(frozen=True)
class RectAtom:
    """Time side amp*(w/pi)*sinc(w(t-tau)/pi)*exp(ic(t-tau)).

    The density is amp/sqrt(2 pi) on (c-w, c+w) with phase exp(-i v tau);
    the value on the boundary is taken as 0, which no integral can see.
    """

    amp: float
    w: float
    c: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError("rect atom needs w > 0")

    @property
    def support(self):
        return (self.c - self.w, self.c + self.w)


@dataclass(frozen=True)
class PowerTail:
    """Density |v|^(-gamma) for |v| >= 1, zero inside (-1, 1).

    Spectral-only: the time side is never evaluated.  gamma > 1/2 keeps the
    density square integrable.
    """

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0.5:
            raise ValueError("power tail needs gamma > 1/2")


@dataclass(frozen=True)
class TruncationInfo:
    """Analytic tail bounds carried by a truncated series spectrum.

    ``bounds`` maps quantity names ("l2", "l1", "m21", ...) to upper bounds
    on the contribution of the dropped terms n > n_terms.
    """

    family: str
    params: dict
    n_terms: int
    bounds: dict = field(default_factory=dict)


Atom = Union[TriangleAtom, RectAtom]


class Spectrum:
    """Immutable sum of atoms and power tails.

    Atom data is mirrored into numpy arrays sorted by left support edge so
    that spectra with hundreds of thousands of atoms stay cheap to
    integrate.  Derived norms are cached; recomputation is idempotent, so
    the cache needs no locking.
    """

    __slots__ = ("atoms", "tails", "trunc", "_arr", "_cache")

    def __init__(self, atoms=(), tails=(), trunc: Optional[TruncationInfo] = None):
        atoms = tuple(atoms)
        tails = tuple(tails)
        for a in atoms:
            if not isinstance(a, (TriangleAtom, RectAtom)):
                raise TypeError("atoms must be TriangleAtom or RectAtom")
        for t in tails:
            if not isinstance(t, PowerTail):
                raise TypeError("tails must be PowerTail")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "tails", tails)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "_arr", _AtomTable(atoms))
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("Spectrum is immutable")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_triangle_arrays(cls, amp, b, c, tau=None, tails=(), trunc=None):
        """Bulk constructor used by the counterexample series."""
        amp = np.asarray(amp, dtype=float)
        b = np.asarray(b, dtype=float)
        c = np.asarray(c, dtype=float)
        if tau is None:
            tau = np.zeros_like(amp)
        self = cls.__new__(cls)
        atoms = _LazyAtoms(amp, b, c, np.asarray(tau, dtype=float))
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "tails", tuple(tails))
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "_arr", _AtomTable.from_triangles(amp, b, c, np.asarray(tau, float)))
        object.__setattr__(self, "_cache", {})
        return self

    def concat(self, other: "Spectrum") -> "Spectrum":
        return Spectrum(tuple(self.atoms) + tuple(other.atoms), self.tails + other.tails)

    def scaled(self, factor: float) -> "Spectrum":
        """Pointwise scaling factor * f; density scales by the same factor."""
        out = []
        for a in self.atoms:
            if isinstance(a, TriangleAtom):
                out.append(TriangleAtom(factor * a.amp, a.b, a.c, a.tau))
            else:
                out.append(RectAtom(factor * a.amp, a.w, a.c, a.tau))
        if self.tails and factor != 1.0:
            raise ValueError("power tails carry no amplitude to scale")
        return Spectrum(out, self.tails)

    def dilated(self, lam: float) -> "Spectrum":
        """Spectrum of f_lam(t) = f(lam t) for atom-only spectra.

        The density maps to lam^{-1} fhat(v/lam), which is again a sum of
        atoms.  Power tails leave the representable class (their support
        edge moves off |v| = 1), so they are rejected.
        """
        if self.tails:
            raise UnsupportedTimeEval("dilated() supports atom-only spectra")
        if not lam > 0:
            raise ValueError("lam must be positive")
        out = []
        for a in self.atoms:
            if isinstance(a, TriangleAtom):
                out.append(TriangleAtom(a.amp, lam * a.b, lam * a.c, a.tau / lam))
            else:
                out.append(RectAtom(a.amp / lam, lam * a.w, lam * a.c, a.tau / lam))
        return Spectrum(out)

    # -- basic queries -------------------------------------------------------

    @property
    def n_atoms(self) -> int:
        return self._arr.n

    @property
    def is_disjoint(self) -> bool:
        """True when atom supports overlap at most in endpoints."""
        return self._arr.disjoint

    def breakpoints(self) -> np.ndarray:
        """Sorted, deduplicated support endpoints, kinks, and tail edges."""
        pts = [self._arr.left, self._arr.right, self._arr.c]
        if self.tails:
            pts.append(np.array([-1.0, 1.0]))
        if not pts:
            return np.array([])
        allp = np.concatenate(pts) if pts else np.array([])
        return np.unique(allp)

    def support_radius(self) -> float:
        """Largest |v| carrying atom mass (tails extend to infinity)."""
        if self._arr.n == 0:
            return 0.0
        return float(max(np.max(np.abs(self._arr.left)), np.max(np.abs(self._arr.right))))

    def density(self, v):
        """Spectral density at v (array friendly), complex valued."""
        v = np.atleast_1d(np.asarray(v, dtype=float))
        out = np.zeros(v.shape, dtype=complex)
        self._arr.add_density(v, out)
        for tail in self.tails:
            m = np.abs(v) >= 1.0
            if np.any(m):
                out[m] += np.abs(v[m]) ** (-tail.gamma)
        return out

    def envelope_sq(self, v):
        """Sum of |density|^2 of the parts; equals |density|^2 when parts
        are disjoint (the only case in which callers rely on it)."""
        v = np.atleast_1d(np.asarray(v, dtype=float))
        out = np.zeros(v.shape, dtype=float)
        self._arr.add_envelope_sq(v, out)
        for tail in self.tails:
            m = np.abs(v) >= 1.0
            if np.any(m):
                out[m] += np.abs(v[m]) ** (-2.0 * tail.gamma)
        return out

    def time_eval(self, t):
        """Closed-form time side; rejects power tails."""
        if self.tails:
            raise UnsupportedTimeEval("power tails have no closed time side")
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.zeros(t.shape, dtype=complex)
        self._arr.add_time_eval(t, out)
        return out[0] if scalar else out

    def time_envelope(self, t):
        """Upper bound for |f(t)|, summed over atoms.

        Triangle: |amp| * min(1, 1/(pi b |t - tau|)^2); rectangle:
        |amp| * (w/pi) * min(1, pi/(w |t - tau|)).  Used for sample-sum
        truncation budgets.
        """
        if self.tails:
            raise UnsupportedTimeEval("power tails have no closed time side")
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self._arr.time_envelope(t)

    def decay_coeffs(self):
        """(A, B) with |f(t)| <= A/|t| + B/t^2 for |t| >= 2*max|tau| + 1.

        A collects rect atoms (first-order sinc decay), B the triangles.
        Valid crude bound used only inside truncation budgets.
        """
        if self.tails:
            raise UnsupportedTimeEval("power tails have no closed time side")
        return self._arr.decay_coeffs()

    # -- cache ---------------------------------------------------------------

    def cached(self, key, compute):
        cache = self._cache
        if key not in cache:
            cache[key] = compute()
        return cache[key]

    def __repr__(self):
        return "Spectrum(n_atoms=%d, tails=%r)" % (self.n_atoms, list(self.tails))


def sinc_spectrum(h: float = 1.0, tau: float = 0.0, amp: float = 1.0) -> Spectrum:
    """Spectrum of amp * sinc((t - tau)/h): rectangle of cutoff pi/h."""
    return Spectrum([RectAtom(amp=amp * h, w=np.pi / h, c=0.0, tau=tau)])


class _LazyAtoms:
    """Sequence view building TriangleAtom objects on demand."""

    __slots__ = ("_amp", "_b", "_c", "_tau")

    def __init__(self, amp, b, c, tau):
        self._amp, self._b, self._c, self._tau = amp, b, c, tau

    def __len__(self):
        return len(self._amp)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return tuple(self[j] for j in range(*i.indices(len(self))))
        return TriangleAtom(float(self._amp[i]), float(self._b[i]), float(self._c[i]), float(self._tau[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __add__(self, other):
        return tuple(self) + tuple(other)

    def __radd__(self, other):
        return tuple(other) + tuple(self)


class _AtomTable:
    """Sorted array mirror of the atoms of one spectrum.

    Columns: kind (0 triangle, 1 rect), left/right support edge, center c,
    half-width ``half``, peak unit envelope ``peak`` (the |density|/|amp|
    maximum), amp, tau.  Sorted by left edge.
    """

    __slots__ = ("n", "kind", "left", "right", "c", "half", "peak", "amp", "tau", "disjoint")

    def __init__(self, atoms):
        n = len(atoms)
        kind = np.empty(n, dtype=np.int8)
        amp = np.empty(n)
        c = np.empty(n)
        tau = np.empty(n)
        half = np.empty(n)
        peak = np.empty(n)
        for i, a in enumerate(atoms):
            amp[i], c[i], tau[i] = a.amp, a.c, a.tau
            if isinstance(a, TriangleAtom):
                kind[i] = _KIND_TRI
                half[i] = 2.0 * np.pi * a.b
                peak[i] = 1.0 / (SQRT_2PI * a.b)
            else:
                kind[i] = _KIND_RECT
                half[i] = a.w
                peak[i] = 1.0 / SQRT_2PI
        self._finish(kind, amp, c, tau, half, peak)

    @classmethod
    def from_triangles(cls, amp, b, c, tau):
        self = cls.__new__(cls)
        n = len(amp)
        kind = np.zeros(n, dtype=np.int8)
        half = 2.0 * np.pi * b
        peak = 1.0 / (SQRT_2PI * b)
        self._finish(kind, amp.copy(), c.copy(), tau.copy(), half, peak)
        return self

    def _finish(self, kind, amp, c, tau, half, peak):
        order = np.argsort(c - half, kind="stable")
        self.n = len(amp)
        self.kind = kind[order]
        self.amp = amp[order]
        self.c = c[order]
        self.tau = tau[order]
        self.half = half[order]
        self.peak = peak[order]
        self.left = self.c - self.half
        self.right = self.c + self.half
        if self.n > 1:
            tol = 1e-12 * (1.0 + np.abs(self.left[1:]))
            self.disjoint = bool(np.all(self.right[:-1] <= self.left[1:] + tol))
        else:
            self.disjoint = True

    # Unit envelope of atom i at frequencies v (vector over v).
    def _unit_env(self, i, v):
        if self.kind[i] == _KIND_TRI:
            e = self.peak[i] * (1.0 - np.abs(v - self.c[i]) / self.half[i])
            return np.maximum(e, 0.0)
        inside = np.abs(v - self.c[i]) < self.half[i]
        return np.where(inside, self.peak[i], 0.0)

    def add_density(self, v, out):
        if self.n == 0:
            return
        if self.n <= 64 or not self.disjoint:
            for i in range(self.n):
                env = self._unit_env(i, v)
                m = env != 0.0
                if np.any(m):
                    out[m] += self.amp[i] * env[m] * np.exp(-1j * v[m] * self.tau[i])
            return
        # Disjoint sorted supports: at most one atom covers each v.
        idx = np.searchsorted(self.left, v, side="right") - 1
        ok = idx >= 0
        idxc = np.clip(idx, 0, self.n - 1)
        ok &= v <= self.right[idxc]
        if not np.any(ok):
            return
        i = idxc[ok]
        vv = v[ok]
        tri = self.kind[i] == _KIND_TRI
        env = np.where(
            tri,
            np.maximum(self.peak[i] * (1.0 - np.abs(vv - self.c[i]) / self.half[i]), 0.0),
            self.peak[i],
        )
        out[ok] += self.amp[i] * env * np.exp(-1j * vv * self.tau[i])

    def add_envelope_sq(self, v, out):
        if self.n == 0:
            return
        if self.n <= 64 or not self.disjoint:
            for i in range(self.n):
                env = self._unit_env(i, v)
                out += (self.amp[i] * env) ** 2
            return
        idx = np.searchsorted(self.left, v, side="right") - 1
        ok = idx >= 0
        idxc = np.clip(idx, 0, self.n - 1)
        ok &= v <= self.right[idxc]
        if not np.any(ok):
            return
        i = idxc[ok]
        vv = v[ok]
        tri = self.kind[i] == _KIND_TRI
        env = np.where(
            tri,
            np.maximum(self.peak[i] * (1.0 - np.abs(vv - self.c[i]) / self.half[i]), 0.0),
            self.peak[i],
        )
        out[ok] += (self.amp[i] * env) ** 2

    def add_time_eval(self, t, out):
        # Chunk over atoms to bound the (atoms x t) work arrays.
        step = max(1, int(2e6 / max(1, t.size)))
        for s in range(0, self.n, step):
            e = min(self.n, s + step)
            dt = t[None, :] - self.tau[s:e, None]
            phase = np.exp(1j * self.c[s:e, None] * dt)
            tri = self.kind[s:e] == _KIND_TRI
            vals = np.empty(dt.shape, dtype=complex)
            if np.any(tri):
                b = (self.half[s:e][tri] / (2.0 * np.pi))[:, None]
                vals[tri] = np.sinc(b * dt[tri]) ** 2
            rect = ~tri
            if np.any(rect):
                w = self.half[s:e][rect][:, None]
                vals[rect] = (w / np.pi) * np.sinc(w * dt[rect] / np.pi)
            out += np.einsum("a,at->t", self.amp[s:e] + 0j, vals * phase)

    def time_envelope(self, t):
        out = np.zeros(t.shape)
        step = max(1, int(2e6 / max(1, t.size)))
        for s in range(0, self.n, step):
            e = min(self.n, s + step)
            dt = np.abs(t[None, :] - self.tau[s:e, None])
            tri = self.kind[s:e] == _KIND_TRI
            env = np.empty(dt.shape)
            if np.any(tri):
                b = (self.half[s:e][tri] / (2.0 * np.pi))[:, None]
                with np.errstate(divide="ignore"):
                    env[tri] = np.minimum(1.0, (np.pi * b * dt[tri]) ** -2.0)
            rect = ~tri
            if np.any(rect):
                w = self.half[s:e][rect][:, None]
                with np.errstate(divide="ignore"):
                    env[rect] = (w / np.pi) * np.minimum(1.0, np.pi / (w * dt[rect]))
            out += np.abs(self.amp[s:e]) @ env
        return out

    def decay_coeffs(self):
        tri = self.kind == _KIND_TRI
        b = self.half[tri] / (2.0 * np.pi)
        B = float(np.sum(np.abs(self.amp[tri]) / (np.pi * b) ** 2 * 4.0))
        A = float(np.sum(np.abs(self.amp[~tri]) * 2.0))
        return A, B
