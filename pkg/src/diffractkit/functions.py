"""Characters, tent test functions and the bounded functions built from them.

Frequencies follow the crystallographic convention used throughout the
package: the frequency ``k`` labels the character ``χ_k(t) = exp(-2πi k·t)``,
and Fourier-Bohr coefficients pair with its conjugate, so
``a_k(f) = M(f · exp(2πi k t))``.

Every function here is evaluated in *local* coordinates. A function built
from a point source carries an ``origin`` (possibly a huge Python integer);
:meth:`Function.recentred` moves it without losing precision.
"""

import math
from fractions import Fraction

import numpy as np

from .summation import pairwise_sum
from .windows import BoxWindow


def phase(k, s):
    """``exp(2πi k s)``, exact in ``s`` when ``s`` is a Python integer of any size."""
    if isinstance(s, (int, np.integer)) and not isinstance(s, bool):
        s = int(s)
        if abs(s) > 2 ** 40:
            frac = float((Fraction(float(k)) * s) % 1)
            return complex(np.exp(2j * np.pi * frac))
        return complex(np.exp(2j * np.pi * ((float(k) * s) % 1.0)))
    return complex(np.exp(2j * np.pi * float(k) * float(s)))


def add_origin(origin, s):
    """Origin arithmetic that stays exact for integers."""
    if isinstance(origin, int) and isinstance(s, (int, np.integer)):
        return origin + int(s)
    if isinstance(origin, int) and float(s).is_integer() and abs(s) < 2 ** 52:
        return origin + int(s)
    return float(origin) + float(s)


class Function:
    """Bounded function of one real variable.

    Subclasses implement ``__call__`` and may provide ``breakpoints`` (then the
    function is continuous and linear between consecutive breakpoints) or
    closed-form ``power_integral`` / ``fourier_integral``.
    """

    dim = 1

    def __call__(self, t):
        raise NotImplementedError

    def breakpoints(self, lo, hi):
        return None

    def power_integral(self, lo, hi, p):
        return None

    def fourier_integral(self, k, lo, hi):
        return None

    def sup_bound(self):
        return math.inf

    @property
    def is_real(self):
        return False

    def recentred(self, s):
        """The function ``u -> f(u + s)``."""
        if s == 0:
            return self
        return Shifted(self, -s)

    def reflected(self):
        """``f~(t) = conj(f(-t))``."""
        return Reflected(self)

    def describe(self):
        return type(self).__name__


class TrigPolynomial(Function):
    """``Σ_j c_j χ_{k_j}`` with ``χ_k(t) = exp(-2πi k t)``."""

    def __init__(self, freqs, coeffs):
        self.freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
        self.coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        if self.freqs.shape != self.coeffs.shape:
            raise ValueError("one coefficient per frequency")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        terms = self.coeffs[:, None] * np.exp(-2j * np.pi * self.freqs[:, None] * t.reshape(1, -1))
        return pairwise_sum(terms, axis=0).reshape(t.shape)

    def power_integral(self, lo, hi, p):
        if self.freqs.size == 1:
            return abs(self.coeffs[0]) ** p * (hi - lo)
        if p != 2:
            return None
        dk = self.freqs[None, :] - self.freqs[:, None]
        cc = self.coeffs[:, None] * np.conj(self.coeffs[None, :])
        return float(np.real(pairwise_sum((cc * exp_integral_grid(dk, lo, hi)).ravel())))

    def fourier_integral(self, k, lo, hi):
        from .quadrature import exp_integral
        return complex(pairwise_sum(self.coeffs * exp_integral(k - self.freqs, lo, hi)))

    def sup_bound(self):
        return float(pairwise_sum(np.abs(self.coeffs)))

    @property
    def is_real(self):
        return False

    def recentred(self, s):
        if s == 0:
            return self
        ph = np.array([phase(-k, s) for k in self.freqs])
        return TrigPolynomial(self.freqs, self.coeffs * ph)

    def describe(self):
        terms = " + ".join(f"({c:g})χ_{k:g}" for k, c in zip(self.freqs, self.coeffs))
        return f"trigonometric polynomial {terms}"


def exp_integral_grid(nu, lo, hi):
    from .quadrature import exp_integral
    return exp_integral(nu, lo, hi)


class Character(TrigPolynomial):
    """The character ``χ_k(t) = exp(-2πi k t)``; ``|χ_k| = 1`` everywhere."""

    def __init__(self, freq):
        super().__init__([freq], [1.0])
        self.freq = float(freq)

    def describe(self):
        return f"character χ_{self.freq:g}"


class Constant(TrigPolynomial):
    def __init__(self, value):
        super().__init__([0.0], [value])
        self.value = complex(value)

    @property
    def is_real(self):
        return self.value.imag == 0

    def breakpoints(self, lo, hi):
        return np.empty(0)

    def describe(self):
        return f"constant {self.value:g}"


class TentFunction:
    """``φ(t) = Π_i max(0, 1 - |t_i - c_i| / w)``.

    Support ``c + [-w, w]^d``, ``φ(c) = 1`` and ``∫φ = w^d``.
    """

    def __init__(self, halfwidth=1.0, center=0.0):
        if not halfwidth > 0:
            raise ValueError("halfwidth must be positive")
        self.halfwidth = float(halfwidth)
        c = np.atleast_1d(np.asarray(center, dtype=float))
        self.center = c
        self.dim = c.size

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.dim == 1:
            return np.maximum(0.0, 1.0 - np.abs(t - self.center[0]) / self.halfwidth)
        t = t.reshape(-1, self.dim)
        parts = np.maximum(0.0, 1.0 - np.abs(t - self.center) / self.halfwidth)
        return np.prod(parts, axis=1)

    @property
    def integral(self):
        return self.halfwidth ** self.dim

    @property
    def support(self):
        return BoxWindow(tuple(self.center - self.halfwidth), tuple(self.center + self.halfwidth))

    def autocorrelation(self, z):
        """``(φ ∗ φ~)(z) = ∫ φ(t) φ(t - z) dt`` in closed form (piecewise cubic)."""
        w = self.halfwidth
        z = np.asarray(z, dtype=float)
        if self.dim == 1:
            return w * _tent_overlap(z / w)
        z = z.reshape(-1, self.dim)
        return np.prod(w * _tent_overlap(z / w), axis=1)

    def __repr__(self):
        c = self.center[0] if self.dim == 1 else tuple(self.center)
        return f"TentFunction(halfwidth={self.halfwidth:g}, center={c})"


def _tent_overlap(u):
    u = np.abs(u)
    inner = 2.0 / 3.0 - u ** 2 + 0.5 * u ** 3
    outer = (2.0 - u) ** 3 / 6.0
    return np.where(u <= 1.0, inner, np.where(u <= 2.0, outer, 0.0))


def tent(halfwidth=1.0, center=0.0):
    return TentFunction(halfwidth, center)


def tent_fourier(phi, k):
    """``φ̂(k) = ∫ φ(t) exp(2πi k·t) dt = Π_i exp(2πi k_i c_i) w sinc²(k_i w)``."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.size != phi.dim:
        raise ValueError("frequency dimension differs from the tent's")
    w = phi.halfwidth
    out = 1.0 + 0j
    for ki, ci in zip(k, phi.center):
        out *= np.exp(2j * np.pi * ki * ci) * w * np.sinc(ki * w) ** 2
    return complex(out)


def smooth(mu, phi, t):
    """``(μ ∗ φ)(t) = Σ_x w_x φ(t - x)``.

    ``mu`` is a comb or a point source. Raises ``RegionUnderflow`` if the atoms
    on ``t - supp φ`` were not generated.
    """
    if getattr(mu, "dim", 1) != 1 or phi.dim != 1:
        return _smooth_nd(mu, phi, t)
    c, w = phi.center[0], phi.halfwidth
    t = float(t)
    local = mu.patch(t - c - w, t - c + w)
    if len(local) == 0:
        return 0j
    return complex(pairwise_sum(local.weights * phi(t - local.x)))


def _smooth_nd(mu, phi, t):
    from .comb import restrict
    t = np.atleast_1d(np.asarray(t, dtype=float))
    box = BoxWindow(tuple(t - phi.center - phi.halfwidth),
                    tuple(np.nextafter(t - phi.center + phi.halfwidth, np.inf)))
    local = restrict(mu, box)
    if len(local) == 0:
        return 0j
    return complex(pairwise_sum(local.weights * phi(t - local.points)))


class PiecewiseLinear(Function):
    """Continuous function through ``(knots, values)``, constant beyond the end knots."""

    def __init__(self, knots, values):
        self.knots = np.asarray(knots, dtype=float)
        self.values = np.asarray(values)
        if self.knots.ndim != 1 or self.knots.size < 1 or np.any(np.diff(self.knots) <= 0):
            raise ValueError("knots must be strictly increasing")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.iscomplexobj(self.values):
            return (np.interp(t, self.knots, self.values.real)
                    + 1j * np.interp(t, self.knots, self.values.imag))
        return np.interp(t, self.knots, self.values.astype(float))

    def breakpoints(self, lo, hi):
        return self.knots[(self.knots > lo) & (self.knots < hi)]

    def sup_bound(self):
        return float(np.max(np.abs(self.values)))

    @property
    def is_real(self):
        return not np.iscomplexobj(self.values)

    def describe(self):
        return f"piecewise linear, {self.knots.size} knots"


def step_function():
    """0 for ``t < 0``, ``t`` on ``[0, 1]``, 1 for ``t > 1``."""
    return PiecewiseLinear([0.0, 1.0], [0.0, 1.0])


class Shifted(Function):
    """``t -> f(t - s)``."""

    def __init__(self, f, s):
        self.f = f
        self.s = float(s)

    def __call__(self, t):
        return self.f(np.asarray(t, dtype=float) - self.s)

    def breakpoints(self, lo, hi):
        bp = self.f.breakpoints(lo - self.s, hi - self.s)
        return None if bp is None else np.asarray(bp) + self.s

    def sup_bound(self):
        return self.f.sup_bound()

    @property
    def is_real(self):
        return self.f.is_real

    def recentred(self, s):
        return self.f.recentred(-self.s + s) if self.s != s else self.f

    def describe(self):
        return f"{self.f.describe()} shifted by {self.s:g}"


class Reflected(Function):
    """``t -> conj(f(-t))``."""

    def __init__(self, f):
        self.f = f

    def __call__(self, t):
        return np.conj(self.f(-np.asarray(t, dtype=float)))

    def breakpoints(self, lo, hi):
        bp = self.f.breakpoints(-hi, -lo)
        return None if bp is None else -np.asarray(bp)[::-1]

    def sup_bound(self):
        return self.f.sup_bound()

    @property
    def is_real(self):
        return self.f.is_real

    def reflected(self):
        return self.f

    def describe(self):
        return f"reflection of {self.f.describe()}"


class SmoothedComb(Function):
    """``u -> (μ ∗ φ)(u + origin)`` for a comb or point source ``μ`` and a 1-d tent ``φ``."""

    def __init__(self, source, phi, origin=0):
        if phi.dim != 1 or getattr(source, "dim", 1) != 1:
            raise ValueError("smoothed combs are one-dimensional")
        self.source = source
        self.phi = phi
        self.origin = origin

    def _support_offsets(self):
        c, w = self.phi.center[0], self.phi.halfwidth
        return c - w, c + w

    def _local_atoms(self, lo, hi):
        s0, s1 = self._support_offsets()
        return self.source.patch(lo - s1, hi - s0, self.origin)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.reshape(-1)
        if flat.size == 0:
            return np.zeros(t.shape, dtype=complex)
        patch = self._local_atoms(float(flat.min()), float(flat.max()))
        return _tent_sum(patch.x, patch.weights, self.phi, flat).reshape(t.shape)

    def breakpoints(self, lo, hi):
        patch = self._local_atoms(lo, hi)
        c, w = self.phi.center[0], self.phi.halfwidth
        y = patch.x
        bp = np.concatenate((y + c - w, y + c, y + c + w))
        return np.unique(bp[(bp > lo) & (bp < hi)])

    def sup_bound(self):
        r = getattr(self.source, "discreteness_radius", None)
        wmax = getattr(self.source, "max_weight", 1.0)
        if not r:
            return math.inf
        return wmax * (math.floor(2 * self.phi.halfwidth / r) + 1)

    @property
    def is_real(self):
        return bool(getattr(self.source, "real_weights", False))

    def recentred(self, s):
        if s == 0:
            return self
        return SmoothedComb(self.source, self.phi, add_origin(self.origin, s))

    def describe(self):
        return f"{self.source.describe()} smoothed with {self.phi!r}"


def _tent_sum(x, weights, phi, t):
    """``Σ_j w_j φ(t - x_j)`` for sorted ``x``, visiting only atoms in the support."""
    c, w = phi.center[0], phi.halfwidth
    out = np.zeros(t.shape, dtype=complex)
    if x.size == 0:
        return out
    i0 = np.searchsorted(x, t - c - w, "right")
    i1 = np.searchsorted(x, t - c + w, "left")
    width = int(np.max(i1 - i0)) if t.size else 0
    for j in range(width):
        idx = i0 + j
        ok = idx < i1
        safe = np.where(ok, idx, 0)
        out += np.where(ok, weights[safe] * phi(t - x[safe]), 0.0)
    return out


def smoothed(source, phi, origin=0):
    return SmoothedComb(source, phi, origin)
