"""Boxes and the van Hove window families used as averaging protocols."""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class BoxWindow:
    """Axis-aligned box ``[lower, upper)`` in R^d.

    Membership is half-open so that boxes tiling a region count every atom
    exactly once.
    """

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) != len(hi):
            raise ValueError("lower and upper must have the same length")
        if not all(np.isfinite(lo + hi)):
            raise ValueError("box corners must be finite")
        if any(lo_i >= hi_i for lo_i, hi_i in zip(lo, hi)):
            raise ValueError(f"degenerate box {lo} .. {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def interval(cls, lo, hi):
        return cls((lo,), (hi,))

    @property
    def dim(self):
        return len(self.lower)

    @property
    def sides(self):
        return tuple(hi_i - lo_i for lo_i, hi_i in zip(self.lower, self.upper))

    @property
    def volume(self):
        return float(np.prod(self.sides))

    def contains(self, points):
        """Boolean mask of rows of ``points`` (shape ``(N, d)``) inside the box."""
        pts = np.asarray(points, dtype=float).reshape(-1, self.dim)
        lo = np.asarray(self.lower)
        hi = np.asarray(self.upper)
        return np.all((pts >= lo) & (pts < hi), axis=1)

    def covers(self, other):
        """True if ``other`` lies inside the closure of this box."""
        return all(sl <= ol and ou <= su for sl, su, ol, ou
                   in zip(self.lower, self.upper, other.lower, other.upper))

    def translate(self, t):
        t = np.broadcast_to(np.asarray(t, dtype=float), (self.dim,))
        return BoxWindow(tuple(np.add(self.lower, t)), tuple(np.add(self.upper, t)))

    def expand(self, r):
        """Grow every side by ``r`` on both ends."""
        return BoxWindow(tuple(lo_i - r for lo_i in self.lower),
                         tuple(u + r for u in self.upper))

    def hull(self, other):
        return BoxWindow(tuple(map(min, self.lower, other.lower)),
                         tuple(map(max, self.upper, other.upper)))

    def symmetric_difference_volume(self, t):
        """``|A Δ (t + A)|`` for a translation vector ``t``."""
        t = np.broadcast_to(np.asarray(t, dtype=float), (self.dim,))
        overlap = np.prod([max(0.0, s - abs(ti)) for s, ti in zip(self.sides, t)])
        return 2.0 * (self.volume - overlap)

    def boundary_volume(self, K):
        """Volume of the K-boundary of this box for a box ``K``.

        The K-boundary is the part of ``closure(A + K)`` outside ``A`` together
        with the points of ``closure(A)`` whose K-translate leaves ``A``. For
        boxes both parts are boxes-minus-boxes, so the volume is closed form.
        """
        if K.dim != self.dim:
            raise ValueError("dimension mismatch")
        outer_full = 1.0
        outer_overlap = 1.0
        inner_core = 1.0
        for lo_i, hi_i, kl, ku in zip(self.lower, self.upper, K.lower, K.upper):
            L = hi_i - lo_i
            outer_full *= L + (ku - kl)
            outer_overlap *= max(0.0, min(hi_i, hi_i + ku) - max(lo_i, lo_i + kl))
            inner_core *= max(0.0, L - (ku - kl))
        return (outer_full - outer_overlap) + (self.volume - inner_core)

    def __str__(self):
        if self.dim == 1:
            return f"[{self.lower[0]:g}, {self.upper[0]:g})"
        return " x ".join(f"[{lo_i:g}, {hi_i:g})" for lo_i, hi_i in zip(self.lower, self.upper))


def _as_callable(s):
    if callable(s):
        return s
    return lambda n: s


@dataclass(frozen=True)
class VanHoveFamily:
    """A sequence ``n -> A_n`` of boxes.

    Use the constructors :meth:`symmetric`, :meth:`skew`, :meth:`quadratic`,
    :meth:`alternating` and :meth:`shifted`. In dimension ``d`` the window is
    the d-fold product of the one-dimensional interval.
    """

    kind: str
    params: tuple = ()
    dim: int = 1
    generator: Callable = field(default=None, compare=False, repr=False)
    description: str = ""

    def window(self, n):
        n = int(n)
        if n < 1:
            raise ValueError("window index must be >= 1")
        lo, hi = self.generator(n)
        return BoxWindow((lo,) * self.dim, (hi,) * self.dim)

    __call__ = window

    def volume(self, n):
        return self.window(n).volume

    def van_hove_ratio(self, n, K=None):
        """``|∂^K A_n| / |A_n|``; ``K`` defaults to ``[-1, 1]^d``."""
        if K is None:
            K = BoxWindow((-1.0,) * self.dim, (1.0,) * self.dim)
        A = self.window(n)
        return A.boundary_volume(K) / A.volume

    def hull(self, n_values):
        """Smallest box containing ``A_n`` for every ``n`` in ``n_values``."""
        boxes = [self.window(n) for n in n_values]
        out = boxes[0]
        for b in boxes[1:]:
            out = out.hull(b)
        return out

    def n_for_volume(self, volume, n_max=10**9):
        """Smallest ``n`` with ``|A_n| >= volume`` (bisection on a monotone bound)."""
        def vol_upto(n):
            return max(self.volume(m) for m in (n, max(1, n - 1)))
        lo, hi = 1, 1
        while vol_upto(hi) < volume:
            hi *= 2
            if hi > n_max:
                raise ValueError("volume not reached")
        while lo < hi:
            mid = (lo + hi) // 2
            if self.volume(mid) >= volume:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def __str__(self):
        return self.description or self.kind

    # constructors ---------------------------------------------------------

    @classmethod
    def symmetric(cls, dim=1):
        return cls("symmetric", (), dim, lambda n: (-n, n), "A_n = [-n, n)")

    @classmethod
    def skew(cls, b, dim=1):
        b = float(b)
        if b <= 0:
            raise ValueError("skew factor must be positive")
        return cls("skew", (b,), dim, lambda n: (-n, b * n), f"A_n = [-n, {b:g} n)")

    @classmethod
    def quadratic(cls, dim=1):
        return cls("quadratic", (), dim, lambda n: (-n, n * n), "A_n = [-n, n^2)")

    @classmethod
    def alternating(cls, dim=1):
        return cls("alternating", (), dim,
                   lambda n: (-n, (2 + (-1) ** n) * n),
                   "A_n = [-n, (2 + (-1)^n) n)")

    @classmethod
    def shifted(cls, s, dim=1):
        """``A_n = s_n + [-n, n)``; ``s`` is a constant or a callable of ``n``."""
        sn = _as_callable(s)
        label = "s_n" if callable(s) else f"{float(s):g}"
        return cls("shifted", (s,), dim,
                   lambda n: (sn(n) - n, sn(n) + n), f"A_n = {label} + [-n, n)")

    @classmethod
    def parse(cls, text, dim=1):
        """Build a family from ``"symmetric"``, ``"skew:2"``, ``"shifted:3n"`` etc."""
        name, _, arg = text.strip().partition(":")
        name = name.strip().lower()
        arg = arg.strip()
        if name == "symmetric":
            return cls.symmetric(dim)
        if name == "skew":
            return cls.skew(float(arg or 1.0), dim)
        if name == "quadratic":
            return cls.quadratic(dim)
        if name == "alternating":
            return cls.alternating(dim)
        if name == "shifted":
            if arg.endswith("n"):
                c = float(arg[:-1] or 1.0)
                return cls.shifted(lambda n, c=c: c * n, dim)
            return cls.shifted(float(arg or 0.0), dim)
        raise ValueError(f"unknown van Hove family {text!r}")


def builtin_families(dim=1):
    """One representative of every built-in kind."""
    return [
        VanHoveFamily.symmetric(dim),
        VanHoveFamily.skew(2.0, dim),
        VanHoveFamily.quadratic(dim),
        VanHoveFamily.alternating(dim),
        VanHoveFamily.shifted(lambda n: 3 * n, dim),
    ]


def n_schedule(n_max, q=5, count=8, n_min=None):
    """Increasing ``n`` values ending with ``q`` consecutive integers at ``n_max``.

    The consecutive tail is what convergence detection inspects; it contains
    both parities so that period-two oscillations are visible.
    """
    n_max = int(n_max)
    tail = list(range(max(1, n_max - q + 1), n_max + 1))
    if n_min is None:
        n_min = max(1, n_max // 100)
    head = np.unique(np.geomspace(max(1, n_min), max(1, tail[0] - 1), count).astype(int))
    head = [int(n) for n in head if n < tail[0]]
    return head + tail
