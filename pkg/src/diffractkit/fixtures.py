"""Infinite point sets generated on demand.

A point source never materialises the whole set. ``patch(lo, hi, origin)``
returns the atoms in ``[origin + lo, origin + hi]`` as a finite comb in local
coordinates ``x - origin``. Integer origins are handled with Python integers,
so windows far out on the line (``origin = 2**40000``) stay exact.
"""

import math

import numpy as np

from .comb import WeightedDiracComb
from .errors import UnknownFixture
from .windows import BoxWindow


def split_origin(origin):
    """``origin = I + r`` with integer ``I`` and ``0 <= r < 1``."""
    if isinstance(origin, (int, np.integer)):
        return int(origin), 0.0
    origin = float(origin)
    whole = math.floor(origin)
    return int(whole), origin - whole


class PointSource:
    """Base class: a unit-weight (unless stated) point set on the line."""

    dim = 1
    discreteness_radius = None
    real_weights = True
    max_weight = 1.0
    name = "source"
    region = None

    def patch(self, lo, hi, origin=0):
        raise NotImplementedError

    def comb(self, lo, hi):
        """Materialise the atoms in the closed interval ``[lo, hi]``."""
        p = self.patch(lo, hi, 0)
        return WeightedDiracComb(p.points, p.weights, BoxWindow.interval(lo, hi),
                                 self.discreteness_radius)

    def describe(self):
        return self.name

    def _finish(self, local, lo, hi, weights=None):
        local = np.asarray(local, dtype=float)
        keep = (local >= lo) & (local <= hi)
        local = local[keep]
        w = np.ones(local.size) if weights is None else np.asarray(weights)[keep]
        region = BoxWindow.interval(lo, hi) if hi > lo else None
        return WeightedDiracComb(local, w, region, self.discreteness_radius)


class ArithmeticUnion(PointSource):
    """Disjoint union of arithmetic pieces ``{step·j + offset : jmin <= j <= jmax}``."""

    def __init__(self, pieces, name, radius):
        self.pieces = [(int(step), float(offset), jmin, jmax)
                       for step, offset, jmin, jmax in pieces]
        self.name = name
        self.discreteness_radius = radius

    def patch(self, lo, hi, origin=0):
        whole, frac = split_origin(origin)
        chunks = []
        for step, offset, jmin, jmax in self.pieces:
            # write j = whole // step + m so that step*j - whole = step*m - rem
            base, rem = divmod(whole, step)
            m0 = math.ceil((frac + lo - offset + rem) / step)
            m1 = math.floor((frac + hi - offset + rem) / step)
            if jmin is not None:
                m0 = max(m0, jmin - base)
            if jmax is not None:
                m1 = min(m1, jmax - base)
            if m1 < m0:
                continue
            m = np.arange(m0, m1 + 1, dtype=np.int64)
            chunks.append(step * m.astype(float) - rem + offset - frac)
        local = np.concatenate(chunks) if chunks else np.zeros(0)
        return self._finish(local, lo, hi)


def lattice():
    """The integers ``Z``."""
    return ArithmeticUnion([(1, 0.0, None, None)], "lattice Z", 1.0)


def a_defect(a):
    """``{-n : n >= 1} ∪ {n + a : n >= 1}``, a lattice with a phase slip at the origin."""
    a = float(a)
    if not -2.0 < a < 1.0:
        raise ValueError("the a-defect needs -2 < a < 1 to stay disjoint from the left half")
    src = ArithmeticUnion([(1, 0.0, None, -1), (1, a, 1, None)],
                          f"a-defect of Z (a={a:.10g})", min(1.0, 2.0 + a))
    src.a = a
    return src


def double_sided():
    """``{n, -2n : n >= 1}``: density 1 on the right and 1/2 on the left."""
    return ArithmeticUnion([(1, 0.0, 1, None), (2, 0.0, None, -1)],
                           "{n, -2n : n >= 1}", 1.0)


class Blocks(PointSource):
    """``Σ_{j>=1} Σ_{k=1}^{j} δ_{2^j + k}``: runs of ``j`` consecutive integers at ``2^j``."""

    name = "blocks Σ_j Σ_{k<=j} δ_{2^j+k}"
    discreteness_radius = 1.0

    def patch(self, lo, hi, origin=0):
        whole, frac = split_origin(origin)
        p_lo = whole + math.floor(frac + lo)
        p_hi = whole + math.ceil(frac + hi)
        local = []
        if p_hi >= 3:
            j_max = (p_hi - 1).bit_length() - 1
            j_min = max(1, p_lo.bit_length() - 2) if p_lo > 0 else 1
            for j in range(j_min, j_max + 1):
                start = 1 << j
                k0 = max(1, p_lo - start)
                k1 = min(j, p_hi - start)
                if k1 >= k0:
                    local.append(np.arange(k0, k1 + 1, dtype=float)
                                 + float(start - whole) - frac)
        local = np.concatenate(local) if local else np.zeros(0)
        return self._finish(local, lo, hi)

    @staticmethod
    def probe_shift(n_max):
        """An integer shift whose window ``[-n_max, n_max]`` lies inside a single block."""
        m = 2 * int(n_max) + 2
        return (1 << m) + 1 + int(n_max)


class CombSource(PointSource):
    """Wrap a finite :class:`WeightedDiracComb` so it answers ``patch`` like a source."""

    def __init__(self, mu):
        self.mu = mu
        self.discreteness_radius = mu.discreteness_radius
        self.real_weights = mu.real_weights
        self.max_weight = mu.max_weight
        self.region = mu.region
        self.name = mu.describe()

    def patch(self, lo, hi, origin=0):
        return self.mu.patch(lo, hi, origin)

    def comb(self, lo, hi):
        p = self.mu.patch(lo, hi, 0)
        return WeightedDiracComb(p.points, p.weights, BoxWindow.interval(lo, hi),
                                 self.discreteness_radius)


def as_source(mu):
    """Point sources pass through; finite combs are wrapped."""
    if isinstance(mu, PointSource):
        return mu
    if isinstance(mu, WeightedDiracComb):
        return CombSource(mu)
    raise TypeError(f"not a comb or point source: {type(mu).__name__}")


SQRT2_MINUS_1 = math.sqrt(2.0) - 1.0


def _fibonacci():
    from .model_sets import ModelSet, fibonacci
    return ModelSet(fibonacci())


FIXTURES = {
    "lattice": lambda **kw: lattice(),
    "a-defect": lambda a=SQRT2_MINUS_1, **kw: a_defect(a),
    "double-sided": lambda **kw: double_sided(),
    "blocks": lambda **kw: Blocks(),
    "fibonacci": lambda **kw: _fibonacci(),
}


def make_fixture(name, **params):
    """Build a registered point source by name (``lattice``, ``a-defect`` ...)."""
    key = name.strip().lower().replace("_", "-")
    if key not in FIXTURES:
        known = ", ".join(sorted(FIXTURES))
        raise UnknownFixture(f"unknown fixture {name!r}; known fixtures: {known}")
    return FIXTURES[key](**params)
