"""Cut-and-project schemes with one-dimensional physical and internal space.

A scheme is a lattice ``L = Z^2 B`` in ``R x R`` (rows of ``B`` generate it)
together with a window ``W`` in internal space, a finite union of half-open
intervals. The model set is ``{x : (x, x*) ∈ L, x* ∈ W}``.
"""

import math

import numpy as np

from .comb import MATCH_TOL, WeightedDiracComb
from .errors import DegenerateBasis, NotALatticePoint
from .fixtures import PointSource, split_origin
from .quadrature import exp_integral
from .summation import pairwise_sum

PHI = (1.0 + math.sqrt(5.0)) / 2.0
PHI_CONJ = (1.0 - math.sqrt(5.0)) / 2.0


def _intervals(window):
    """Normalise a window to a sorted tuple of disjoint ``(alpha, beta)`` pairs."""
    if len(window) == 2 and np.isscalar(window[0]):
        window = [tuple(window)]
    ivs = sorted((float(a), float(b)) for a, b in window)
    for a, b in ivs:
        if not a < b:
            raise ValueError(f"empty window interval [{a}, {b})")
    for (_, b0), (a1, _) in zip(ivs, ivs[1:]):
        if a1 < b0:
            raise ValueError("window intervals overlap")
    return tuple(ivs)


class CutProjectScheme:
    """Lattice basis ``B`` (2x2, rows are generators) and window ``W``.

    Attributes
    ----------
    det : float
        ``det B``.
    dens : float
        ``1 / |det B|``, the density of the lattice.
    dual_basis : ndarray
        ``inv(B).T``; lattice and dual points pair to integers.
    """

    def __init__(self, basis, window, name="cut-and-project scheme"):
        B = np.asarray(basis, dtype=float)
        if B.shape != (2, 2):
            raise ValueError("basis must be 2x2")
        det = float(np.linalg.det(B))
        if abs(det) < 1e-12 * max(1.0, float(np.max(np.abs(B))) ** 2):
            raise DegenerateBasis(f"basis {B.tolist()} has determinant {det:g}")
        self.basis = B
        self.window = _intervals(window)
        self.det = det
        self.dens = 1.0 / abs(det)
        self.inverse = np.linalg.inv(B)
        self.dual_basis = self.inverse.T
        self.name = name

    @property
    def window_length(self):
        return sum(b - a for a, b in self.window)

    @property
    def window_hull(self):
        return self.window[0][0], self.window[-1][1]

    def in_window(self, y):
        y = np.asarray(y, dtype=float)
        ok = np.zeros(y.shape, dtype=bool)
        for a, b in self.window:
            ok |= (y >= a) & (y < b)
        return ok

    def with_window(self, window):
        return CutProjectScheme(self.basis, window, self.name)

    def __repr__(self):
        return f"CutProjectScheme(basis={self.basis.tolist()}, window={list(self.window)})"


def fibonacci():
    """Fibonacci scheme: rows ``(1, 1)``, ``(φ, φ')``; window ``[-1, φ - 1)``."""
    return CutProjectScheme([[1.0, 1.0], [PHI, PHI_CONJ]], [(-1.0, PHI - 1.0)], "Fibonacci")


def identity_scheme(window=(-0.5, 0.5)):
    """Trivial scheme ``B = I``: the model set is ``Z`` when ``0 ∈ W ⊂ (-1, 1)``."""
    return CutProjectScheme(np.eye(2), [window], "identity")


def enumerate_lattice(basis, x_range, y_range):
    """Lattice points ``c B`` with ``x ∈ [x0, x1]`` and ``y ∈ [y0, y1]``.

    The range of the second coefficient comes from mapping the corners of the
    box through ``inv(B)``; for each such coefficient the first one is bounded
    by solving both linear constraints. Returns ``(coeffs, points)``.
    """
    B = np.asarray(basis, dtype=float)
    inv = np.linalg.inv(B)
    x0, x1 = map(float, x_range)
    y0, y1 = map(float, y_range)
    corners = np.array([[x0, y0], [x0, y1], [x1, y0], [x1, y1]]) @ inv
    n_lo = math.floor(corners[:, 1].min() - 1e-9)
    n_hi = math.ceil(corners[:, 1].max() + 1e-9)
    n = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    lo = np.full(n.size, -np.inf)
    hi = np.full(n.size, np.inf)
    for col, (r0, r1) in ((0, (x0, x1)), (1, (y0, y1))):
        b0, b1 = B[0, col], B[1, col]
        if abs(b0) < 1e-15:
            inside = (n * b1 >= r0 - 1e-9) & (n * b1 <= r1 + 1e-9)
            hi = np.where(inside, hi, -np.inf)
            continue
        e0 = (r0 - n * b1) / b0
        e1 = (r1 - n * b1) / b0
        lo = np.maximum(lo, np.minimum(e0, e1))
        hi = np.minimum(hi, np.maximum(e0, e1))
    m_lo = np.ceil(lo - 1e-9)
    m_hi = np.floor(hi + 1e-9)
    counts = np.where(m_hi >= m_lo, m_hi - m_lo + 1, 0).astype(np.int64)
    total = int(counts.sum())
    if total == 0:
        return np.zeros((0, 2), dtype=np.int64), np.zeros((0, 2))
    rep_n = np.repeat(n, counts)
    first = np.repeat(np.where(counts > 0, m_lo, 0).astype(np.int64), counts)
    offset = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    m = first + offset
    coeffs = np.stack([m, rep_n], axis=1)
    pts = coeffs.astype(float) @ B
    keep = ((pts[:, 0] >= x0 - 1e-9) & (pts[:, 0] <= x1 + 1e-9)
            & (pts[:, 1] >= y0 - 1e-9) & (pts[:, 1] <= y1 + 1e-9))
    return coeffs[keep], pts[keep]


def _model_points(cps, x_lo, x_hi):
    a, b = cps.window_hull
    coeffs, pts = enumerate_lattice(cps.basis, (x_lo, x_hi), (a, b))
    keep = cps.in_window(pts[:, 1]) & (pts[:, 0] >= x_lo) & (pts[:, 0] <= x_hi)
    pts = pts[keep]
    order = np.argsort(pts[:, 0], kind="stable")
    return pts[order]


class ModelSet(PointSource):
    """The model set of a scheme as a lazily generated point source.

    ``weight`` (optional) is a function on internal space; the atom at ``x``
    then carries ``weight(x*)`` and the window should cover its support.
    """

    def __init__(self, cps, weight=None, name=None):
        self.cps = cps
        self.weight = weight
        self.name = name or (f"{cps.name} model set" if weight is None
                             else f"{cps.name} weighted model set")
        self._radius = None

    @property
    def discreteness_radius(self):
        if self._radius is None:
            span = min(1e5, max(200.0, 50.0 / (self.cps.dens * self.cps.window_length)))
            x = _model_points(self.cps, -span, span)[:, 0]
            self._radius = float(np.min(np.diff(x))) if x.size > 1 else span
        return self._radius

    def patch(self, lo, hi, origin=0):
        whole, frac = split_origin(origin)
        o = float(whole) + frac
        pts = _model_points(self.cps, o + lo - 1e-9, o + hi + 1e-9)
        local = pts[:, 0] - o
        weights = None if self.weight is None else self.weight(pts[:, 1])
        return self._finish(local, lo, hi, weights)

    @property
    def max_weight(self):
        if self.weight is None:
            return 1.0
        a, b = self.cps.window_hull
        return float(np.max(np.abs(self.weight(np.linspace(a, b, 1001)))))

    @property
    def real_weights(self):
        return True


def generate_model_set(cps, phys_region, pad=0.0):
    """Atoms of the model set with physical coordinate in ``phys_region ± pad``.

    The comb's discreteness radius is the smallest gap found.
    """
    lo, hi = float(phys_region[0]) - pad, float(phys_region[1]) + pad
    pts = _model_points(cps, lo, hi)
    x = pts[:, 0]
    radius = float(np.min(np.diff(x))) if x.size > 1 else None
    from .windows import BoxWindow
    return WeightedDiracComb(x, np.ones(x.size), BoxWindow.interval(lo, hi), radius)


def window_ft(W, y):
    """``∫_W exp(2πi y u) du`` for a finite union of intervals (``|W|`` at ``y = 0``)."""
    return complex(pairwise_sum(np.array([exp_integral(y, a, b) for a, b in _intervals(W)])))


def window_overlap(W, y):
    """``|W ∩ (y + W)|``, i.e. ``(1_W ∗ 1~_W)(y)``."""
    total = 0.0
    for a0, b0 in _intervals(W):
        for a1, b1 in _intervals(W):
            total += max(0.0, min(b0, b1 + y) - max(a0, a1 + y))
    return total


def density_check(cps, fam, n_range, reference_window=None, tol=5e-3):
    """Density of the model set along ``fam`` against ``dens(L) |W_ref|``.

    ``maximal`` is true iff the estimates converge to the closed form within
    ``tol``. ``reference_window`` defaults to the scheme's own window.
    """
    from .averaging import mean_along

    ref = cps.window if reference_window is None else _intervals(reference_window)
    closed = cps.dens * sum(b - a for a, b in ref)
    report = mean_along(ModelSet(cps), fam, n_range)
    est = float(np.real(report.value))
    return {"report": report, "dens_estimate": est, "dens_closed": closed,
            "maximal": bool(report.status == "converged" and abs(est - closed) < tol)}


def bragg_spectrum(cps, k_max, intensity_floor=1e-4):
    """Closed-form Bragg peaks with ``|k| <= k_max`` and intensity above the floor.

    Dual points ``(k, κ)`` give ``a_k = dens(L) · window_ft(W, -κ)``; dual
    points sharing a physical ``k`` (within match_tol) are summed. Internal
    frequencies are enumerated up to ``|κ| <= J dens / (π sqrt(floor))``
    (``J`` = number of window intervals), beyond which ``|a_k|^2`` cannot
    reach the floor.
    """
    from .spectrum import SpectrumRow, SpectrumTable

    if not intensity_floor > 0:
        raise ValueError("intensity_floor must be positive")
    kappa_max = len(cps.window) * cps.dens / (math.pi * math.sqrt(intensity_floor))
    _, dual = enumerate_lattice(cps.dual_basis, (-k_max, k_max), (-kappa_max, kappa_max))
    a_vals = np.array([cps.dens * window_ft(cps.window, -kap) for kap in dual[:, 1]])
    order = np.argsort(dual[:, 0], kind="stable")
    ks, a_vals = dual[order, 0], a_vals[order]
    rows = []
    if ks.size:
        starts = np.flatnonzero(np.concatenate(([True], np.diff(ks) > MATCH_TOL)))
        ends = np.append(starts[1:], ks.size)
        for s, e in zip(starts, ends):
            a = complex(pairwise_sum(a_vals[s:e]))
            inten = abs(a) ** 2
            if inten >= intensity_floor:
                rows.append(SpectrumRow(float(ks[s]), a, inten, 0.0, "closed-form"))
    return SpectrumTable(rows, 1e-2, f"Bragg spectrum of {cps.name}",
                         {"k_max": k_max, "intensity_floor": intensity_floor,
                          "kappa_max": kappa_max})


def dual_point(cps, k, tol=MATCH_TOL, kappa_bound=None):
    """Internal coordinate ``κ`` of the dual point above physical frequency ``k``."""
    return _lift(cps.dual_basis, k, tol, kappa_bound or 100.0)


def _lift(B, x, tol, y_bound):
    inv = np.linalg.inv(B)
    # c(y) = (x, y) inv = x inv[0] + y inv[1]; both coefficients must be integers
    r0, r1 = inv[0], inv[1]
    col = 0 if abs(r1[0]) >= abs(r1[1]) else 1
    other = 1 - col
    if abs(r1[col]) < 1e-15:
        raise NotALatticePoint("internal coordinate is not determined by this basis")
    j_a = x * r0[col] - y_bound * abs(r1[col])
    j_b = x * r0[col] + y_bound * abs(r1[col])
    j = np.arange(math.floor(min(j_a, j_b)), math.ceil(max(j_a, j_b)) + 1)
    y = (j - x * r0[col]) / r1[col]
    c_other = x * r0[other] + y * r1[other]
    cand = []
    for yi, cj, co in zip(y, j, c_other):
        c = np.zeros(2)
        c[col], c[other] = cj, np.round(co)
        p = c @ B
        if abs(p[0] - x) <= tol and abs(yi) <= y_bound:
            cand.append((abs(p[1]), p[1]))
    if not cand:
        raise NotALatticePoint(f"{x!r} is not the physical coordinate of a lattice point")
    return min(cand)[1]


def star_map(cps, x, tol=MATCH_TOL, y_bound=None):
    """``x*`` for the lattice point whose physical coordinate is ``x``.

    Physical projection is injective, but only lattice points with moderate
    internal coordinate are searched (``|x*| <= y_bound``, default 100 window
    lengths); the one with the smallest ``|x*|`` is returned.
    """
    if y_bound is None:
        a, b = cps.window_hull
        y_bound = 100.0 * max(1.0, b - a, abs(a), abs(b))
    return _lift(cps.basis, float(x), tol, y_bound)


def return_vectors(cps, t_max, t_min=0.0):
    """Physical coordinates in ``[t_min, t_max]`` of lattice points with ``x* ∈ W - W``.

    Only these translations can map a point of the model set onto another.
    """
    a, b = cps.window_hull
    span = b - a
    _, pts = enumerate_lattice(cps.basis, (t_min, t_max), (-span, span))
    inside = np.abs(pts[:, 1]) < span
    return np.sort(pts[inside, 0])
