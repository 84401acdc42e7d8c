"""Finite weighted Dirac combs and their plain-text file format."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import RegionUnderflow
from .windows import BoxWindow

#: Two points closer than this in the max-norm are the same point.
MATCH_TOL = 1e-9


def _as_points(points, dim=None):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        pts = pts.reshape(-1, 1) if dim in (None, 1) else pts.reshape(-1, dim)
    if dim is not None and pts.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got {pts.shape[1]}")
    return pts


@dataclass(frozen=True, eq=False)
class WeightedDiracComb:
    """``sum_x w_x delta_x`` over finitely many points of R^d (d = 1 or 2).

    ``region`` is the closed box on which the comb was generated: every atom
    of the underlying (possibly infinite) measure inside it is present. Reads
    outside it raise :class:`RegionUnderflow`. ``region=None`` declares the comb
    to be the whole measure, so nothing is ever missing.

    Points are stored sorted lexicographically as an ``(N, d)`` array.
    """

    points: np.ndarray
    weights: np.ndarray
    region: BoxWindow = None
    discreteness_radius: float = None

    def __post_init__(self):
        pts = _as_points(self.points)
        if pts.shape[0] == 0:
            dim = pts.shape[1] if pts.ndim == 2 and pts.shape[1] else (
                self.region.dim if self.region is not None else 1)
            pts = np.zeros((0, dim))
        w = np.asarray(self.weights, dtype=complex).reshape(-1)
        if w.shape[0] != pts.shape[0]:
            raise ValueError("one weight per point is required")
        if pts.shape[1] not in (1, 2):
            raise ValueError("only dimensions 1 and 2 are supported")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(w))):
            raise ValueError("points and weights must be finite")
        order = np.lexsort(pts.T[::-1]) if pts.shape[0] else np.zeros(0, dtype=int)
        pts = pts[order]
        w = w[order]
        if pts.shape[0] > 1:
            gaps = np.max(np.abs(np.diff(pts, axis=0)), axis=1)
            if pts.shape[1] == 1 and np.any(gaps <= MATCH_TOL):
                raise ValueError("duplicate points within match_tol")
        if self.region is not None and self.region.dim != pts.shape[1]:
            raise ValueError("region dimension differs from point dimension")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    # basic accessors -----------------------------------------------------

    @classmethod
    def from_points(cls, points, weights=None, region=None, discreteness_radius=None,
                    dim=None):
        pts = _as_points(points, dim)
        if weights is None:
            weights = np.ones(pts.shape[0])
        return cls(pts, weights, region, discreteness_radius)

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def x(self):
        """Coordinates of a one-dimensional comb as a flat array."""
        if self.dim != 1:
            raise ValueError("x is only defined for one-dimensional combs")
        return self.points[:, 0]

    def __len__(self):
        return self.points.shape[0]

    @property
    def unit_weights(self):
        return bool(np.all(self.weights == 1))

    @property
    def real_weights(self):
        return bool(np.all(self.weights.imag == 0))

    @property
    def max_weight(self):
        return float(np.max(np.abs(self.weights))) if len(self) else 0.0

    def min_distance(self):
        """Smallest pairwise max-norm distance (``inf`` for fewer than two atoms)."""
        if len(self) < 2:
            return math.inf
        if self.dim == 1:
            return float(np.min(np.diff(self.x)))
        pts = self.points
        best = math.inf
        order = np.argsort(pts[:, 0], kind="stable")
        p = pts[order]
        for j in range(1, len(p)):
            dx = p[j:, 0] - p[:-j, 0]
            if dx.min() >= best:
                break
            d = np.maximum(dx, np.abs(p[j:, 1] - p[:-j, 1]))
            best = min(best, float(d.min()))
        return best

    def check_discreteness(self):
        """True when the declared discreteness radius holds on the stored atoms."""
        if self.discreteness_radius is None:
            return True
        return self.min_distance() >= self.discreteness_radius - MATCH_TOL

    # region bookkeeping --------------------------------------------------

    def require(self, box):
        """Raise :class:`RegionUnderflow` unless ``box`` lies in the generation region."""
        if self.region is None:
            return
        if not self.region.covers(box):
            raise RegionUnderflow(
                f"comb generated on {self.region} but {box} was requested")

    def require_closed(self, lo, hi):
        """One-dimensional check that the closed interval ``[lo, hi]`` was generated."""
        if self.region is None:
            return
        if lo < self.region.lower[0] or hi > self.region.upper[0]:
            raise RegionUnderflow(
                f"comb generated on {self.region} but [{lo:g}, {hi:g}] was requested")

    # point-source protocol -----------------------------------------------

    def patch(self, lo, hi, origin=0.0):
        """Atoms ``x`` with ``origin + lo <= x <= origin + hi``, in coordinates ``x - origin``."""
        if self.dim != 1:
            raise ValueError("patch is defined for one-dimensional combs")
        origin = float(origin)
        lo_abs, hi_abs = origin + lo, origin + hi
        self.require_closed(lo_abs, hi_abs)
        x = self.x
        i0 = np.searchsorted(x, lo_abs, "left")
        i1 = np.searchsorted(x, hi_abs, "right")
        region = BoxWindow.interval(lo, hi) if hi > lo else None
        return WeightedDiracComb(x[i0:i1] - origin, self.weights[i0:i1], region,
                                 self.discreteness_radius)

    def shifted(self, s):
        return translate(self, -np.asarray(s, dtype=float))

    def describe(self):
        return f"finite comb, {len(self)} atoms, d={self.dim}"


def dirac_comb(points, weights=None, region=None, discreteness_radius=None):
    return WeightedDiracComb.from_points(points, weights, region, discreteness_radius)


def translate(mu, t):
    """Shift every atom of ``mu`` by ``t``; weights unchanged."""
    t = np.broadcast_to(np.asarray(t, dtype=float), (mu.dim,))
    region = mu.region.translate(t) if mu.region is not None else None
    return WeightedDiracComb(mu.points + t, mu.weights, region, mu.discreteness_radius)


def restrict(mu, A):
    """Atoms of ``mu`` inside the half-open box ``A``.

    The result is the complete measure ``mu|_A``, so its region is ``None``.
    """
    mu.require(A)
    if mu.dim == 1:
        x = mu.x
        i0 = np.searchsorted(x, A.lower[0], "left")
        i1 = np.searchsorted(x, A.upper[0], "left")
        return WeightedDiracComb(mu.points[i0:i1], mu.weights[i0:i1], None,
                                 mu.discreteness_radius)
    mask = A.contains(mu.points)
    return WeightedDiracComb(mu.points[mask], mu.weights[mask], None,
                             mu.discreteness_radius)


def total_mass(mu, A):
    """``mu(A)`` summed with the pairwise tree."""
    from .summation import pairwise_sum
    return complex(pairwise_sum(restrict(mu, A).weights))


# file format ----------------------------------------------------------------

def write_comb(mu, path):
    """Write ``mu`` in the plain-text comb format.

    The first line is ``dim=<d>``; each atom is ``x_1 .. x_d re(w) im(w)``.
    The generation region and discreteness radius travel as structured
    comments so that a round trip reproduces the comb exactly.
    """
    lines = [f"dim={mu.dim}"]
    if mu.region is not None:
        corners = " ".join(repr(v) for pair in zip(mu.region.lower, mu.region.upper)
                           for v in pair)
        lines.append(f"# region: {corners}")
    if mu.discreteness_radius is not None:
        lines.append(f"# discreteness_radius: {mu.discreteness_radius!r}")
    for p, w in zip(mu.points, mu.weights):
        coords = " ".join(repr(float(v)) for v in p)
        lines.append(f"{coords} {float(w.real)!r} {float(w.imag)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_comb(path):
    """Parse a comb file written by :func:`write_comb` (or by hand)."""
    dim = None
    region = None
    radius = None
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("region:"):
                    vals = [float(v) for v in body.split(":", 1)[1].split()]
                    region = BoxWindow(tuple(vals[0::2]), tuple(vals[1::2]))
                elif body.startswith("discreteness_radius:"):
                    radius = float(body.split(":", 1)[1])
                continue
            if dim is None:
                if not line.startswith("dim="):
                    raise ValueError(f"{path}:{lineno}: expected 'dim=<d>' header")
                dim = int(line[4:])
                continue
            fields = line.split("#", 1)[0].split()
            if len(fields) != dim + 2:
                raise ValueError(f"{path}:{lineno}: expected {dim + 2} columns")
            rows.append([float(v) for v in fields])
    if dim is None:
        raise ValueError(f"{path}: missing 'dim=<d>' header")
    data = np.asarray(rows, dtype=float).reshape(-1, dim + 2)
    pts = data[:, :dim]
    w = data[:, dim] + 1j * data[:, dim + 1]
    return WeightedDiracComb(pts, w, region, radius)
