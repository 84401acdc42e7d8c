"""Eberlein convolutions: autocorrelation of combs and of bounded functions."""

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .averaging import resolve_n
from .comb import MATCH_TOL, WeightedDiracComb, restrict
from .convergence import TAIL, TOL, detect
from .errors import NotUniformlyDiscrete
from .functions import Function, TrigPolynomial, exp_integral_grid
from .quadrature import QUAD_STEP, integrate_product
from .summation import pairwise_sum, segment_sums
from .windows import BoxWindow

CLUSTER_TOL = 1e-6
Z_MAX = 50.0


@dataclass
class Autocorrelation:
    """Finite-``n`` autocorrelation ``γ_n = Σ_z η(z) δ_z`` on ``|z| <= z_max``.

    ``z`` has shape ``(M,)`` in one dimension and ``(M, d)`` otherwise, sorted.
    ``kind`` is ``"atomic"`` for comb autocorrelations and ``"sampled"`` when
    ``η`` holds Riemann weights ``γ(z) h`` of an absolutely continuous
    autocorrelation on a grid of spacing ``h``.
    """

    z: np.ndarray
    eta: np.ndarray
    z_max: float
    n: int = None
    family: str = ""
    cluster_tol: float = CLUSTER_TOL
    window: BoxWindow = None
    boundary_loss: float = 0.0
    kind: str = "atomic"
    source: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def dim(self):
        return 1 if self.z.ndim == 1 else self.z.shape[1]

    def __len__(self):
        return self.z.shape[0]

    def eta_at(self, z, tol=None):
        """Coefficient of the atom at ``z`` (0 if there is none within ``tol``)."""
        tol = 10 * self.cluster_tol if tol is None else tol
        if self.dim == 1:
            i = np.searchsorted(self.z, z - tol, "left")
            if i < len(self.z) and abs(self.z[i] - z) <= tol:
                return complex(self.eta[i])
            return 0j
        d = np.max(np.abs(self.z - np.asarray(z, dtype=float)), axis=1)
        i = int(np.argmin(d)) if len(d) else -1
        return complex(self.eta[i]) if i >= 0 and d[i] <= tol else 0j

    def atoms(self, tol=None):
        """``(z, eta)`` pairs with ``|eta| > tol`` (all atoms when ``tol`` is None)."""
        if tol is None:
            return self.z, self.eta
        keep = np.abs(self.eta) > tol
        return self.z[keep], self.eta[keep]

    def as_comb(self):
        pts = self.z.reshape(len(self), -1)
        lo = (-self.z_max,) * pts.shape[1]
        hi = (self.z_max,) * pts.shape[1]
        return WeightedDiracComb(pts, self.eta, BoxWindow(lo, hi))

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        pts = self.z.reshape(len(self), -1)
        w.writerow([f"z_{i + 1}" for i in range(pts.shape[1])] + ["re_eta", "im_eta"])
        for p, e in zip(pts, self.eta):
            w.writerow([repr(float(v)) for v in p] + [repr(float(e.real)), repr(float(e.imag))])
        return buf.getvalue()


def _merge_sorted(d, v, tol):
    """Merge a sorted 1-d difference list into clusters (single link, gap <= tol)."""
    if d.size == 0:
        return d, v.astype(complex)
    starts = np.flatnonzero(np.concatenate(([True], np.diff(d) > tol)))
    counts = np.diff(np.append(starts, d.size))
    z = segment_sums(d, starts) / counts
    eta = segment_sums(v, starts)
    return z, eta


def _pairs_1d(x, w, z_max):
    diffs, vals = [], []
    j = 1
    n = x.size
    while j < n:
        d = x[j:] - x[:-j]
        mask = d <= z_max + MATCH_TOL
        if not mask.any():
            break
        prod = w[j:][mask] * np.conj(w[:-j][mask])
        diffs.append(d[mask])
        vals.append(prod)
        # y - x = -d carries w_y conj(w_x)
        diffs.append(-d[mask])
        vals.append(np.conj(prod))
        j += 1
    diffs.append(np.zeros(1))
    vals.append(np.array([pairwise_sum(np.abs(w) ** 2)], dtype=complex))
    return np.concatenate(diffs), np.concatenate(vals).astype(complex)


def _pairs_2d(pts, w, z_max, tol):
    order = np.argsort(pts[:, 0], kind="stable")
    p, ww = pts[order], w[order]
    diffs, vals = [], []
    n = p.shape[0]
    for j in range(1, n):
        d = p[j:] - p[:-j]
        if d[:, 0].min() > z_max + MATCH_TOL:
            break
        mask = np.max(np.abs(d), axis=1) <= z_max + MATCH_TOL
        prod = ww[j:][mask] * np.conj(ww[:-j][mask])
        diffs += [d[mask], -d[mask]]
        vals += [prod, np.conj(prod)]
    diffs.append(np.zeros((1, 2)))
    vals.append(np.array([pairwise_sum(np.abs(w) ** 2)], dtype=complex))
    d = np.concatenate(diffs)
    v = np.concatenate(vals)
    # grid hashing: differences in the same cell of side tol are one atom
    keys = np.round(d / tol).astype(np.int64)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    order = np.argsort(inverse, kind="stable")
    starts = np.flatnonzero(np.concatenate(([True], np.diff(inverse[order]) != 0)))
    counts = np.diff(np.append(starts, order.size))
    z = np.stack([segment_sums(d[order, i], starts) / counts for i in range(2)], axis=1)
    eta = segment_sums(v[order], starts)
    return z, eta


def autocorrelation(mu, fam, n, cluster_tol=CLUSTER_TOL, z_max=Z_MAX):
    """``γ_n = (1/|A_n|) Σ_{x,y ∈ A_n, |x-y| <= z_max} w_x conj(w_y) δ_{x-y}``.

    Both factors are restricted to ``A_n``. Differences closer than
    ``cluster_tol`` are merged into one atom. The relative volume of the
    ``z_max``-boundary of ``A_n`` (the share of pairs lost at the window edge)
    is kept in ``boundary_loss``.
    """
    if getattr(mu, "discreteness_radius", None) is None:
        raise NotUniformlyDiscrete("autocorrelation needs a declared discreteness radius")
    A = fam.window(n)
    if getattr(mu, "dim", 1) == 1:
        local = mu.patch(A.lower[0], A.upper[0], 0)
        keep = local.x < A.upper[0]
        x, w = local.x[keep], local.weights[keep]
        d, v = _pairs_1d(x, w, z_max)
        order = np.argsort(d, kind="stable")
        z, eta = _merge_sorted(d[order], v[order], cluster_tol)
    else:
        local = restrict(mu, A)
        z, eta = _pairs_2d(local.points, local.weights, z_max, cluster_tol)
        order = np.lexsort(z.T[::-1])
        z, eta = z[order], eta[order]
    K = BoxWindow((-z_max,) * A.dim, (z_max,) * A.dim)
    return Autocorrelation(z, eta / A.volume, float(z_max), int(n), str(fam), cluster_tol,
                           A, A.boundary_volume(K) / A.volume, "atomic",
                           getattr(mu, "describe", lambda: "")())


def pair_correlation(lam, z, fam, n_range, match_tol=MATCH_TOL, q=TAIL, tol=TOL):
    """``♯(Λ ∩ (z + Λ) ∩ A_n) / |A_n|`` across ``n`` for a unit-weight point set."""
    ns = resolve_n(n_range, q)
    est = []
    for n in ns:
        A = fam.window(n)
        lo, hi = A.lower[0], A.upper[0]
        here = mu_points(lam, lo, hi)
        here = here[here < hi]
        there = mu_points(lam, lo - z - 1.0, hi - z + 1.0)
        if there.size == 0 or here.size == 0:
            est.append(0.0)
            continue
        i = np.clip(np.searchsorted(there, here - z), 1, there.size - 1)
        near = np.minimum(np.abs(there[i] - (here - z)), np.abs(there[i - 1] - (here - z)))
        if there.size == 1:
            near = np.abs(there[0] - (here - z))
        est.append(np.count_nonzero(near <= match_tol) / A.volume)
    return detect(ns, est, q, tol, label=f"pair correlation z={z:g} along {fam}")


def mu_points(mu, lo, hi):
    return mu.patch(lo, hi, 0).x


class _Flipped(Function):
    """``s -> g(t - s)``."""

    def __init__(self, g, t):
        self.g, self.t = g, float(t)

    def __call__(self, s):
        return self.g(self.t - np.asarray(s, dtype=float))

    def breakpoints(self, lo, hi):
        bp = self.g.breakpoints(self.t - hi, self.t - lo)
        return None if bp is None else (self.t - np.asarray(bp))[::-1]


def eberlein_estimate(f, g, t, A, quad_step=QUAD_STEP):
    """``(1/|A|) ∫_A f(s) g(t - s) ds``."""
    lo, hi = A.lower[0], A.upper[0]
    if isinstance(f, TrigPolynomial) and isinstance(g, TrigPolynomial):
        # Σ c_j d_l exp(-2πi k_l t) ∫_A exp(2πi (k_l - k_j) s) ds
        dk = g.freqs[None, :] - f.freqs[:, None]
        cc = f.coeffs[:, None] * g.coeffs[None, :] * np.exp(-2j * np.pi * g.freqs[None, :] * t)
        return complex(pairwise_sum((cc * exp_integral_grid(dk, lo, hi)).ravel())) / A.volume
    return integrate_product(f, _Flipped(g, t), lo, hi, quad_step) / A.volume


def eberlein_fn(f, g, fam, n_range, t_grid, quad_step=QUAD_STEP, q=TAIL, tol=TOL):
    """``(f ⊛ g)(t) = M(f · g(t - ·))`` on ``t_grid``.

    Returns ``(values, reports)``: limits (last estimates where undetermined)
    and one :class:`ConvergenceReport` per ``t``.
    """
    ns = resolve_n(n_range, q)
    reports = []
    for t in np.atleast_1d(np.asarray(t_grid, dtype=float)):
        est = [eberlein_estimate(f, g, t, fam.window(n), quad_step) for n in ns]
        reports.append(detect(ns, est, q, tol, label=f"eberlein t={t:g}"))
    values = np.array([complex(r.value) for r in reports])
    return values, reports


def sampled_autocorrelation(f, fam, n, z_max=5.0, step=0.05, quad_step=QUAD_STEP):
    """Autocorrelation of a bounded function sampled on a grid.

    ``γ_n(z) = (1/|A_n|) ∫_{A_n} f(s) conj(f(s - z)) ds`` is an absolutely
    continuous measure; it is stored as the comb ``Σ γ_n(z_i) h δ_{z_i}`` on
    ``z_i = i h``, ``|z_i| <= z_max``, so that window sums approximate
    integrals against Lebesgue measure.
    """
    A = fam.window(n)
    m = int(np.floor(z_max / step + 1e-9))
    z = np.arange(-m, m + 1) * step
    ft = f.reflected()
    vals = np.array([eberlein_estimate(f, ft, zi, A, quad_step) for zi in z])
    return Autocorrelation(z, vals * step, float(m * step), int(n), str(fam), step / 2, A,
                           0.0, "sampled", f.describe(), {"step": step})


def smoothing_identity(mu, phi, fam, n, z_max=None, quad_step=QUAD_STEP):
    """Two routes to ``M(|μ ∗ φ|^2)`` at a fixed ``n``.

    Returns ``(direct, via_autocorrelation)``: the window mean of ``|μ ∗ φ|^2``
    and ``Σ_z η_n(z) (φ ∗ φ~)(z)``.
    """
    from .averaging import window_power_mean
    from .functions import SmoothedComb

    if z_max is None:
        z_max = 2 * phi.halfwidth + 1.0
    A = fam.window(n)
    direct = window_power_mean(SmoothedComb(mu, phi), A, 2.0, 0, quad_step)
    gamma = autocorrelation(mu, fam, n, z_max=z_max)
    via = pairwise_sum(gamma.eta * phi.autocorrelation(gamma.z))
    return float(direct), complex(via)
