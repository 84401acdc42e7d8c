"""Fourier-Bohr coefficients, diffraction intensities and the phase checks built on them.

Convention: ``a_k(μ) = lim (1/|A_n|) Σ_{x ∈ A_n} w_x exp(2πi k·x)`` and, for a
function, ``a_k(f) = lim (1/|A_n|) ∫_{A_n} f(t) exp(2πi k t) dt``.
"""

import csv
import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .averaging import is_measure, resolve_n
from .comb import WeightedDiracComb, restrict
from .convergence import CONVERGED, TAIL, TOL, detect
from .correlation import Z_MAX, autocorrelation
from .errors import SupportUnderflow
from .functions import phase
from .quadrature import QUAD_STEP, integrate_fourier, integrate_power
from .summation import pairwise_sum
from .windows import VanHoveFamily, n_schedule


# windowed coefficients ------------------------------------------------------

def window_coefficient(f, k, A, shift=0, quad_step=QUAD_STEP):
    """``(1/|A|) Σ_{x ∈ shift + A} w_x e^{2πi k·x}`` (or the integral for functions)."""
    if isinstance(f, WeightedDiracComb) and f.dim > 1:
        k = np.asarray(k, dtype=float)
        s = np.broadcast_to(np.asarray(shift, dtype=float), (f.dim,))
        local = restrict(f, A.translate(s))
        ph = np.exp(2j * np.pi * (local.points @ k))
        return complex(pairwise_sum(local.weights * ph)) / A.volume
    k = float(np.atleast_1d(k)[0])
    lo, hi = A.lower[0], A.upper[0]
    if is_measure(f):
        local = f.patch(lo, hi, shift)
        keep = local.x < hi
        s = pairwise_sum(local.weights[keep] * np.exp(2j * np.pi * k * local.x[keep]))
    else:
        s = integrate_fourier(f.recentred(shift), k, lo, hi, quad_step)
    return phase(k, shift) * complex(s) / A.volume


def window_coefficients(f, ks, A, shift=0, quad_step=QUAD_STEP):
    """:func:`window_coefficient` for many 1-d frequencies, sharing one pass over the data."""
    from .quadrature import pieces, pl_fourier_integral

    ks = [float(k) for k in ks]
    lo, hi = A.lower[0], A.upper[0]
    if is_measure(f):
        local = f.patch(lo, hi, shift)
        keep = local.x < hi
        x, w = local.x[keep], local.weights[keep]
        sums = []
        for i in range(0, len(ks), 16):
            ph = np.exp(2j * np.pi * np.outer(ks[i:i + 16], x))
            sums.extend(pairwise_sum(ph * w[None, :], axis=1))
    else:
        g = f.recentred(shift)
        pl = pieces(g, lo, hi)
        if pl is None:
            sums = [integrate_fourier(g, k, lo, hi, quad_step) for k in ks]
        else:
            sums = [pl_fourier_integral(pl[0], pl[1], k) for k in ks]
    return np.array([phase(k, shift) * complex(s) / A.volume for k, s in zip(ks, sums)])


def fourier_bohr_many(f, ks, fam, n_range, shift=0, quad_step=QUAD_STEP, q=TAIL, tol=TOL):
    """One :class:`ConvergenceReport` per frequency in ``ks`` (1-d)."""
    ns = resolve_n(n_range, q)
    table = np.array([window_coefficients(f, ks, fam.window(n), shift, quad_step) for n in ns])
    return [detect(ns, table[:, i], q, tol, label=f"a_{float(k):g} along {fam}")
            for i, k in enumerate(ks)]


def fourier_bohr(mu, k, fam, n_range, shift=0, quad_step=QUAD_STEP, q=TAIL, tol=TOL):
    """Windowed Fourier-Bohr estimates of a comb, point source or function.

    Examples
    --------
    >>> from diffractkit.fixtures import lattice
    >>> r = fourier_bohr(lattice(), 1.0, VanHoveFamily.symmetric(), 200)
    >>> r.status, round(abs(r.limit), 9)
    ('converged', 1.0)
    """
    ns = resolve_n(n_range, q)
    est = [window_coefficient(mu, k, fam.window(n), shift, quad_step) for n in ns]
    return detect(ns, est, q, tol, label=f"a_{_fmt_k(k)} along {fam}")


def _fmt_k(k):
    k = np.atleast_1d(k)
    return ",".join(f"{v:g}" for v in k)


def fourier_bohr_uniform(mu, k, fam, n_range, shift_grid, q=TAIL, tol=TOL):
    """Fourier-Bohr reports for every shift; uniform iff all converge to one value.

    Returns a dict with ``reports`` (one per shift), ``uniform`` and ``spread``
    (largest distance between converged per-shift limits).
    """
    reports = [fourier_bohr(mu, k, fam, n_range, s, q=q, tol=tol) for s in shift_grid]
    limits = [r.limit for r in reports if r.status == CONVERGED]
    all_conv = len(limits) == len(reports)
    if limits:
        v = np.asarray(limits)
        spread = float(np.max(np.abs(v[:, None] - v[None, :])))
    else:
        spread = float("inf")
    return {
        "reports": reports,
        "shifts": list(shift_grid),
        "uniform": bool(all_conv and spread < tol),
        "spread": spread,
        "limit": complex(limits[0]) if all_conv and spread < tol else None,
    }


# diffraction ----------------------------------------------------------------

def diffraction_intensity(gamma, k, fam_B=None, m_range=None, q=TAIL, tol=TOL):
    """``γ̂({k})`` as the Fourier-Bohr coefficient of the autocorrelation comb.

    Estimates ``(1/|B_m|) Σ_{z ∈ B_m} η(z) e^{2πi k z}``. A final value in
    ``(-tol, 0)`` is clamped to 0, with a warning unless it is rounding noise.
    The imaginary part (zero up to rounding by Hermitian symmetry) is dropped.

    Raises
    ------
    SupportUnderflow
        If ``B_m`` reaches beyond the ``z_max`` the autocorrelation was built with.
    """
    if fam_B is None:
        fam_B = VanHoveFamily.symmetric(gamma.dim)
    if m_range is None:
        m_range = n_schedule(int(np.floor(gamma.z_max + 1e-9)), q=q)
    ms = resolve_n(m_range, q)
    for m in ms:
        B = fam_B.window(m)
        if max(max(abs(v) for v in B.lower), max(abs(v) for v in B.upper)) > gamma.z_max + 1e-9:
            raise SupportUnderflow(
                f"B_{m} = {B} exceeds the autocorrelation radius z_max={gamma.z_max:g}")
    est = []
    k_arr = np.atleast_1d(np.asarray(k, dtype=float))
    for m in ms:
        B = fam_B.window(m)
        if gamma.dim == 1:
            keep = (gamma.z >= B.lower[0]) & (gamma.z < B.upper[0])
            ph = np.exp(2j * np.pi * k_arr[0] * gamma.z[keep])
        else:
            keep = B.contains(gamma.z)
            ph = np.exp(2j * np.pi * (gamma.z[keep] @ k_arr))
        est.append(float(np.real(pairwise_sum(gamma.eta[keep] * ph))) / B.volume)
    rep = detect(ms, est, q, tol, label=f"intensity at k={_fmt_k(k)}")
    val = float(np.real(rep.value))
    if -tol < val < 0:
        if val < -1e-12:
            warnings.warn(f"intensity estimate {val:.3g} at k={_fmt_k(k)} clamped to 0")
        rep.clamped_from = val
        if rep.limit is not None:
            rep.limit = 0j
        rep.estimates[-1] = 0j
    return rep


@dataclass
class SpectrumRow:
    k: float
    a: complex
    intensity: float
    cpp_residual: float
    status: str
    a_report: object = None
    intensity_report: object = None

    @property
    def a_sq(self):
        return abs(self.a) ** 2


@dataclass
class SpectrumTable:
    """Rows ``(k, a_k, intensity, cpp_residual, status)``."""

    rows: list
    tol: float = 1e-2
    title: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return "pass" if all(r.cpp_residual < self.tol for r in self.rows) else "fail"

    def top(self, count, key="intensity"):
        return sorted(self.rows, key=lambda r: -getattr(r, key))[:count]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "re_a", "im_a", "intensity", "cpp_residual", "status"])
        for r in self.rows:
            a = complex(r.a)
            w.writerow([repr(float(r.k)), repr(a.real), repr(a.imag), repr(float(r.intensity)),
                        repr(float(r.cpp_residual)), r.status])
        return buf.getvalue()

    def summary(self):
        return {"title": self.title, "verdict": self.verdict, "tol": self.tol,
                "rows": len(self.rows),
                "max_cpp_residual": max((r.cpp_residual for r in self.rows), default=0.0),
                **self.meta}

    def to_json(self):
        return json.dumps(self.summary(), indent=2, sort_keys=True, default=str)


def cpp_check(mu, fam, freqs, n, tol=1e-2, z_max=Z_MAX, m_range=None, q=TAIL,
              conv_tol=TOL):
    """Compare ``γ̂({k})`` with ``|a_k|^2`` at each frequency.

    The autocorrelation is built at ``n``; the Fourier-Bohr coefficients use
    the schedule ending at ``n``. The verdict passes iff every residual is
    below ``tol``.
    """
    gamma = autocorrelation(mu, fam, n, z_max=z_max)
    rows = []
    for k in freqs:
        a_rep = fourier_bohr(mu, k, fam, n, q=q, tol=conv_tol)
        i_rep = diffraction_intensity(gamma, k, m_range=m_range, q=q, tol=conv_tol)
        a = complex(a_rep.value)
        inten = float(np.real(i_rep.value))
        status = a_rep.status if i_rep.status == CONVERGED else i_rep.status
        rows.append(SpectrumRow(float(k), a, inten, abs(inten - abs(a) ** 2), status,
                                a_rep, i_rep))
    return SpectrumTable(rows, tol, f"consistent phase check along {fam}",
                         {"n": int(n), "z_max": float(z_max)})


def parseval_check(f, fam, freq_set, n, quad_step=QUAD_STEP):
    """``mean_sq = (1/|A_n|) ∫_{A_n} |f|^2`` against ``Σ_{k ∈ freq_set} |a_k|^2``.

    ``deficit = mean_sq - sum_sq`` is nonnegative up to rounding (Bessel).

    Examples
    --------
    >>> from diffractkit.functions import TrigPolynomial
    >>> r = parseval_check(TrigPolynomial([0, 1], [2, 3]), VanHoveFamily.symmetric(),
    ...                    [0, 1], 50)
    >>> round(r["mean_sq"], 9), round(r["sum_sq"], 9)
    (13.0, 13.0)
    """
    A = fam.window(n)
    lo, hi = A.lower[0], A.upper[0]
    mean_sq = integrate_power(f, lo, hi, 2.0, quad_step) / A.volume
    coeffs = {}
    for k in freq_set:
        coeffs[float(k)] = integrate_fourier(f, float(k), lo, hi, quad_step) / A.volume
    sum_sq = float(pairwise_sum(np.array([abs(a) ** 2 for a in coeffs.values()])))
    return {"n": int(n), "mean_sq": float(mean_sq), "sum_sq": sum_sq,
            "deficit": float(mean_sq - sum_sq), "coefficients": coeffs}


def peak_scan(mu, fam, k_range, k_step=None, n=1000, threshold=0.5, shift=0, refine=60):
    """Local maxima of ``|a_k|`` at window ``A_n`` above ``threshold``.

    Each grid maximum is refined by ternary search on ``[k - k_step, k + k_step]``.
    Returns a sorted list of ``(k, |a_k|)``.
    """
    A = fam.window(n)
    lo, hi = A.lower[0], A.upper[0]
    local = mu.patch(lo, hi, shift)
    keep = local.x < hi
    x, w = local.x[keep], local.weights[keep]
    if x.size == 0:
        return []
    if k_step is None:
        k_step = 1.0 / (4.0 * A.volume)
    k0, k1 = float(k_range[0]), float(k_range[1])
    grid = np.arange(k0, k1 + 0.5 * k_step, k_step)

    def amp(ks):
        ks = np.atleast_1d(ks)
        out = np.empty(ks.size)
        for i in range(0, ks.size, 256):
            blk = ks[i:i + 256]
            ph = np.exp(2j * np.pi * np.outer(blk, x))
            out[i:i + 256] = np.abs(pairwise_sum(ph * w[None, :], axis=1)) / A.volume
        return out

    vals = amp(grid)
    left = np.concatenate(([-np.inf], vals[:-1]))
    right = np.concatenate((vals[1:], [-np.inf]))
    peaks = np.flatnonzero((vals >= left) & (vals > right) & (vals >= threshold))
    found = []
    for i in peaks:
        a, b = max(k0, grid[i] - k_step), min(k1, grid[i] + k_step)
        for _ in range(refine):
            m1 = a + (b - a) / 3
            m2 = b - (b - a) / 3
            f1, f2 = amp([m1, m2])
            if f1 < f2:
                a = m1
            else:
                b = m2
        k = 0.5 * (a + b)
        found.append((float(k), float(amp(k)[0])))
    return found


def boundary_error_check(mu, phi, k, fam, n_values, shift=0):
    """Rows ``(n, D, bound)`` for the smoothing/boundary inequality.

    ``D = |∫_{s+A_n} (φ∗μ) e^{2πikt} dt - φ̂(k) Σ_{x ∈ s+A_n} w_x e^{2πikx}|`` and
    ``bound = ‖|φ|∗|μ|‖ |∂^K A_n|`` with ``K = supp φ``. The sup norm is the
    maximum over the knots of ``|φ|∗|μ|`` on ``s + A_n + K``, which is all the
    inequality uses.
    """
    from .functions import SmoothedComb, tent_fourier
    from .quadrature import pieces

    f = SmoothedComb(mu, phi, shift)
    abs_f = SmoothedComb(_AbsSource(mu), phi, shift)
    K = phi.support
    rows = []
    for n in n_values:
        A = fam.window(n)
        lo, hi = A.lower[0], A.upper[0]
        integral = integrate_fourier(f, k, lo, hi)
        local = mu.patch(lo, hi, shift)
        keep = local.x < hi
        atoms = pairwise_sum(local.weights[keep] * np.exp(2j * np.pi * k * local.x[keep]))
        D = abs(integral - tent_fourier(phi, k) * atoms)
        knots, vals = pieces(abs_f, lo + K.lower[0], hi + K.upper[0])
        sup = float(np.max(np.abs(vals)))
        rows.append((int(n), float(D), sup * A.boundary_volume(K)))
    return rows


class _AbsSource:
    """The point source with weights replaced by their moduli."""

    def __init__(self, mu):
        self.mu = mu
        self.dim = 1
        self.discreteness_radius = getattr(mu, "discreteness_radius", None)

    def patch(self, lo, hi, origin=0):
        p = self.mu.patch(lo, hi, origin)
        return WeightedDiracComb(p.points, np.abs(p.weights), p.region, p.discreteness_radius)

    def describe(self):
        return "|" + self.mu.describe() + "|"
