"""Integrals over finite intervals.

Piecewise-linear integrands are integrated exactly piece by piece; anything
else falls back to a composite midpoint rule. All reductions use the
pairwise tree from :mod:`diffractkit.summation`.
"""

import math

import numpy as np

from .summation import pairwise_sum

QUAD_STEP = 1e-3

_GL8 = np.polynomial.legendre.leggauss(8)
_GL4 = np.polynomial.legendre.leggauss(4)


def exp_integral(nu, lo, hi):
    """``∫_lo^hi exp(2πi ν t) dt`` in a form that stays accurate as ``ν → 0``."""
    nu = np.asarray(nu, dtype=float)
    length = hi - lo
    mid = 0.5 * (lo + hi)
    return length * np.sinc(nu * length) * np.exp(2j * np.pi * nu * mid)


def _gauss(fn, a, b, rule):
    nodes, wts = rule
    half = 0.5 * (b - a)
    centre = 0.5 * (b + a)
    vals = fn(centre[:, None] + half[:, None] * nodes[None, :])
    return half * (vals @ wts)


def _pl_real_power(a, b, L, p):
    """Exact ``∫|linear|^p`` for real end values ``a``, ``b`` on pieces of length ``L``."""
    out = np.empty_like(L)
    cross = (a * b) < 0
    aa, bb = np.abs(a), np.abs(b)
    same = ~cross
    # one sign on the piece: antiderivative of |u|^p in the end values
    num = bb[same] ** (p + 1) - aa[same] ** (p + 1)
    den = (p + 1) * (bb[same] - aa[same])
    flat = np.abs(bb[same] - aa[same]) <= 1e-14 * np.maximum(1.0, bb[same])
    val = np.where(flat, L[same] * aa[same] ** p,
                   L[same] * num / np.where(flat, 1.0, den))
    out[same] = val
    # sign change: split at the root
    ac, bc, Lc = aa[cross], bb[cross], L[cross]
    out[cross] = Lc * (ac ** (p + 1) + bc ** (p + 1)) / ((p + 1) * (ac + bc))
    return out


def pl_power_integral(knots, values, p=1.0):
    """``∫|f|^p`` for the continuous piecewise-linear ``f`` through ``(knots, values)``."""
    knots = np.asarray(knots, dtype=float)
    values = np.asarray(values)
    if knots.size < 2:
        return 0.0
    L = np.diff(knots)
    a, b = values[:-1], values[1:]
    if np.iscomplexobj(values) and np.any(np.imag(values) != 0):
        if p == 2:
            parts = L * (np.abs(a) ** 2 + np.abs(b) ** 2 + np.real(a * np.conj(b))) / 3.0
        else:
            slope = (b - a) / np.where(L > 0, L, 1.0)

            def integrand(t, a=a, slope=slope, t0=knots[:-1]):
                return np.abs(a[:, None] + slope[:, None] * (t - t0[:, None])) ** p
            parts = _gauss(integrand, knots[:-1], knots[1:], _GL8)
    else:
        parts = _pl_real_power(np.real(a).astype(float), np.real(b).astype(float), L, p)
    return float(pairwise_sum(parts))


def pl_fourier_integral(knots, values, k):
    """``∫ f(t) exp(2πi k t) dt`` for piecewise-linear ``f``, closed form per piece."""
    knots = np.asarray(knots, dtype=float)
    values = np.asarray(values, dtype=complex)
    if knots.size < 2:
        return 0j
    L = np.diff(knots)
    a, b = values[:-1], values[1:]
    if k == 0:
        return complex(pairwise_sum(0.5 * L * (a + b)))
    w = 2 * np.pi * k
    t0, t1 = knots[:-1], knots[1:]
    parts = np.empty(L.shape, dtype=complex)
    small = np.abs(w * L) < 0.1
    big = ~small
    e0 = np.exp(1j * w * t0[big])
    e1 = np.exp(1j * w * t1[big])
    aa, bb, LL = a[big], b[big], L[big]
    parts[big] = (bb * e1 - aa * e0) / (1j * w) + (bb - aa) * (e1 - e0) / (LL * w * w)
    if np.any(small):
        a_s, L_s, t_s = a[small], L[small], t0[small]
        slope = (b[small] - a_s) / L_s

        def integrand(t):
            return (a_s[:, None] + slope[:, None] * (t - t_s[:, None])) * np.exp(1j * w * t)
        parts[small] = _gauss(integrand, t_s, t1[small], _GL4)
    return complex(pairwise_sum(parts))


def pl_product_integral(knots, f_values, g_values):
    """``∫ f g`` where both factors are linear between consecutive knots (Simpson is exact)."""
    knots = np.asarray(knots, dtype=float)
    f = np.asarray(f_values, dtype=complex)
    g = np.asarray(g_values, dtype=complex)
    if knots.size < 2:
        return 0j
    L = np.diff(knots)
    fm = 0.5 * (f[:-1] + f[1:])
    gm = 0.5 * (g[:-1] + g[1:])
    parts = L / 6.0 * (f[:-1] * g[:-1] + 4.0 * fm * gm + f[1:] * g[1:])
    return complex(pairwise_sum(parts))


def midpoint_integral(fn, lo, hi, step=QUAD_STEP, chunk=1 << 16):
    """Composite midpoint rule for a vectorised callable on ``[lo, hi]``."""
    if hi <= lo:
        return 0.0
    count = max(1, math.ceil((hi - lo) / step))
    h = (hi - lo) / count
    partial = []
    for start in range(0, count, chunk):
        idx = np.arange(start, min(count, start + chunk))
        partial.append(pairwise_sum(np.asarray(fn(lo + (idx + 0.5) * h))))
    return pairwise_sum(np.asarray(partial)) * h


# dispatch on function objects ------------------------------------------------

def pieces(f, lo, hi):
    """Knots and values of ``f`` on ``[lo, hi]`` if ``f`` is piecewise linear, else ``None``."""
    bp = f.breakpoints(lo, hi)
    if bp is None:
        return None
    knots = np.concatenate(([lo], np.asarray(bp, dtype=float), [hi]))
    knots = np.unique(knots)
    return knots, np.asarray(f(knots))


def integrate_power(f, lo, hi, p=1.0, quad_step=QUAD_STEP):
    """``∫_lo^hi |f|^p``."""
    closed = f.power_integral(lo, hi, p)
    if closed is not None:
        return float(closed)
    pl = pieces(f, lo, hi)
    if pl is not None:
        return pl_power_integral(pl[0], pl[1], p)
    return float(np.real(midpoint_integral(lambda t: np.abs(f(t)) ** p, lo, hi, quad_step)))


def integrate(f, lo, hi, quad_step=QUAD_STEP):
    """``∫_lo^hi f``."""
    return integrate_fourier(f, 0.0, lo, hi, quad_step)


def integrate_fourier(f, k, lo, hi, quad_step=QUAD_STEP):
    """``∫_lo^hi f(t) exp(2πi k t) dt``."""
    closed = f.fourier_integral(k, lo, hi)
    if closed is not None:
        return complex(closed)
    pl = pieces(f, lo, hi)
    if pl is not None:
        return pl_fourier_integral(pl[0], pl[1], k)
    return complex(midpoint_integral(lambda t: f(t) * np.exp(2j * np.pi * k * t),
                                     lo, hi, quad_step))


def integrate_product(f, g, lo, hi, quad_step=QUAD_STEP):
    """``∫_lo^hi f g``; exact when both are piecewise linear."""
    bf = f.breakpoints(lo, hi)
    bg = g.breakpoints(lo, hi) if bf is not None else None
    if bf is not None and bg is not None:
        knots = np.unique(np.concatenate(([lo, hi], bf, bg)))
        return pl_product_integral(knots, f(knots), g(knots))
    return complex(midpoint_integral(lambda t: f(t) * g(t), lo, hi, quad_step))
