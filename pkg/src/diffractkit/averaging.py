"""Means along van Hove families and the Besicovitch / Weyl seminorms.

Functions are averaged by integration over ``A_n`` (exactly for piecewise
linear integrands, by composite midpoint otherwise); measures are averaged
by their mass ``μ(A_n) / |A_n|``.
"""

import numpy as np

from .convergence import TAIL, TOL, detect
from .comb import WeightedDiracComb, restrict
from .functions import Function
from .quadrature import QUAD_STEP, integrate, integrate_power
from .summation import pairwise_sum
from .windows import BoxWindow, n_schedule


def resolve_n(n_range, q=TAIL):
    """An explicit list of ``n`` stays as is; a single integer becomes :func:`n_schedule`."""
    if isinstance(n_range, (int, np.integer)):
        return n_schedule(int(n_range), q=q)
    values = [int(n) for n in n_range]
    if not values or any(n < 1 for n in values):
        raise ValueError("n_range must contain positive integers")
    return values


def is_measure(obj):
    return not isinstance(obj, Function) and hasattr(obj, "patch")


def window_mass(mu, A, shift=0):
    """``μ(shift + A)`` for a half-open box ``A`` (pairwise sum of weights)."""
    if isinstance(mu, WeightedDiracComb) and mu.dim > 1:
        shifted = A.translate(np.broadcast_to(np.asarray(shift, dtype=float), (A.dim,)))
        return complex(pairwise_sum(restrict(mu, shifted).weights))
    lo, hi = A.lower[0], A.upper[0]
    local = mu.patch(lo, hi, shift)
    w = local.weights[local.x < hi]
    return complex(pairwise_sum(w))


def window_mean(f, A, shift=0, quad_step=QUAD_STEP):
    """Average of ``f`` over ``shift + A``; mass per volume for measures."""
    if is_measure(f):
        return window_mass(f, A, shift) / A.volume
    g = f.recentred(shift)
    return integrate(g, A.lower[0], A.upper[0], quad_step) / A.volume


def window_power_mean(f, A, p, shift=0, quad_step=QUAD_STEP):
    """``(1/|A|) ∫_{shift + A} |f|^p``."""
    g = f.recentred(shift)
    return integrate_power(g, A.lower[0], A.upper[0], p, quad_step) / A.volume


def mean_along(f, fam, n_range, quad_step=QUAD_STEP, shift=0, q=TAIL, tol=TOL):
    """Means of ``f`` (function or measure) over ``shift + A_n``.

    Examples
    --------
    >>> from diffractkit.functions import Constant
    >>> from diffractkit.windows import VanHoveFamily
    >>> r = mean_along(Constant(1.0), VanHoveFamily.symmetric(), 100)
    >>> r.status, round(r.limit.real, 12)
    ('converged', 1.0)
    """
    ns = resolve_n(n_range, q)
    est = [window_mean(f, fam.window(n), shift, quad_step) for n in ns]
    return detect(ns, est, q, tol, label=f"mean along {fam}")


def besicovitch_seminorm(f, p, fam, n_range, quad_step=QUAD_STEP, q=TAIL, tol=TOL):
    """``(M̄(|f|^p))^{1/p}`` estimated as ``((1/|A_n|) ∫_{A_n} |f|^p)^{1/p}``.

    The reported upper limit is ``report.limsup`` (largest cluster when the
    estimates oscillate).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    ns = resolve_n(n_range, q)
    est = [window_power_mean(f, fam.window(n), p, 0, quad_step) ** (1.0 / p) for n in ns]
    return detect(ns, est, q, tol, label=f"besicovitch p={p:g} along {fam}")


def default_shift_grid(n_max, period_hint=1.0, count=64, seed=0):
    """``count`` equispaced shifts in ``[0, period_hint)`` and ``count`` seeded uniform
    shifts in ``[-n_max/2, n_max/2]``. Always contains 0."""
    rng = np.random.default_rng(seed)
    even = np.linspace(0.0, period_hint, count, endpoint=False)
    rand = rng.uniform(-0.5 * n_max, 0.5 * n_max, count)
    return [float(s) for s in even] + [float(s) for s in rand]


def weyl_seminorm(f, p, fam, n_range, shift_grid=None, quad_step=QUAD_STEP, q=TAIL,
                  tol=TOL, seed=0):
    """``sup_s ((1/|A_n|) ∫_{s + A_n} |f|^p)^{1/p}`` over a finite shift grid.

    The supremum over all of the line is out of reach; the grid value is a
    lower bound for it. Shift 0 is always included, so each estimate is at
    least the Besicovitch estimate for the same ``n``. The shift attaining the
    maximum at each ``n`` is kept in ``report.argmax_shifts``.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    ns = resolve_n(n_range, q)
    if shift_grid is None:
        shift_grid = default_shift_grid(max(ns), seed=seed)
    shifts = [0] + [s for s in shift_grid if not (isinstance(s, (int, float)) and s == 0)]
    est, arg = [], []
    for n in ns:
        A = fam.window(n)
        vals = [window_power_mean(f, A, p, s, quad_step) for s in shifts]
        i = int(np.argmax(vals))
        est.append(vals[i] ** (1.0 / p))
        arg.append(shifts[i])
    report = detect(ns, est, q, tol, label=f"weyl p={p:g} along {fam}")
    report.argmax_shifts = arg
    return report


def amenability_check(f, families, shift_grid=(0.0,), n_range=1000, quad_step=QUAD_STEP,
                      q=TAIL, tol=TOL):
    """Do the shifted means of ``f`` exist along every family and agree?

    Returns a dict with ``amenable``, ``limit`` (common value or ``None``) and
    ``per_family_limits`` mapping each family description to its per-shift
    limits (``None`` where a mean failed to converge).
    """
    per_family = {}
    reports = {}
    values = []
    ok = True
    for fam in families:
        lims = []
        for s in shift_grid:
            r = mean_along(f, fam, n_range, quad_step, s, q, tol)
            reports[(str(fam), s)] = r
            if r.status == "converged":
                lims.append(r.limit)
                values.append(r.limit)
            else:
                lims.append(None)
                ok = False
        per_family[str(fam)] = lims
    if values:
        v = np.asarray(values)
        spread = float(np.max(np.abs(v[:, None] - v[None, :])))
        ok = ok and spread < tol
    else:
        spread = float("nan")
        ok = False
    return {
        "amenable": bool(ok),
        "limit": complex(values[-1]) if ok else None,
        "spread": spread,
        "per_family_limits": per_family,
        "reports": reports,
    }


def translation_defect(f, t, fam, n_values, p=1.0, quad_step=QUAD_STEP):
    """Per-``n`` rows ``(n, |‖f‖_n - ‖τ_t f‖_n|, bound)`` for the translation estimate.

    ``bound = ‖f‖_∞ (|A_n Δ (t + A_n)| / |A_n|)^{1/p}``, with ``‖f‖_∞`` taken
    from ``f.sup_bound()``.
    """
    sup = f.sup_bound()
    rows = []
    for n in n_values:
        A = fam.window(n)
        a = window_power_mean(f, A, p, 0, quad_step) ** (1.0 / p)
        b = window_power_mean(f, A, p, -t, quad_step) ** (1.0 / p)
        bound = sup * (A.symmetric_difference_volume(t) / A.volume) ** (1.0 / p)
        rows.append((int(n), abs(a - b), bound))
    return rows


def uniform_ball_check(f, families, shift_grid, target, base=None, eps0=0.01, eps=0.02,
                       n_values=None, quad_step=QUAD_STEP):
    """Shifted averages over a fixed box, then over every family.

    First all ``s + base`` averages must lie within ``eps0`` of ``target``.
    Then, for each family, ``N`` is the smallest tested ``n`` from which on
    every shifted ``A_n`` average stays within ``eps`` of ``target``.
    """
    if base is None:
        base = BoxWindow.interval(0.0, 1.0)
    if n_values is None:
        n_values = [1, 2, 4, 8, 16, 32, 64, 128]
    base_dev = max(abs(window_mean(f, base, s, quad_step) - target) for s in shift_grid)
    result = {"base_max_deviation": float(base_dev), "base_ok": bool(base_dev < eps0),
              "families": {}}
    all_ok = result["base_ok"]
    for fam in families:
        devs = [max(abs(window_mean(f, fam.window(n), s, quad_step) - target)
                    for s in shift_grid) for n in n_values]
        N = None
        for i in range(len(n_values)):
            if all(d < eps for d in devs[i:]):
                N = int(n_values[i])
                break
        result["families"][str(fam)] = {"N": N, "max_deviation": [float(d) for d in devs]}
        all_ok = all_ok and N is not None
    result["ok"] = bool(all_ok)
    return result
