"""Desk-scale almost-periodicity classifiers.

Three levels of evidence are collected for a comb ``μ`` smoothed with a tent
``φ``: mean almost periods of the support (defect-density scans), the
Parseval deficit of ``μ ∗ φ`` along a family (Besicovitch), and uniformity
of means and Fourier-Bohr coefficients over shifted windows (Weyl).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .averaging import default_shift_grid, resolve_n, window_power_mean
from .comb import MATCH_TOL
from .convergence import TAIL, TOL, UNDETERMINED, detect
from .functions import SmoothedComb, tent_fourier
from .spectrum import fourier_bohr_many, peak_scan, window_coefficients

DEFICIT_TOL = 1e-2
FREQ_BUDGET = 64


# mean almost periods ---------------------------------------------------------

def _scan_grid(t_scan, t_step):
    t_scan = np.asarray(t_scan, dtype=float)
    if t_scan.ndim == 1 and t_scan.size == 2 and t_step is not None:
        count = int(np.floor((t_scan[1] - t_scan[0]) / t_step + 1e-9)) + 1
        return t_scan[0] + t_step * np.arange(count)
    return np.sort(np.atleast_1d(t_scan))


def _unmatched(a, b, radius):
    """How many entries of sorted ``a`` have no entry of sorted ``b`` within ``radius``."""
    if a.size == 0:
        return 0
    if b.size == 0:
        return a.size
    i = np.searchsorted(b, a)
    right = np.abs(b[np.minimum(i, b.size - 1)] - a)
    left = np.abs(b[np.maximum(i - 1, 0)] - a)
    return int(np.count_nonzero(np.minimum(left, right) > radius))


def defect_density(lam, t, A, radius=MATCH_TOL):
    """``♯((Λ Δ_U (t + Λ)) ∩ A) / |A|`` with ``U`` the ball of ``radius``.

    A point of either set counts when the other set has no point within
    ``radius`` of it.
    """
    lo, hi = A.lower[0], A.upper[0]
    pad = radius + 1.0
    near = lam.patch(lo - abs(t) - pad, hi + abs(t) + pad, 0).x
    own = near[(near >= lo) & (near < hi)]
    moved = near + t
    moved_in = moved[(moved >= lo) & (moved < hi)]
    return (_unmatched(own, moved, radius) + _unmatched(moved_in, near, radius)) / A.volume


def _period_record(ts, defects, eps, gap_bound, params):
    ts = np.asarray(ts)
    defects = np.asarray(defects)
    periods = ts[defects < eps]
    gaps = np.diff(periods)
    max_gap = float(gaps.max()) if gaps.size else float("inf")
    bound = gap_bound if gap_bound is not None else (
        3.0 * float(gaps.min()) if gaps.size else float("inf"))
    return {
        "t": ts, "defect": defects, "eps": eps,
        "almost_periods": periods,
        "max_gap": max_gap, "gap_bound": bound,
        "relatively_dense_empirically": bool(gaps.size > 0 and max_gap <= bound),
        "scan": (float(ts.min()), float(ts.max())) if ts.size else None,
        **params,
    }


def mean_ap_delone(lam, U_radius, eps, fam, t_scan, t_step=None, n=1000, gap_bound=None):
    """Scan ``t`` for ε-almost periods in the sense of ``Δ_U`` defect density.

    ``t_scan`` is ``(t0, t1)`` together with ``t_step``, or an explicit array.
    ``relatively_dense_empirically`` compares the largest gap between
    consecutive almost periods with ``gap_bound`` (default three times the
    smallest gap); it describes the scanned range only.
    """
    A = fam.window(n)
    ts = _scan_grid(t_scan, t_step)
    defects = [defect_density(lam, t, A, U_radius) for t in ts]
    return _period_record(ts, defects, eps, gap_bound,
                          {"U_radius": U_radius, "n": int(n), "family": str(fam)})


def mean_ap_meyer(lam, eps, fam, t_scan, t_step=None, n=1000, gap_bound=None,
                  match_tol=MATCH_TOL):
    """As :func:`mean_ap_delone` with the exact symmetric difference (points equal within
    ``match_tol``)."""
    rec = mean_ap_delone(lam, match_tol, eps, fam, t_scan, t_step, n, gap_bound)
    rec["U_radius"] = None
    rec["match_tol"] = match_tol
    return rec


def difference_grid(lam, t_max, t_min=0.0, span=None):
    """Distinct differences ``x - y`` in ``[t_min, t_max]`` of atoms near the origin.

    Any Meyer almost period with small defect lies close to one of these.
    """
    span = 2.0 * t_max + 10.0 if span is None else span
    x = lam.patch(-span, span, 0).x
    d = (x[None, :] - x[:, None]).ravel()
    d = np.sort(d[(d >= t_min - MATCH_TOL) & (d <= t_max + MATCH_TOL)])
    if d.size == 0:
        return d
    keep = np.concatenate(([True], np.diff(d) > 1e-7))
    return d[keep]


# Besicovitch --------------------------------------------------------------------

def _dedupe(ks, tol=1e-6):
    out = []
    for k in sorted(ks):
        if not out or abs(k - out[-1]) > tol:
            out.append(k)
    return out


def _suppress_sidelobes(peaks, volume, mass, margin=1.2):
    """Drop peaks explained as side lobes of a stronger kept peak.

    A comb splits into at most two half-windows around any defect, and each
    half spreads a peak over ``|Δk|`` to at most ``mass / (π |Δk| |A|)`` with
    ``mass = Σ|w| / |A|``. A peak is dropped when it is below ``margin`` times
    twice that envelope for some stronger kept peak, or closer than ``3/|A|``
    to one.
    """
    kept = []
    for k, amp in sorted(peaks, key=lambda p: -p[1]):
        shadowed = any(abs(k - j) <= 3.0 / volume
                       or amp <= margin * 2.0 * mass / (np.pi * abs(k - j) * volume)
                       for j, _ in kept)
        if not shadowed:
            kept.append((k, amp))
    return sorted(kept)


def _refine(mu, fam, k, n_from, n_to, iters=25):
    """Sharpen a peak location by ternary search at windows growing 8-fold per stage."""
    n = n_from
    half = 2.0 / fam.window(n).volume
    while n < n_to:
        n = min(n * 8, n_to)
        A = fam.window(n)
        local = mu.patch(A.lower[0], A.upper[0], 0)
        keep = local.x < A.upper[0]
        x, w = local.x[keep], local.weights[keep]

        def amp(kk):
            return abs(np.sum(w * np.exp(2j * np.pi * kk * x)))

        a, b = k - half, k + half
        for _ in range(iters):
            m1 = a + (b - a) / 3
            m2 = b - (b - a) / 3
            if amp(m1) < amp(m2):
                a = m1
            else:
                b = m2
        k = 0.5 * (a + b)
        half = 2.0 / A.volume
    return k


def candidate_frequencies(mu, phi, fam, freq_budget=FREQ_BUDGET, declared=(), k_max=None,
                          n_scan=None, n_refine=None, threshold=0.05):
    """Declared frequencies plus ``peak_scan`` discoveries, ranked by ``|φ̂(k) a_k|``.

    Discovered peaks are scanned at a small window (``|A| ≈ 256``); side lobes
    of stronger peaks are dropped. The ``freq_budget`` best
    are kept and, if ``n_refine`` is given, sharpened at growing windows.
    """
    if k_max is None:
        k_max = 4.0 / phi.halfwidth
    if n_scan is None:
        n_scan = fam.n_for_volume(256.0)
    A = fam.window(n_scan)
    peaks = peak_scan(mu, fam, (-k_max, k_max), None, n_scan, threshold)
    local = mu.patch(A.lower[0], A.upper[0], 0)
    mass = float(np.sum(np.abs(local.weights[local.x < A.upper[0]]))) / A.volume
    found = _suppress_sidelobes(peaks, A.volume, mass)
    ks = _dedupe(list(map(float, declared)) + [k for k, _ in found])
    if not ks:
        return []
    weight = np.abs(window_coefficients(mu, ks, A)) * np.array(
        [abs(tent_fourier(phi, k)) for k in ks])
    order = np.argsort(-weight, kind="stable")[:freq_budget]
    chosen = [ks[i] for i in order]
    if n_refine and n_refine > n_scan:
        fixed = set(map(float, declared))
        chosen = [k if k in fixed else _refine(mu, fam, k, n_scan, n_refine) for k in chosen]
    return sorted(_dedupe(chosen))


def besicovitch_classify(mu, phi, fam, freq_budget=FREQ_BUDGET, n=10000,
                         deficit_tol=DEFICIT_TOL, declared=(), candidates=None,
                         q=TAIL, tol=TOL):
    """Parseval-deficit evidence that ``μ ∗ φ`` is Besicovitch almost periodic along ``fam``.

    Candidate frequencies come from ``candidates`` if given, else from
    :func:`candidate_frequencies`. The record holds the mean-square report,
    the coefficient reports, the deficit at ``n`` and ``passed``.
    """
    f = SmoothedComb(mu, phi)
    if candidates is None:
        # sharpen up to an eighth of the final window: at the final window itself
        # the finite-n maximum of |a_k| drifts off a split peak
        n_refine = fam.n_for_volume(fam.window(n).volume / 8.0)
        candidates = candidate_frequencies(mu, phi, fam, freq_budget, declared,
                                           n_refine=n_refine)
    ns = resolve_n(n, q)
    ms_est = [window_power_mean(f, fam.window(m), 2.0) for m in ns]
    ms_rep = detect(ns, ms_est, q, tol, label=f"mean |f|^2 along {fam}")
    fb = fourier_bohr_many(f, candidates, fam, ns, q=q, tol=tol) if candidates else []
    sum_sq = float(sum(abs(r.last) ** 2 for r in fb))
    deficit = float(np.real(ms_rep.last)) - sum_sq
    statuses = [ms_rep.status] + [r.status for r in fb]
    return {
        "family": str(fam), "n": int(n), "frequencies": list(candidates),
        "mean_sq": float(np.real(ms_rep.last)), "sum_sq": sum_sq, "deficit": deficit,
        "deficit_tol": deficit_tol, "passed": bool(deficit < deficit_tol),
        "undetermined": UNDETERMINED in statuses,
        "mean_sq_report": ms_rep, "fb_reports": fb,
    }


# Weyl ----------------------------------------------------------------------------

@dataclass
class ApVerdict:
    """Evidence tree and a verdict.

    The verdict is one of ``weyl``, ``besicovitch``, ``mean``, ``none`` or ``inconclusive``.
    """

    class_evidence: dict
    verdict: str
    params: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self):
        return json.dumps({"verdict": self.verdict, "evidence": self.class_evidence,
                           "params": self.params, "notes": self.notes},
                          indent=2, sort_keys=True, default=_json_default)

    def table(self):
        ev = self.class_evidence
        lines = [f"verdict: {self.verdict}"]
        m = ev["mean_ap"]
        lines.append(f"  mean        pass={m['passed']}  almost periods={m['count']}"
                     f"  max_gap={m['max_gap']:.4g}")
        b = ev["besicovitch"]
        lines.append(f"  besicovitch pass={b['passed']}  deficits="
                     + ", ".join(f"{d:.3g}" for d in b["deficits"].values()))
        w = ev["weyl"]
        lines.append(f"  weyl        pass={w['passed']}  fb spread={w['fb_spread']:.3g}"
                     f"  mean_sq spread={w['mean_sq_spread']:.3g}")
        return "\n".join(lines)


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    return str(o)


def _uniform_spread(values):
    v = np.asarray(values, dtype=complex)
    return float(np.max(np.abs(v[:, None] - v[None, :]))) if v.size else 0.0


def weyl_classify(mu, phi, families, shift_grid=None, freq_budget=FREQ_BUDGET, n=10000,
                  declared=(), candidates=None, deficit_tol=DEFICIT_TOL, eps=0.3,
                  t_max=50.0, uniform_tol=1e-2, n_fb=None, q=TAIL, tol=TOL):
    """Full evidence tree for ``μ`` smoothed by ``φ``.

    Weyl evidence needs Besicovitch evidence along every family, Fourier-Bohr
    coefficients (top candidates) agreeing across ``shift_grid``, and the mean
    of ``|μ ∗ φ|^2`` agreeing across ``shift_grid``. Any undetermined
    sub-report makes the verdict ``inconclusive``; so does a higher level
    passing while a lower one fails.
    """
    families = list(families)
    fam0 = families[0]
    if shift_grid is None:
        shift_grid = default_shift_grid(n, count=16)
    shifts = [0] + [s for s in shift_grid if not (isinstance(s, (int, float)) and s == 0)]
    undetermined = False

    # mean almost periods of the support
    # differences catch the almost periods of Meyer sets; the regular grid keeps
    # the scan meaningful when the comb near the origin is sparse
    ts = np.union1d(difference_grid(mu, t_max), np.arange(0.0, t_max + 1e-9, 0.25))
    ts = ts[np.concatenate(([True], np.diff(ts) > 1e-7))]
    mrec = mean_ap_meyer(mu, eps, fam0, ts, None, n)
    # one gap is always within three times itself; ask for two
    mean_pass = bool(mrec["relatively_dense_empirically"]) and len(mrec["almost_periods"]) >= 3
    mean_ev = {"passed": mean_pass, "count": int(len(mrec["almost_periods"])),
               "max_gap": mrec["max_gap"], "gap_bound": mrec["gap_bound"],
               "relatively_dense_empirically": mean_pass, "eps": eps,
               "scan": mrec["scan"]}

    # Besicovitch along every family
    bes = {}
    for fam in families:
        rec = besicovitch_classify(mu, phi, fam, freq_budget, n, deficit_tol, declared,
                                   candidates, q, tol)
        if candidates is None:
            candidates = rec["frequencies"]
        bes[str(fam)] = rec
        undetermined |= rec["undetermined"]
    bes_pass_all = all(r["passed"] for r in bes.values())
    bes_pass_first = bes[str(fam0)]["passed"]

    # Weyl: uniform Fourier-Bohr and uniform mean square
    f = SmoothedComb(mu, phi)
    n_fb = n if n_fb is None else n_fb
    ns = resolve_n(n_fb, q)
    top = _top_candidates(mu, phi, fam0, candidates, 8, ns[-1])
    # a frequency error δ turns into a phase error 2π δ s at shift s, so the
    # uniformity test needs the peaks sharpened at the final window
    n_prev = fam0.n_for_volume(fam0.window(ns[-1]).volume / 8.0)
    top = [_refine(mu, fam0, k, n_prev, ns[-1]) for k in top]
    # the density is always tested for uniformity
    if not any(abs(k) < 1e-6 for k in top):
        top = sorted(top + [0.0])
    fb_lims, fb_status = {}, []
    for s in shifts:
        reps = fourier_bohr_many(mu, top, fam0, ns, s, q=q, tol=tol) if top else []
        fb_lims[s] = [r.value for r in reps]
        fb_status += [r.status for r in reps]
    fb_spread = max((_uniform_spread([fb_lims[s][i] for s in shifts])
                     for i in range(len(top))), default=0.0)
    ms_lims, ms_status = [], []
    for s in shifts:
        est = [window_power_mean(f, fam0.window(m), 2.0, s) for m in ns]
        r = detect(ns, est, q, tol)
        ms_lims.append(r.value)
        ms_status.append(r.status)
    ms_spread = _uniform_spread(ms_lims)
    weyl_pass = bool(bes_pass_all and fb_spread < uniform_tol and ms_spread < uniform_tol)
    # a shift whose window average is clearly off the others decides uniformity even
    # when some other shift has not settled
    if UNDETERMINED in fb_status + ms_status and weyl_pass:
        undetermined = True

    evidence = {
        "mean_ap": mean_ev,
        "besicovitch": {"passed": bes_pass_first, "passed_all_families": bes_pass_all,
                        "deficits": {k: r["deficit"] for k, r in bes.items()},
                        "deficit_tol": deficit_tol,
                        "frequencies": len(candidates or [])},
        "weyl": {"passed": weyl_pass, "fb_spread": fb_spread, "mean_sq_spread": ms_spread,
                 "uniform_tol": uniform_tol, "shifts": len(shifts),
                 "fb_frequencies": list(top)},
    }
    notes = []
    levels = [("mean", mean_pass), ("besicovitch", bes_pass_first), ("weyl", weyl_pass)]
    verdict = "none"
    violated = False
    for i, (name, ok) in enumerate(levels):
        if ok:
            if not all(p for _, p in levels[:i]):
                violated = True
            verdict = name
    if violated:
        notes.append("hierarchy violated: a stronger class passed while a weaker one failed")
        verdict = "inconclusive"
    elif undetermined:
        notes.append("a sub-report did not settle (status undetermined)")
        verdict = "inconclusive"
    params = {"families": [str(f) for f in families], "n": int(n), "n_fb": int(ns[-1]),
              "freq_budget": freq_budget, "phi": repr(phi), "eps": eps, "t_max": t_max,
              "shift_count": len(shifts)}
    verdict_obj = ApVerdict(evidence, verdict, params, notes)
    check_hierarchy(verdict_obj)
    return verdict_obj


def _top_candidates(mu, phi, fam, candidates, count, n):
    if not candidates:
        return []
    A = fam.window(n)
    weight = np.abs(window_coefficients(mu, candidates, A)) * np.array(
        [abs(tent_fourier(phi, k)) for k in candidates])
    order = np.argsort(-weight, kind="stable")[:count]
    return sorted(float(candidates[i]) for i in order)


def check_hierarchy(verdict):
    """Raise ``AssertionError`` if a verdict claims a class whose weaker classes failed."""
    ev = verdict.class_evidence
    rank = {"weyl": 3, "besicovitch": 2, "mean": 1, "none": 0}
    if verdict.verdict in rank:
        need = rank[verdict.verdict]
        passed = [ev["mean_ap"]["passed"], ev["besicovitch"]["passed"], ev["weyl"]["passed"]]
        assert all(passed[:need]), "verdict above a failing weaker class"
        if ev["weyl"]["passed"]:
            assert ev["besicovitch"]["passed"], "weyl evidence without besicovitch evidence"
    return True
