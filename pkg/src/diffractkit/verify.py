"""Named verification suites: closed-form oracles against measured values.

Each suite returns a list of :class:`Check` rows. The acceptance tests and the
``verify`` subcommand both run these.
"""

import cmath
import csv
import io
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .averaging import (besicovitch_seminorm, uniform_ball_check, weyl_seminorm,
                        window_power_mean)
from .classify import besicovitch_classify, defect_density, mean_ap_delone, mean_ap_meyer
from .convergence import OSCILLATING
from .correlation import autocorrelation, pair_correlation, smoothing_identity
from .fixtures import SQRT2_MINUS_1, Blocks, a_defect, double_sided, lattice
from .functions import SmoothedComb, step_function, tent, tent_fourier
from .model_sets import (PHI, ModelSet, bragg_spectrum, density_check, fibonacci,
                         return_vectors, star_map, window_overlap)
from .spectrum import (boundary_error_check, cpp_check, diffraction_intensity, fourier_bohr,
                       parseval_check, window_coefficient)
from .windows import VanHoveFamily, builtin_families

A_DEF = SQRT2_MINUS_1


@dataclass
class Check:
    """One verification row."""

    name: str
    measured: object
    expected: object
    tol: float
    passed: bool
    runtime: float = 0.0
    detail: str = ""

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag}  {self.name}: measured={_fmt(self.measured)} "
                f"expected={_fmt(self.expected)} tol={self.tol:g} ({self.runtime:.2f} s)")


def _fmt(v):
    if isinstance(v, complex):
        return f"{v.real:.6g}{v.imag:+.6g}j"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


class _Timer:
    elapsed = 0.0


@contextmanager
def timed():
    t = _Timer()
    start = time.perf_counter()
    try:
        yield t
    finally:
        t.elapsed = time.perf_counter() - start


def _close(name, measured, expected, tol, runtime=0.0, detail=""):
    return Check(name, measured, expected, tol, bool(abs(measured - expected) <= tol),
                 runtime, detail)


def _below(name, measured, bound, runtime=0.0, detail=""):
    return Check(name, measured, f"< {bound:g}", bound, bool(measured < bound), runtime, detail)


def _above(name, measured, bound, runtime=0.0, detail=""):
    return Check(name, measured, f"> {bound:g}", bound, bool(measured > bound), runtime, detail)


def _runtime(name, seconds, limit):
    return Check(f"{name} runtime", seconds, f"< {limit:g} s", limit, bool(seconds < limit),
                 seconds)


# criteria ------------------------------------------------------------------------

def criterion_1():
    """Fourier-Bohr coefficients of the a-defect along skewed windows."""
    lam = a_defect(A_DEF)
    rows = []
    with timed() as t_all:
        for b in (1, 2):
            for lam_k in (1, 2):
                with timed() as t:
                    r = fourier_bohr(lam, lam_k, VanHoveFamily.skew(b), 10000)
                exp = (1 + b * cmath.exp(2j * math.pi * lam_k * A_DEF)) / (b + 1)
                rows.append(_close(f"c1 a-defect FB skew b={b} k={lam_k}", complex(r.value),
                                   exp, 2e-2, t.elapsed, r.status))
    rows.append(_runtime("c1", t_all.elapsed, 5.0))
    return rows


def criterion_2():
    """Autocorrelation of the a-defect is the lattice comb."""
    with timed() as t:
        g = autocorrelation(a_defect(A_DEF), VanHoveFamily.symmetric(), 10000, z_max=5)
        worst = max(abs(g.eta_at(z) - 1.0) for z in range(-5, 6))
        z, eta = g.atoms()
        off = np.abs(z - np.round(z)) > 10 * g.cluster_tol
        spurious = float(np.max(np.abs(eta[off]))) if off.any() else 0.0
    return [
        _close("c2 a-defect eta(z)=1 on |z|<=5 (max deviation)", worst, 0.0, 2e-2, t.elapsed),
        _below("c2 a-defect largest off-lattice |eta|", spurious, 2e-2, t.elapsed),
        _runtime("c2", t.elapsed, 30.0),
    ]


def criterion_3():
    """Consistent phase property fails for the a-defect at k=1."""
    with timed() as t:
        tab = cpp_check(a_defect(A_DEF), VanHoveFamily.symmetric(), [1.0], 10000)
    expected = 1.0 - math.cos(math.pi * A_DEF) ** 2
    return [_close("c3 a-defect CPP residual at k=1", tab.rows[0].cpp_residual, expected,
                   2e-2, t.elapsed)]


def criterion_4():
    """No Fourier-Bohr limit along alternating windows: two clusters."""
    with timed() as t:
        r = fourier_bohr(a_defect(A_DEF), 1.0, VanHoveFamily.alternating(), 10000)
    targets = [(1 + 3 * cmath.exp(2j * math.pi * A_DEF)) / 4,
               (1 + cmath.exp(2j * math.pi * A_DEF)) / 2]
    rows = [Check("c4 a-defect FB alternating status", r.status, OSCILLATING, 0.0,
                  r.status == OSCILLATING and len(r.clusters) == 2, t.elapsed)]
    for i, target in enumerate(targets):
        dist = min((abs(complex(c) - target) for c in r.clusters), default=float("inf"))
        rows.append(_close(f"c4 cluster {i + 1} distance to closed form", dist, 0.0, 2e-2,
                           t.elapsed))
    return rows


def criterion_5():
    """Parseval deficit of the smoothed a-defect depends on the window family."""
    f = SmoothedComb(a_defect(A_DEF), tent(0.5))
    freqs = range(-20, 21)
    rows = []
    with timed() as t:
        sym = parseval_check(f, VanHoveFamily.symmetric(), freqs, 10000)["deficit"]
    rows.append(_above("c5 deficit symmetric (integer frequencies)", sym, 1e-2, t.elapsed))
    with timed() as t:
        quad = parseval_check(f, VanHoveFamily.quadratic(), freqs, 100)["deficit"]
    rows.append(_below("c5 deficit quadratic n=100 (integer frequencies)", quad, 2e-2,
                       t.elapsed))
    with timed() as t:
        rec = besicovitch_classify(a_defect(A_DEF), tent(0.5), VanHoveFamily.symmetric(),
                                   n=10000)
    rows.append(_above("c5 classifier deficit symmetric", rec["deficit"], 1e-2, t.elapsed))
    with timed() as t:
        rec = besicovitch_classify(a_defect(A_DEF), tent(0.5), VanHoveFamily.quadratic(),
                                   n=100)
    rows.append(_below("c5 classifier deficit quadratic n=100", rec["deficit"], 2e-2,
                       t.elapsed))
    return rows


def criterion_6():
    """Step function: mean square 1/2, a_0 = 1/2, deficit 1/4."""
    with timed() as t:
        r = parseval_check(step_function(), VanHoveFamily.symmetric(), range(-10, 11), 1000)
    return [
        _close("c6 step mean_sq", r["mean_sq"], 0.5, 1e-2, t.elapsed),
        _close("c6 step a_0", abs(r["coefficients"][0.0]), 0.5, 1e-2, t.elapsed),
        _close("c6 step deficit", r["deficit"], 0.25, 2e-2, t.elapsed),
    ]


def criterion_7():
    """Lattice: CPP holds at 0, 1, 2 and there is no peak at 1/2."""
    Z = lattice()
    with timed() as t:
        tab = cpp_check(Z, VanHoveFamily.symmetric(), [0.0, 1.0, 2.0], 10000)
    rows = [_below(f"c7 lattice CPP residual k={r.k:g}", r.cpp_residual, 1e-2, t.elapsed)
            for r in tab.rows]
    with timed() as t:
        g = autocorrelation(Z, VanHoveFamily.symmetric(), 10000)
        i = diffraction_intensity(g, 0.5)
    rows.append(_below("c7 lattice intensity at k=0.5", abs(float(np.real(i.value))), 1e-2,
                       t.elapsed))
    return rows


def criterion_8():
    """Fibonacci model set: density, Bragg peaks and autocorrelation coefficients."""
    cps = fibonacci()
    fib = ModelSet(cps)
    fam = VanHoveFamily.symmetric()
    rows = []
    with timed() as t_all:
        with timed() as t:
            d = density_check(cps, fam, 10000)
        rows.append(_close("c8 fibonacci density", d["dens_estimate"], PHI / math.sqrt(5),
                           1e-2, t.elapsed))
        with timed() as t:
            peaks = bragg_spectrum(cps, 3.0, 1e-3).top(5)
            for p in peaks:
                a = window_coefficient(fib, p.k, fam.window(10000))
                rows.append(_close(f"c8 fibonacci |a_k|^2 at k={p.k:.6g}", abs(a) ** 2,
                                   p.intensity, 5e-2, t.elapsed))
        with timed() as t:
            g = autocorrelation(fib, fam, 10000, z_max=10)
            zs = g.z[g.z > 1e-9][:10]
            for z in zs:
                exp = cps.dens * window_overlap(cps.window, star_map(cps, z))
                rows.append(_close(f"c8 fibonacci eta at z={z:.6g}", g.eta_at(z).real, exp,
                                   5e-2, t.elapsed))
    rows.append(_runtime("c8", t_all.elapsed, 60.0))
    return rows


def criterion_9():
    """Block comb: small Besicovitch seminorm, large Weyl seminorm."""
    f = SmoothedComb(Blocks(), tent(1.0))
    fam = VanHoveFamily.symmetric()
    n = 2 ** 14
    with timed() as t:
        b = besicovitch_seminorm(f, 1.0, fam, n)
    envelope = 1.0 * math.log2(n + 1) ** 2 / (2 * n)
    rows = [_below("c9 blocks Besicovitch seminorm at n=2^14", float(np.real(b.last)), 0.05,
                   t.elapsed),
            _below("c9 blocks Besicovitch seminorm within envelope",
                   float(np.real(b.last)), envelope, t.elapsed)]
    with timed() as t:
        w_only = weyl_seminorm(f, 1.0, fam, n, shift_grid=[2 ** 14])
        w = weyl_seminorm(f, 1.0, fam, n, shift_grid=[2 ** 14, Blocks.probe_shift(n)])
    rows.append(Check("c9 blocks Weyl estimate with shift 2^14 only (recorded)",
                      float(np.real(w_only.last)), "recorded", 0.0, True, t.elapsed,
                      "a window of radius 2^14 cannot sit inside a block near 2^14"))
    rows.append(_above("c9 blocks Weyl estimate on grid {0, 2^14, block probe}",
                       float(np.real(w.last)), 0.5, t.elapsed))
    return rows


def criterion_10():
    """Mean almost periods of the a-defect."""
    lam = a_defect(A_DEF)
    fam = VanHoveFamily.symmetric()
    with timed() as t:
        rec = mean_ap_meyer(lam, 1e-2, fam, (0.0, 20.0), 1.0, n=10000)
        ok = np.array_equal(rec["almost_periods"], np.arange(21.0))
        worst = float(np.max(rec["defect"]))
    rows = [Check("c10 a-defect almost periods = every integer in [0,20]",
                  len(rec["almost_periods"]), 21, 0.0, bool(ok), t.elapsed),
            _below("c10 a-defect largest integer defect density", worst, 1e-2, t.elapsed)]
    with timed() as t:
        d = defect_density(lam, 0.5, fam.window(10000))
    rows.append(_close("c10 a-defect defect density at t=0.5", d, 2.0, 0.1, t.elapsed))
    return rows


def criterion_11():
    """Invariant suites on the fixture set."""
    rows = []
    fam = VanHoveFamily.symmetric()
    fixtures = {"lattice": lattice(), "a-defect": a_defect(A_DEF),
                "fibonacci": ModelSet(fibonacci())}
    phi = tent(0.5)
    with timed() as t_all:
        # FB of a smoothed comb against φ̂ times the comb coefficient
        with timed() as t:
            worst = 0.0
            for mu in fixtures.values():
                f = SmoothedComb(mu, phi)
                for k in (0.0, 0.7236067977499789, 1.0):
                    for n in (1000, 10000):
                        A = fam.window(n)
                        lhs = window_coefficient(f, k, A)
                        rhs = tent_fourier(phi, k) * window_coefficient(mu, k, A)
                        bound = f.sup_bound() * A.boundary_volume(phi.support) / A.volume
                        excess = abs(lhs - rhs) - bound
                        worst = max(worst, excess)
        rows.append(_below("c11 FB-of-convolution identity (excess over boundary term)",
                           worst, 1e-12, t.elapsed))
        with timed() as t:
            worst = -np.inf
            for mu in fixtures.values():
                for k in (0.3, 1.0):
                    for shift in (0.0, 17.25):
                        for n, D, bound in boundary_error_check(mu, phi, k, fam,
                                                                [10, 100, 1000], shift):
                            worst = max(worst, D - bound)
        rows.append(_below("c11 boundary-error inequality (max D - bound)", worst, 1e-9,
                           t.elapsed))
        with timed() as t:
            gap = 0.0
            for name in ("lattice", "a-defect"):
                direct, via = smoothing_identity(fixtures[name], phi, fam, 10000)
                gap = max(gap, abs(direct - via))
        rows.append(_below("c11 smoothing identity |M(|mu*phi|^2) - sum eta (phi*phi~)|",
                           gap, 5e-3, t.elapsed))
        with timed() as t:
            worst = np.inf
            for mu in fixtures.values():
                r = parseval_check(SmoothedComb(mu, phi), fam,
                                   [0.0, 0.4472135954999579, 0.7236067977499789, 1.0,
                                    1.1708203932499368, 2.0], 1000)
                worst = min(worst, r["deficit"])
            worst = min(worst, parseval_check(step_function(), fam, range(-5, 6),
                                              500)["deficit"])
        rows.append(_above("c11 Bessel inequality (smallest deficit)", worst, -1e-9,
                           t.elapsed))
        with timed() as t:
            violations = 0
            for mu in fixtures.values():
                f = SmoothedComb(mu, phi)
                for n in (10, 100, 1000):
                    A = fam.window(n)
                    vals = [window_power_mean(f, A, p) ** (1 / p) for p in (1, 1.5, 2, 3)]
                    violations += sum(a > b * (1 + 1e-12) for a, b in zip(vals, vals[1:]))
        rows.append(Check("c11 seminorm p-monotonicity violations", violations, 0, 0.0,
                          violations == 0, t.elapsed))
        with timed() as t:
            violations = 0
            for mu in list(fixtures.values()) + [Blocks()]:
                f = SmoothedComb(mu, phi)
                b = besicovitch_seminorm(f, 1.0, fam, 1000)
                w = weyl_seminorm(f, 1.0, fam, 1000, shift_grid=[3.5, -250.0, 1000.0])
                violations += sum(np.real(x) > np.real(y) for x, y in
                                  zip(b.estimates, w.estimates))
        rows.append(Check("c11 Besicovitch <= Weyl per n violations", violations, 0, 0.0,
                          violations == 0, t.elapsed))
        with timed() as t:
            rng = np.random.default_rng(0)
            shifts = list(rng.uniform(-1e4, 1e4, 32)) + [0.0, 0.5]
            res = uniform_ball_check(SmoothedComb(lattice(), tent(1.0)), builtin_families(),
                                     shifts, 1.0)
        Ns = {k: v["N"] for k, v in res["families"].items()}
        rows.append(Check("c11 enlarged-ball property (N per family)", Ns, "all N found", 0.0,
                          res["ok"], t.elapsed))
    rows.append(_runtime("c11", t_all.elapsed, 120.0))
    return rows


# suites --------------------------------------------------------------------------------

def nonexistence_suite():
    """Oscillating averages along alternating windows."""
    rows = criterion_4()
    lam = double_sided()
    fam = VanHoveFamily.alternating()
    for z, expected in ((0.0, (0.75, 0.875)), (1.0, (0.5, 0.75))):
        with timed() as t:
            r = pair_correlation(lam, z, fam, 10000)
        got = sorted(float(np.real(c)) for c in r.clusters)
        ok = r.status == OSCILLATING and len(got) == 2 and all(
            abs(g - e) < 2e-3 for g, e in zip(got, expected))
        rows.append(Check(f"{{n,-2n}} eta({z:g}) along alternating windows", got,
                          list(expected), 2e-3, ok, t.elapsed, r.status))
    return rows


def meanap_suite():
    rows = criterion_10()
    with timed() as t:
        rec = mean_ap_delone(lattice(), 0.1, 0.05, VanHoveFamily.symmetric(), (0, 20), 0.25,
                             n=1000)
    rows.append(Check("lattice almost periods are the integers", rec["max_gap"], 1.0, 0.0,
                      np.array_equal(rec["almost_periods"], np.arange(21.0))
                      and rec["max_gap"] == 1.0, t.elapsed))
    cps = fibonacci()
    grid = return_vectors(cps, 50.0)
    with timed() as t:
        rec = mean_ap_meyer(ModelSet(cps), 0.1, VanHoveFamily.symmetric(), grid, n=10000)
    rows.append(Check("fibonacci eps=0.1 almost periods found (max gap recorded)",
                      rec["max_gap"], "non-empty", 0.0, len(rec["almost_periods"]) > 1,
                      t.elapsed))
    with timed() as t:
        rec = mean_ap_meyer(ModelSet(cps), 0.3, VanHoveFamily.symmetric(), grid, n=10000)
    rows.append(Check("fibonacci eps=0.3 max gap on [0,50]", rec["max_gap"], "<= 5", 5.0,
                      rec["max_gap"] <= 5.0, t.elapsed))
    return rows


SUITES = {
    "adefect": lambda: (criterion_1() + criterion_2() + criterion_3() + criterion_4()
                        + criterion_5() + criterion_10()),
    "lattice": criterion_7,
    "stepfunction": criterion_6,
    "fibonacci": criterion_8,
    "weyl": criterion_9,
    "meanap": meanap_suite,
    "nonexistence": nonexistence_suite,
    "invariants": criterion_11,
}
CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def run_suite(name):
    """Rows of a named suite; ``all`` runs every acceptance criterion."""
    if name == "all":
        return [row for crit in CRITERIA for row in crit()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: all, {', '.join(SUITES)}")
    return SUITES[name]()


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "measured", "expected", "tol", "pass", "runtime_s"])
    for r in rows:
        w.writerow([r.name, _fmt(r.measured), _fmt(r.expected), f"{r.tol:g}",
                    "pass" if r.passed else "fail", f"{r.runtime:.3f}"])
    return buf.getvalue()
