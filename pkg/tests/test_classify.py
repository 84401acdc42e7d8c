import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffractkit.classify import (ApVerdict, besicovitch_classify, check_hierarchy,
                                  defect_density, difference_grid, mean_ap_delone,
                                  mean_ap_meyer, weyl_classify)
from diffractkit.fixtures import Blocks
from diffractkit.functions import tent
from diffractkit.model_sets import ModelSet, fibonacci
from diffractkit.windows import VanHoveFamily


def test_lattice_delone_periods(Z, sym):
    rec = mean_ap_delone(Z, 0.1, 0.05, sym, (0.0, 5.0), 0.25, n=1000)
    assert np.array_equal(rec["almost_periods"], np.arange(6.0))
    off = rec["defect"][rec["t"] % 1 != 0]
    assert np.allclose(off, 2.0)
    assert rec["relatively_dense_empirically"] and rec["max_gap"] == 1.0


def test_delone_with_tiny_ball_equals_meyer(lam_a, sym):
    d = mean_ap_delone(lam_a, 1e-9, 0.05, sym, (0.0, 6.0), 0.5, n=2000)
    m = mean_ap_meyer(lam_a, 0.05, sym, (0.0, 6.0), 0.5, n=2000, match_tol=1e-9)
    assert np.array_equal(d["defect"], m["defect"])
    assert np.array_equal(d["almost_periods"], m["almost_periods"])


def test_a_defect_near_periods(lam_a, sym):
    A = sym.window(5000)
    assert defect_density(lam_a, 1.0, A) <= 2.0 / A.volume
    assert defect_density(lam_a, 0.5, A) == pytest.approx(2.0, abs=0.01)


@settings(max_examples=20, deadline=None)
@given(st.floats(1e-3, 1.0), st.floats(1e-3, 1.0))
def test_periods_grow_with_eps(e1, e2):
    lo, hi = sorted((e1, e2))
    lam = ModelSet(fibonacci())
    grid = difference_grid(lam, 12.0)
    small = mean_ap_meyer(lam, lo, VanHoveFamily.symmetric(), grid, n=2000)
    large = mean_ap_meyer(lam, hi, VanHoveFamily.symmetric(), grid, n=2000)
    assert set(small["almost_periods"]) <= set(large["almost_periods"])


@pytest.mark.parametrize("fam", [VanHoveFamily.symmetric(), VanHoveFamily.skew(2),
                                 VanHoveFamily.alternating()], ids=str)
def test_a_defect_mean_periods_along_families(lam_a, fam):
    rec = mean_ap_meyer(lam_a, 1e-2, fam, (0.0, 10.0), 1.0, n=5000)
    assert np.array_equal(rec["almost_periods"], np.arange(11.0))


def test_difference_grid_of_lattice(Z):
    assert np.array_equal(difference_grid(Z, 4.0), np.arange(5.0))


def test_besicovitch_lattice(Z, sym):
    rec = besicovitch_classify(Z, tent(0.5), sym, n=4000)
    assert rec["passed"] and abs(rec["deficit"]) < 1e-3
    ks = np.array(rec["frequencies"])
    assert np.allclose(ks, np.round(ks), atol=1e-4)


def test_besicovitch_declared_frequencies(Z, sym):
    rec = besicovitch_classify(Z, tent(0.5), sym, n=4000, candidates=[0.0, 1.0, -1.0])
    assert sorted(rec["frequencies"]) == [-1.0, 0.0, 1.0]
    # dropping every harmonic above 1 leaves the tail of |φ̂(k)|^2 unaccounted
    assert rec["deficit"] > 0


def _verdict(mean, bes, weyl, verdict):
    ev = {"mean_ap": {"passed": mean, "count": 3, "max_gap": 1.0},
          "besicovitch": {"passed": bes, "deficits": {"sym": 0.0}},
          "weyl": {"passed": weyl, "fb_spread": 0.0, "mean_sq_spread": 0.0}}
    return ApVerdict(ev, verdict)


def test_hierarchy_guard():
    assert check_hierarchy(_verdict(True, True, True, "weyl"))
    with pytest.raises(AssertionError):
        check_hierarchy(_verdict(False, True, True, "weyl"))
    with pytest.raises(AssertionError):
        check_hierarchy(_verdict(True, False, True, "mean"))
    assert check_hierarchy(_verdict(False, True, False, "inconclusive"))


def test_verdict_json_and_table():
    v = _verdict(True, True, False, "besicovitch")
    assert json.loads(v.to_json())["verdict"] == "besicovitch"
    assert v.table().splitlines()[0] == "verdict: besicovitch"


@pytest.mark.slow
def test_weyl_verdict_lattice(Z):
    v = weyl_classify(Z, tent(0.5), [VanHoveFamily.symmetric()])
    assert v.verdict == "weyl", v.table()


@pytest.mark.slow
def test_weyl_verdict_fibonacci():
    v = weyl_classify(ModelSet(fibonacci()), tent(0.5), [VanHoveFamily.symmetric()])
    assert v.verdict == "weyl", v.table()


@pytest.mark.slow
def test_blocks_are_besicovitch_but_not_weyl():
    n = 10000
    v = weyl_classify(Blocks(), tent(0.5), [VanHoveFamily.symmetric()],
                      shift_grid=[2 ** 14, Blocks.probe_shift(n)], n=n)
    assert v.verdict == "besicovitch", v.table()
    assert v.class_evidence["weyl"]["mean_sq_spread"] > 0.1
