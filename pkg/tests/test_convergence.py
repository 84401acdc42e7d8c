import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from diffractkit.convergence import detect
from diffractkit.summation import pairwise_mean, pairwise_sum, segment_sums

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def test_converged():
    r = detect(range(1, 8), [5, 3, 1.0, 1.0001, 0.9999, 1.0, 1.0002])
    assert r.status == "converged" and r.limit == 1.0002 and r.value == r.limit


def test_oscillating_two_clusters():
    r = detect(range(10), [0, 1, 0, 1, 0, 1, 0, 1, 0, 1], q=6)
    assert r.status == "oscillating"
    assert sorted(c.real for c in r.clusters) == [0.0, 1.0]
    assert r.limsup == 1.0


def test_clusters_too_close_are_undetermined():
    r = detect(range(6), [0, 0.005, 0, 0.005, 0, 0.005], q=6)
    assert r.status == "undetermined" and r.limit is None
    assert r.value == r.last


def test_drift_is_undetermined():
    r = detect(range(10), [1 / math.log(n + 2) for n in range(10)])
    assert r.status == "undetermined"


def test_bad_input():
    with pytest.raises(ValueError):
        detect([1, 2], [1.0])
    with pytest.raises(ValueError):
        detect([], [])
    with pytest.raises(ValueError):
        detect([1], [1.0], tol=0)


def test_report_exports():
    r = detect([10, 20, 40, 80, 160], [1j, 1j, 1j, 1j, 1j], label="x")
    data = json.loads(r.to_json())
    assert data["status"] == "converged" and data["limit"] == [0.0, 1.0]
    assert r.to_csv().splitlines()[1] == "10,0.0,1.0"
    assert str(r).startswith("x: converged")


@given(st.lists(finite, max_size=300))
def test_pairwise_sum_close_to_fsum(xs):
    assert pairwise_sum(np.array(xs, dtype=float)) == pytest.approx(math.fsum(xs), abs=1e-6)


@given(st.lists(finite, min_size=1, max_size=64), st.integers(0, 63))
def test_pairwise_sum_fixed_tree(xs, cut):
    # same data, same order, same result regardless of how the array was built
    a = np.array(xs)
    b = np.concatenate([a[:cut], a[cut:]])
    assert pairwise_sum(a) == pairwise_sum(b)


def test_pairwise_sum_axis_and_empty():
    m = np.arange(12.0).reshape(3, 4)
    assert np.array_equal(pairwise_sum(m, axis=0), m.sum(axis=0))
    assert np.array_equal(pairwise_sum(m, axis=1), m.sum(axis=1))
    assert pairwise_sum(np.array([])) == 0.0
    assert pairwise_mean(np.array([1.0, 2.0, 6.0])) == 3.0


@given(st.lists(finite, min_size=1, max_size=50), st.data())
def test_segment_sums(xs, data):
    n = len(xs)
    cuts = sorted(set(data.draw(st.lists(st.integers(1, max(1, n - 1)), max_size=5))) - {n})
    starts = np.array([0] + cuts)
    out = segment_sums(np.array(xs), starts)
    ref = [math.fsum(s) for s in np.split(np.array(xs), cuts)]
    assert np.allclose(out, ref, atol=1e-6)
