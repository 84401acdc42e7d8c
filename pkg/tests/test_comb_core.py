import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from diffractkit.comb import dirac_comb, read_comb, restrict, translate, write_comb
from diffractkit.errors import RegionUnderflow
from diffractkit.fixtures import lattice
from diffractkit.functions import smooth, tent, tent_fourier
from diffractkit.windows import BoxWindow, VanHoveFamily, builtin_families


def ints(lo, hi):
    return dirac_comb(np.arange(lo, hi + 1, dtype=float), region=BoxWindow.interval(lo, hi),
                      discreteness_radius=1.0)


def test_translate_single_atom():
    mu = translate(dirac_comb([0.0]), 1.0)
    assert mu.x.tolist() == [1.0]


def test_translate_lattice_patch():
    mu = translate(ints(-5, 5), 1.0)
    assert mu.x.tolist() == list(range(-4, 7))
    assert np.all(mu.weights == 1)


def test_restrict_half_open():
    mu = ints(-10, 10)
    assert restrict(mu, BoxWindow.interval(-2.5, 2.5)).x.tolist() == [-2, -1, 0, 1, 2]
    assert restrict(mu, BoxWindow.interval(0, 3)).x.tolist() == [0, 1, 2]
    assert len(restrict(dirac_comb(mu.x), BoxWindow.interval(20, 30))) == 0


def test_restrict_outside_declared_region_fails():
    with pytest.raises(RegionUnderflow):
        restrict(ints(-10, 10), BoxWindow.interval(20, 30))


def test_restricted_tiles_partition_atoms():
    mu = ints(-10, 10)
    counts = [len(restrict(mu, BoxWindow.interval(a, a + 2))) for a in range(-10, 10, 2)]
    assert sum(counts) == 20


def test_smooth_examples():
    assert smooth(lattice(), tent(1.0), 0.5) == pytest.approx(1.0)
    assert smooth(dirac_comb([0.0], region=BoxWindow.interval(-2, 2)), tent(1.0), 0.0) == 1.0


def test_smooth_region_underflow():
    with pytest.raises(RegionUnderflow):
        smooth(ints(-5, 5), tent(1.0), 4.5)


@given(st.floats(-50, 50))
def test_tent_partition_of_unity(t):
    assert smooth(lattice(), tent(1.0), t) == pytest.approx(1.0, abs=1e-12)


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_smooth_equivariance(s, t):
    mu = ints(-40, 40)
    phi = tent(0.7)
    assert smooth(translate(mu, t), phi, s) == pytest.approx(smooth(mu, phi, s - t), abs=1e-12)


def test_translate_group_law():
    mu = dirac_comb([0.0, 0.3, 2.0], [1, 2j, -1])
    a = translate(translate(mu, 1.5), 2.25)
    b = translate(mu, 3.75)
    assert np.allclose(a.x, b.x) and np.array_equal(a.weights, b.weights)
    back = translate(translate(mu, 1.5), -1.5)
    assert np.allclose(back.x, mu.x)


def test_tent_fourier_closed_values():
    assert tent_fourier(tent(1.0), 0.0) == pytest.approx(1.0)
    assert abs(tent_fourier(tent(1.0), 1.0)) < 1e-15
    assert tent_fourier(tent(0.5), 1.0) == pytest.approx(2 / math.pi ** 2, rel=1e-12)


def _quad_ft(phi, k):
    c, w = float(phi.center[0]), phi.halfwidth
    re = integrate.quad(lambda t: phi(t) * math.cos(2 * math.pi * k * t), c - w, c + w,
                        points=[c], epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    im = integrate.quad(lambda t: phi(t) * math.sin(2 * math.pi * k * t), c - w, c + w,
                        points=[c], epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    return complex(re, im)


def test_tent_fourier_against_quadrature():
    rng = np.random.default_rng(1)
    for phi in (tent(1.0), tent(0.5), tent(0.8, 0.3)):
        for k in rng.uniform(-5, 5, 100):
            exact = _quad_ft(phi, k)
            assert abs(tent_fourier(phi, k) - exact) <= 1e-8 * max(abs(exact), 1e-3)


def test_van_hove_ratio_small():
    K = BoxWindow.interval(-1, 1)
    for fam in builtin_families():
        assert fam.van_hove_ratio(1000, K) < 0.05
        assert fam.van_hove_ratio(10000, K) < fam.van_hove_ratio(100, K)


def test_family_windows():
    assert VanHoveFamily.alternating().window(3).upper[0] == 3
    assert VanHoveFamily.alternating().window(4).upper[0] == 12
    assert VanHoveFamily.quadratic().window(10).upper[0] == 100
    assert VanHoveFamily.skew(2).window(10).lower[0] == -10


def test_comb_file_round_trip(tmp_path):
    mu = dirac_comb([-1.0, 0.1 + 1e-12, 2.5], [1, 0.5 - 2j, 3], region=BoxWindow.interval(-2, 3),
                    discreteness_radius=0.5)
    p = tmp_path / "mu.comb"
    write_comb(mu, p)
    back = read_comb(p)
    assert np.array_equal(back.x, mu.x) and np.array_equal(back.weights, mu.weights)
    assert back.region == mu.region and back.discreteness_radius == 0.5


def test_duplicate_points_rejected():
    with pytest.raises(ValueError):
        dirac_comb([0.0, 1e-12])


@settings(max_examples=30)
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=30, unique=True))
def test_sorted_and_count_preserved(xs):
    xs = sorted(set(round(x, 6) for x in xs))
    mu = dirac_comb(xs[::-1])
    assert np.all(np.diff(mu.x) > 0)
    assert len(translate(mu, 3.3)) == len(mu)
