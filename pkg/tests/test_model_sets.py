import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from diffractkit.errors import DegenerateBasis, NotALatticePoint
from diffractkit.model_sets import (PHI, PHI_CONJ, CutProjectScheme, ModelSet, bragg_spectrum,
                                    density_check, dual_point, fibonacci, generate_model_set,
                                    identity_scheme, return_vectors, star_map, window_ft)
from diffractkit.windows import VanHoveFamily

FIB_DENSITY = PHI / math.sqrt(5.0)


@pytest.mark.parametrize("W", [[(-1.0, PHI - 1.0)], [(-0.5, 0.0), (0.25, 1.0)]])
def test_window_ft_vs_quadrature(W):
    assert window_ft(W, 0.0) == pytest.approx(sum(b - a for a, b in W))
    for y in np.linspace(-3.0, 3.0, 13):
        re = sum(quad(lambda u: math.cos(2 * math.pi * y * u), a, b)[0] for a, b in W)
        im = sum(quad(lambda u: math.sin(2 * math.pi * y * u), a, b)[0] for a, b in W)
        assert window_ft(W, y) == pytest.approx(complex(re, im), abs=1e-10)


@given(st.integers(-40, 40), st.integers(-40, 40))
def test_star_map_fibonacci(m, n):
    x = m + n * PHI
    assert star_map(fibonacci(), x) == pytest.approx(m + n * PHI_CONJ, abs=1e-7)


def test_star_map_rejects_non_lattice_point():
    with pytest.raises(NotALatticePoint):
        star_map(fibonacci(), 0.5)


def test_identity_scheme_gives_integers():
    mu = generate_model_set(identity_scheme(), (-10, 10))
    assert np.array_equal(mu.x, np.arange(-10.0, 11.0))
    assert mu.discreteness_radius == pytest.approx(1.0)


def test_degenerate_basis():
    with pytest.raises(DegenerateBasis):
        CutProjectScheme([[1.0, 2.0], [2.0, 4.0]], [(0.0, 1.0)])


def test_fibonacci_gaps_and_density():
    x = generate_model_set(fibonacci(), (-500, 500)).x
    gaps = np.unique(np.round(np.diff(x), 9))
    assert np.allclose(gaps, [1.0, PHI])
    assert x.size / 1000 == pytest.approx(FIB_DENSITY, abs=5e-3)


def test_density_check_maximal():
    res = density_check(fibonacci(), VanHoveFamily.symmetric(), 20000)
    assert res["dens_closed"] == pytest.approx(FIB_DENSITY)
    assert res["maximal"]


def test_density_check_against_larger_window():
    # a subwindow gives a model set that is not maximal for the larger window
    sub = fibonacci().with_window([(-1.0, 0.0)])
    res = density_check(sub, VanHoveFamily.symmetric(), 20000,
                        reference_window=(-1.0, PHI - 1.0))
    assert not res["maximal"]
    assert res["dens_estimate"] == pytest.approx(1 / math.sqrt(5.0), abs=5e-3)


def test_tiny_window_is_sparse():
    cps = fibonacci().with_window([(0.0, 1e-3)])
    x = generate_model_set(cps, (-20000, 20000)).x
    expected = 40000 * 1e-3 / math.sqrt(5.0)
    assert abs(x.size - expected) <= 5
    assert ModelSet(cps).discreteness_radius > 50


def test_bragg_spectrum_fibonacci():
    table = bragg_spectrum(fibonacci(), 3.0)
    by_k = {round(r.k, 9): r for r in table.rows}
    assert by_k[0.0].a == pytest.approx(FIB_DENSITY)
    for r in table.rows:
        mirror = by_k[round(-r.k, 9)]
        assert mirror.a == pytest.approx(np.conj(r.a), abs=1e-12)
        assert r.intensity >= 1e-4
    cps = fibonacci()
    for r in table.rows:
        kappa = dual_point(cps, r.k)
        assert r.a == pytest.approx(cps.dens * window_ft(cps.window, -kappa), abs=1e-12)


def test_bragg_matches_window_average():
    cps = fibonacci()
    x = generate_model_set(cps, (-5000, 5000)).x
    x = x[x < 5000]
    for r in bragg_spectrum(cps, 1.5, intensity_floor=0.05).rows:
        est = np.sum(np.exp(2j * np.pi * r.k * x)) / 10000
        assert est == pytest.approx(r.a, abs=2e-3)


def test_return_vectors():
    t = return_vectors(fibonacci(), 5.0)
    for v in (0.0, 1.0, PHI, 1.0 + PHI):
        assert np.min(np.abs(t - v)) < 1e-9
