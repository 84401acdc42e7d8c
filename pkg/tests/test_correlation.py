import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from diffractkit.comb import dirac_comb
from diffractkit.correlation import (autocorrelation, eberlein_fn, pair_correlation,
                                     sampled_autocorrelation, smoothing_identity)
from diffractkit.errors import NotUniformlyDiscrete
from diffractkit.fixtures import Blocks
from diffractkit.functions import Character, step_function, tent
from diffractkit.windows import VanHoveFamily


def brute_eta(points, weights, lo, hi, z_values):
    """Counting oracle: Σ_{x,y in [lo,hi), x-y=z} w_x conj(w_y) / (hi-lo)."""
    keep = (points >= lo) & (points < hi)
    x, w = points[keep], weights[keep]
    d = np.subtract.outer(x, x)
    prod = np.outer(w, np.conj(w))
    return np.array([prod[np.abs(d - z) < 1e-9].sum() / (hi - lo) for z in z_values])


@pytest.mark.parametrize("n", [10, 37, 200])
def test_lattice_eta_counts(Z, sym, n):
    g = autocorrelation(Z, sym, n, z_max=12)
    for z in range(-12, 13):
        assert g.eta_at(z).real == pytest.approx((2 * n - abs(z)) / (2 * n), abs=1e-12)
    assert len(g) == 25


def test_a_defect_eta_matches_counting(lam_a, sym):
    n = 150
    g = autocorrelation(lam_a, sym, n, z_max=6)
    local = lam_a.patch(-n, n, 0)
    zs, eta = g.atoms()
    oracle = brute_eta(local.x, local.weights, -n, n, zs)
    assert np.allclose(eta, oracle, atol=1e-12)
    assert g.eta_at(0).real == pytest.approx(len(local.x[local.x < n]) / (2 * n))


def test_single_atom():
    mu = dirac_comb([0.25], [2.0], discreteness_radius=1.0)
    g = autocorrelation(mu, VanHoveFamily.symmetric(), 4)
    assert len(g) == 1 and g.eta_at(0.0) == pytest.approx(4.0 / 8.0)


def test_requires_discreteness_radius():
    mu = dirac_comb([0.0, 1.0])
    with pytest.raises(NotUniformlyDiscrete):
        autocorrelation(mu, VanHoveFamily.symmetric(), 4)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-60, 60), min_size=1, max_size=30, unique=True),
       st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                min_size=30, max_size=30))
def test_hermitian_symmetry(pts, ws):
    x = np.sort(np.array(pts, dtype=float))
    mu = dirac_comb(x, np.array(ws[:len(x)]), discreteness_radius=1.0)
    g = autocorrelation(mu, VanHoveFamily.symmetric(), 64, z_max=30)
    for z, e in zip(*g.atoms()):
        assert g.eta_at(-z) == pytest.approx(np.conj(e), abs=1e-12)
    oracle = brute_eta(x, np.array(ws[:len(x)]), -64, 64, g.z)
    assert np.allclose(g.eta, oracle, atol=1e-12)


def test_eta_at_zero_is_density(lam_a, sym):
    g = autocorrelation(lam_a, sym, 20000, z_max=1)
    assert g.eta_at(0).real == pytest.approx(1.0, abs=1e-3)


def test_family_independence_of_lattice_eta(Z):
    vals = [autocorrelation(Z, fam, 5000, z_max=3).eta_at(2).real
            for fam in (VanHoveFamily.symmetric(), VanHoveFamily.skew(2))]
    assert vals == pytest.approx([1.0, 1.0], abs=1e-3)


def test_pair_correlation_lattice(Z, sym):
    assert pair_correlation(Z, 1.0, sym, 1000).limit == pytest.approx(1.0)
    assert pair_correlation(Z, 0.5, sym, 1000).limit == pytest.approx(0.0)


def test_pair_correlation_matches_counting(lam_a, sym):
    r = pair_correlation(lam_a, 2.0, sym, 400)
    n = r.n_values[-1]
    local = lam_a.patch(-n - 5, n + 5, 0).x
    here = local[(local >= -n) & (local < n)]
    count = np.count_nonzero(np.isin(np.round(here - 2.0, 9), np.round(local, 9)))
    assert r.estimates[-1] == pytest.approx(count / (2 * n))


def test_pair_correlation_blocks_density():
    r = pair_correlation(Blocks(), 0.0, VanHoveFamily.symmetric(), 4000)
    g = autocorrelation(Blocks(), VanHoveFamily.symmetric(), 4000, z_max=1)
    assert r.estimates[-1] == pytest.approx(g.eta_at(0).real)


def test_smoothing_identity(lam_a, sym):
    phi = tent(0.4)
    for n in (200, 2000):
        direct, via = smoothing_identity(lam_a, phi, sym, n)
        # the two routes differ only by pairs that straddle the window edge
        assert abs(direct - via.real) <= 4 * (2 * phi.halfwidth) / (2 * n)
        assert abs(via.imag) < 1e-12


@pytest.mark.parametrize("w", [0.3, 1.0, 2.5])
def test_tent_autocorrelation_vs_quadrature(w):
    phi = tent(w)
    for z in np.linspace(-2.2 * w, 2.2 * w, 23):
        lo, hi = max(-w, z - w), min(w, z + w)
        ref = quad(lambda t: phi(t) * phi(t - z), lo, hi, points=[0.0, z])[0] if lo < hi else 0.0
        assert phi.autocorrelation(z) == pytest.approx(ref, abs=1e-10)


def test_eberlein_of_characters(sym):
    k = 0.7
    t = np.array([0.0, 0.3, 1.25])
    vals, reps = eberlein_fn(Character(k), Character(k), sym, 500, t)
    # χ_k(t) = exp(-2πikt), so χ_k ⊛ χ_k = χ_k
    assert np.allclose(vals, np.exp(-2j * np.pi * k * t), atol=1e-3)
    assert all(r.status == "converged" for r in reps)


def test_eberlein_orthogonal_characters(sym):
    vals, _ = eberlein_fn(Character(0.5), Character(1.5), sym, 500, [0.0, 0.4])
    assert np.allclose(vals, 0.0, atol=1e-3)


def test_sampled_autocorrelation_of_step_function(sym):
    f = step_function()
    n, h = 400, 0.5
    g = sampled_autocorrelation(f, sym, n, z_max=2.0, step=h)
    for z, e in zip(g.z, g.eta):
        ref = quad(lambda s: f(s) * f(s - z), -n, n, points=[0.0, 1.0, z, z + 1.0],
                   limit=200)[0] / (2 * n)
        assert e.real / h == pytest.approx(ref, abs=1e-9)
