import numpy as np
import pytest

from diffractkit.comb import dirac_comb
from diffractkit.correlation import autocorrelation, sampled_autocorrelation
from diffractkit.errors import SupportUnderflow
from diffractkit.fixtures import Blocks
from diffractkit.functions import TrigPolynomial, step_function, tent
from diffractkit.model_sets import ModelSet, bragg_spectrum, fibonacci
from diffractkit.spectrum import (boundary_error_check, cpp_check, diffraction_intensity,
                                  fourier_bohr, fourier_bohr_uniform, parseval_check,
                                  peak_scan)


@pytest.mark.parametrize("k, expected", [(0.0, 1.0), (1.0, 1.0), (3.0, 1.0), (0.5, 0.0)])
def test_lattice_coefficients(Z, sym, k, expected):
    r = fourier_bohr(Z, k, sym, 1000)
    assert r.status == "converged" and abs(r.limit) == pytest.approx(expected, abs=1e-9)


def test_irrational_frequency_vanishes(Z, sym):
    r = fourier_bohr(Z, np.sqrt(2.0), sym, 10000)
    assert abs(r.last) < 1e-3


def test_trig_polynomial_coefficients(sym):
    f = TrigPolynomial([0.0, 1.0], [2.0, 3.0])
    # χ_k(t) = exp(-2πikt) and a_k uses exp(+2πikt), so a_k picks the χ_k coefficient
    assert fourier_bohr(f, 1.0, sym, 100).limit == pytest.approx(3.0, abs=1e-9)
    assert fourier_bohr(f, 0.0, sym, 100).limit == pytest.approx(2.0, abs=1e-9)


def test_lattice_is_uniform(Z, sym):
    res = fourier_bohr_uniform(Z, 1.0, sym, 1000, [0.0, 0.3, 7.1])
    assert res["uniform"] and res["spread"] < 1e-9


def test_blocks_are_not_uniform(sym):
    n = 2000
    res = fourier_bohr_uniform(Blocks(), 0.0, sym, n, [0.0, Blocks.probe_shift(n)])
    assert not res["uniform"]


@pytest.mark.parametrize("k, expected", [(0.0, 1.0), (1.0, 1.0), (0.5, 0.0)])
def test_lattice_intensity(Z, sym, k, expected):
    g = autocorrelation(Z, sym, 20000, z_max=50)
    r = diffraction_intensity(g, k)
    assert float(np.real(r.value)) == pytest.approx(expected, abs=2e-3)


def test_intensity_rejects_window_beyond_support(Z, sym):
    g = autocorrelation(Z, sym, 100, z_max=5)
    with pytest.raises(SupportUnderflow):
        diffraction_intensity(g, 0.0, m_range=[10])


def test_step_function_intensity_at_zero(sym):
    # γ of the ramp-step is half of Lebesgue measure, while |M(f)|^2 = 1/4
    g = sampled_autocorrelation(step_function(), sym, 4000, z_max=20.0, step=0.25)
    r = diffraction_intensity(g, 0.0)
    assert float(np.real(r.value)) == pytest.approx(0.5, abs=5e-3)
    a0 = fourier_bohr(step_function(), 0.0, sym, 4000).last
    assert abs(a0) ** 2 == pytest.approx(0.25, abs=1e-3)


def test_cpp_on_lattice(Z, sym):
    table = cpp_check(Z, sym, [0.0, 0.5, 1.0], 20000)
    assert table.verdict == "pass"
    assert "re_a" in table.to_csv().splitlines()[0]


def test_parseval_three_terms(sym):
    f = TrigPolynomial([0.0, 1.0, 2.5], [2.0, 3.0, 1j])
    r = parseval_check(f, sym, [0.0, 1.0, 2.5], 200)
    assert r["mean_sq"] == pytest.approx(14.0, abs=1e-9)
    assert r["sum_sq"] == pytest.approx(14.0, abs=1e-9)
    missing = parseval_check(f, sym, [0.0, 1.0], 200)
    assert missing["deficit"] == pytest.approx(1.0, abs=1e-9)


def test_peak_scan_lattice(Z, sym):
    peaks = peak_scan(Z, sym, (-0.2, 2.2), n=200, threshold=0.5)
    ks = [round(k, 6) for k, _ in peaks]
    assert ks == [0.0, 1.0, 2.0]
    assert all(a == pytest.approx(1.0, abs=1e-9) for _, a in peaks)


def test_peak_scan_fibonacci_matches_bragg(sym):
    cps = fibonacci()
    peaks = peak_scan(ModelSet(cps), sym, (0.2, 2.0), n=3000, threshold=0.3)
    bragg = [r for r in bragg_spectrum(cps, 2.0).rows if 0.2 <= r.k <= 2.0 and abs(r.a) >= 0.3]
    assert len(peaks) == len(bragg) > 0
    for (k, amp), row in zip(peaks, bragg):
        assert k == pytest.approx(row.k, abs=1e-4)
        assert amp == pytest.approx(abs(row.a), abs=2e-3)


def test_peak_scan_empty_comb(sym):
    mu = dirac_comb(np.empty(0), region=None)
    assert peak_scan(mu, sym, (0.0, 1.0), n=10) == []


def test_boundary_error_bound(lam_a, sym):
    rows = boundary_error_check(lam_a, tent(0.5), 0.37, sym, [10, 100, 1000], shift=2.5)
    for n, D, bound in rows:
        assert D <= bound + 1e-9
