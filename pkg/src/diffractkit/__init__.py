"""Diffraction and almost-periodicity diagnostics for point measures."""

from .averaging import (amenability_check, besicovitch_seminorm, mean_along,
                        translation_defect, uniform_ball_check, weyl_seminorm)
from .classify import (ApVerdict, besicovitch_classify, mean_ap_delone, mean_ap_meyer,
                       weyl_classify)
from .comb import WeightedDiracComb, dirac_comb, read_comb, restrict, translate, write_comb
from .convergence import ConvergenceReport
from .correlation import (Autocorrelation, autocorrelation, eberlein_fn, pair_correlation,
                          sampled_autocorrelation, smoothing_identity)
from .errors import (ConfigError, DegenerateBasis, DiffractkitError, NotALatticePoint,
                     NotUniformlyDiscrete, RegionUnderflow, SupportUnderflow, UnknownFixture)
from .fixtures import make_fixture
from .functions import (Character, Constant, PiecewiseLinear, SmoothedComb, TentFunction,
                        TrigPolynomial, smooth, step_function, tent, tent_fourier)
from .model_sets import (CutProjectScheme, ModelSet, bragg_spectrum, density_check, fibonacci,
                         generate_model_set, star_map, window_ft)
from .spectrum import (SpectrumTable, boundary_error_check, cpp_check, diffraction_intensity,
                       fourier_bohr, fourier_bohr_uniform, parseval_check, peak_scan)
from .windows import BoxWindow, VanHoveFamily, builtin_families

__version__ = "0.1.0"

__all__ = [
    "ApVerdict", "Autocorrelation", "BoxWindow", "Character", "ConfigError", "Constant",
    "ConvergenceReport", "CutProjectScheme", "DegenerateBasis", "DiffractkitError",
    "ModelSet", "NotALatticePoint", "NotUniformlyDiscrete", "PiecewiseLinear",
    "RegionUnderflow", "SmoothedComb", "SpectrumTable", "SupportUnderflow", "TentFunction",
    "TrigPolynomial", "UnknownFixture", "VanHoveFamily", "WeightedDiracComb",
    "amenability_check", "autocorrelation", "besicovitch_classify", "besicovitch_seminorm",
    "boundary_error_check", "bragg_spectrum", "builtin_families", "cpp_check",
    "density_check", "diffraction_intensity", "dirac_comb", "eberlein_fn", "fibonacci",
    "fourier_bohr", "fourier_bohr_uniform", "generate_model_set", "make_fixture",
    "mean_along", "mean_ap_delone", "mean_ap_meyer", "pair_correlation", "parseval_check",
    "peak_scan", "read_comb", "restrict", "sampled_autocorrelation", "smooth",
    "smoothing_identity", "star_map", "step_function", "tent", "tent_fourier", "translate",
    "translation_defect", "uniform_ball_check", "weyl_classify", "weyl_seminorm",
    "window_ft", "write_comb",
]
