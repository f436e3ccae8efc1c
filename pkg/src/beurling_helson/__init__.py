"""Finite-grid computations around A-norms of e^{in phi} for circle maps phi."""

from .circle_maps import (
    CircleMap,
    exp_sample,
    make_custom,
    make_linear,
    make_piecewise_linear,
    make_smooth,
    make_tent,
    map_from_spec,
    sample_lift,
)
from .cyclic_fourier import CyclicFunction, Spectrum, a_norm, convolve, dft, fold_circle_series, idft
from .diophantine import SimultaneousApprox, simultaneous_approx, verify_approx
from .pipeline import build_E_N, build_phi_N, final_integral, run_pipeline, theta_table

__all__ = [
    "CircleMap",
    "CyclicFunction",
    "SimultaneousApprox",
    "Spectrum",
    "a_norm",
    "build_E_N",
    "build_phi_N",
    "convolve",
    "dft",
    "exp_sample",
    "final_integral",
    "fold_circle_series",
    "idft",
    "make_custom",
    "make_linear",
    "make_piecewise_linear",
    "make_smooth",
    "make_tent",
    "map_from_spec",
    "run_pipeline",
    "sample_lift",
    "simultaneous_approx",
    "theta_table",
    "verify_approx",
]
