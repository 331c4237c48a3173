"""Unitarily invariant valuations on convex functions: invariant polynomials,
Kahler angles, differential-cycle quadrature, Abel transforms and the
reconstruction of Goodey-Weil values from restrictions."""
from .convex_functions import ExpLinear, PulledBack, Quadratic, SmoothNorm, Sum, pullback
from .grassmann import Subspace, extremal_subspace, kahler_angles, random_subspace, tasaki_basis
from .invariant_polynomials import klain_mu_kq, p_kq, symbol_beta, symbol_gamma, upsilon_symbol
from .mixed_discriminant import det_mixed, gram_matrices
from .pipeline import ExperimentConfig, ResidualReport, emit, run_suite
from .transforms import (abel, abel_inverse, abel_m, densities_from_spec,
                         reconstruct_gw, reconstruction_data)
from .valuation_engine import (Quadrature, RadialDensity, RawForm, SmoothValuationSpec,
                               ThetaTerm, UpsilonTerm, evaluate, gw_slice, monge_ampere,
                               polarize, restrict)

__version__ = "0.1.0"

__all__ = [
    "ExpLinear",
    "PulledBack",
    "Quadratic",
    "SmoothNorm",
    "Sum",
    "pullback",
    "Subspace",
    "extremal_subspace",
    "kahler_angles",
    "random_subspace",
    "tasaki_basis",
    "klain_mu_kq",
    "p_kq",
    "symbol_beta",
    "symbol_gamma",
    "upsilon_symbol",
    "det_mixed",
    "gram_matrices",
    "ExperimentConfig",
    "ResidualReport",
    "emit",
    "run_suite",
    "abel",
    "abel_inverse",
    "abel_m",
    "densities_from_spec",
    "reconstruct_gw",
    "reconstruction_data",
    "Quadrature",
    "RadialDensity",
    "RawForm",
    "SmoothValuationSpec",
    "ThetaTerm",
    "UpsilonTerm",
    "evaluate",
    "gw_slice",
    "monge_ampere",
    "polarize",
    "restrict",
]
