"""Pseudodifferential operators with symbols periodic in phase space.

Symbols are finite lattice Fourier series; operators are applied matrix-free
as sums of time-frequency shifts on a sampled torus.  Submodules:

``lattice``   period matrices, dual lattice, index order
``weights``   polynomial and moderate weights
``signal``    grid signals, DFT, translations, modulations, weighted norms
``symbol``    coefficient extraction, synthesis, periodisation
``operator``  ``Op_tau(p)`` by series and by quadrature
``analysis``  continuity bounds, invertibility, Neumann inverse, multipliers
``gabor``     STFT, modulation norms, Gabor frame operators and dual windows
"""

__version__ = "0.1.0"

from .analysis import (
    BoundReport,
    InvertibilityReport,
    continuity_bound,
    counterexample_demo,
    ell1_v_norm,
    invertibility_check,
    multiplier_necessity_witness,
    neumann_inverse_apply,
    operator_norm_estimate,
)
from .catalog import Exponential, Gaussian, HermiteGaussian, catalog_signal
from .exceptions import AliasingError, ConvergenceWarning, NotInvertibleError, NumericalRefusal, QuadratureError
from .gabor import GaborSystem, StftGrid, dual_window, frame_operator_direct, modulation_norm, scan, stft
from .lattice import PeriodMatrix, dual_point, enumerate_truncation
from .operator import OperatorSpec, apply_adjoint, apply_multiplier, apply_oracle, apply_series, apply_series_lattice
from .signal import GridSignal, WrapAroundWarning, dft, flp_m_norm, lp_m_norm, modulate, tfs_apply, translate
from .symbol import PeriodCellSamples, PeriodicSymbol, fourier_coefficients, gabor_symbol, periodize, synthesize
from .weights import ModerateWeight, PolynomialWeight, moderation_check

__all__ = [
    "AliasingError",
    "BoundReport",
    "ConvergenceWarning",
    "Exponential",
    "GaborSystem",
    "Gaussian",
    "GridSignal",
    "HermiteGaussian",
    "InvertibilityReport",
    "ModerateWeight",
    "NotInvertibleError",
    "NumericalRefusal",
    "OperatorSpec",
    "PeriodCellSamples",
    "PeriodMatrix",
    "PeriodicSymbol",
    "PolynomialWeight",
    "QuadratureError",
    "StftGrid",
    "WrapAroundWarning",
    "apply_adjoint",
    "apply_multiplier",
    "apply_oracle",
    "apply_series",
    "apply_series_lattice",
    "catalog_signal",
    "continuity_bound",
    "counterexample_demo",
    "dft",
    "dual_point",
    "dual_window",
    "ell1_v_norm",
    "enumerate_truncation",
    "flp_m_norm",
    "fourier_coefficients",
    "frame_operator_direct",
    "gabor_symbol",
    "invertibility_check",
    "lp_m_norm",
    "moderation_check",
    "modulate",
    "modulation_norm",
    "multiplier_necessity_witness",
    "neumann_inverse_apply",
    "operator_norm_estimate",
    "periodize",
    "scan",
    "stft",
    "synthesize",
    "tfs_apply",
    "translate",
]
