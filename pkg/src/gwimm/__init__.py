"""Density of the martingale limit of a Galton-Watson process with immigration.

Two independent routes to the density are provided: Fourier inversion of the
Laplace transform ``Pi_imm`` (:mod:`gwimm.inversion`) and the complete
left-tail series with its quick approximation (:mod:`gwimm.tail_series`).
:mod:`gwimm.montecarlo` simulates the process for ground truth.
"""
__version__ = "0.1.0"

from .pgf import Pgf, Model, validate_model, quadratic_model, load_model, REFERENCE_PARAMS
from .limits import LimitConfig
from .inversion import DensityCurve, density_fourier, tail_mass
from .series_alg import TruncatedSeries

__all__ = [
    "Pgf", "Model", "validate_model", "quadratic_model", "load_model", "REFERENCE_PARAMS",
    "LimitConfig", "DensityCurve", "density_fourier", "tail_mass", "TruncatedSeries",
]
