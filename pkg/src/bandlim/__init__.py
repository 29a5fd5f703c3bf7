"""Approximation of almost time- and band-limited functions by Hermite,
Legendre and Chebyshev expansions, with prolate spheroidal eigenvalue bounds."""
from . import concentration, kernels, orthopoly, projections, pswf, quadrature, wkb
from .concentration import Signal, epsilon_band, epsilon_time, get_signal
from .errors import (BandlimError, ConfigError, ConvergenceError, DomainError, EvaluationError,
                     RangeError, RegimeError)
from .projections import Basis, Expansion, error_norm, expand
from .pswf import PswfSpectrum, spectrum

__version__ = "0.1.0"

__all__ = [
    "concentration", "kernels", "orthopoly", "projections", "pswf", "quadrature", "wkb",
    "Signal", "get_signal", "epsilon_time", "epsilon_band",
    "Basis", "Expansion", "expand", "error_norm",
    "PswfSpectrum", "spectrum",
    "BandlimError", "ConfigError", "ConvergenceError", "DomainError", "EvaluationError",
    "RangeError", "RegimeError",
]
