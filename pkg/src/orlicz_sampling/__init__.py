"""Luxemburg norms of trigonometric polynomials and sampling inequalities
between the torus and the Marcinkiewicz node grid."""

from .errors import (ConfigError, ConvergenceError, DegreeError, NoCertificate, OrliczError,
                     ParameterError)
from .nfunction import NFunction, make_nfunction
from .norms import (NormResult, continuous_modular, discrete_norm_ln, discrete_norm_omega,
                    luxemburg_norm_continuous)
from .trigpoly import TrigPoly, dirichlet, nodes, sample_nodes, spike_poly

__all__ = [
    "ConfigError", "ConvergenceError", "DegreeError", "NoCertificate", "OrliczError",
    "ParameterError", "NFunction", "make_nfunction", "NormResult", "continuous_modular",
    "discrete_norm_ln", "discrete_norm_omega", "luxemburg_norm_continuous", "TrigPoly",
    "dirichlet", "nodes", "sample_nodes", "spike_poly",
]
