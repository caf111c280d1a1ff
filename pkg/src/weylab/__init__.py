"""Numerical Weyl calculus on truncated phase-space grids.

Quantizes sampled symbols into dense operator kernels, measures their
Schatten norms, and checks the surrounding metric, symbol-class and
harmonic-analysis estimates against independent oracles.
"""
from .classes import ClassSpec, class_metric, class_planck, kappa, kappa_prime, make_test_symbol, n_p
from .errors import WeylabError
from .grids import FunctionField, PhaseGrid, SymbolField, UniformGrid, fourier, lp_norm, pairing, symplectic_fourier
from .metric import dual_metric, planck, symplectic_core, symplectic_eigenvalues
from .quantization import OperatorKernel, build_kernel, convert_quantization
from .schatten import schatten_norm, singular_values
from .verify import ExperimentConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "ClassSpec", "ExperimentConfig", "FunctionField", "OperatorKernel", "PhaseGrid", "SymbolField",
    "UniformGrid", "WeylabError", "build_kernel", "class_metric", "class_planck", "convert_quantization",
    "dual_metric", "fourier", "kappa", "kappa_prime", "lp_norm", "make_test_symbol", "n_p", "pairing",
    "planck", "run_suite", "schatten_norm", "singular_values", "symplectic_core", "symplectic_eigenvalues",
    "symplectic_fourier",
]
