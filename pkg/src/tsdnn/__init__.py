"""Sparse ReLU network regression for temporally dependent data.

Library + CLI covering: the shifted-ReLU feed-forward network class with
exact gradients, the three-way-split training protocol with L1 penalty and
validation stopping, stochastic process simulators (VAR, finite and
truncated-infinite autoregressions), lag selection and screening rules, a
replicated convergence-study harness, and a rolling one-step-ahead inflation
forecasting pipeline.

Hot kernels run on a compiled Cython backend when available, with a NumPy
fallback selected at import (see :mod:`tsdnn.backends`).
"""

from .backends import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
