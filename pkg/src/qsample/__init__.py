"""Numerical laboratory for quantum-example sample complexity.

Quantum-example ensembles, Pretty Good Measurement success probabilities via
Fourier-structured Gram matrices, closed-form bound evaluators, entropy
quantities and small learner simulations.
"""

from .errors import InvalidArgumentError, NotPSDError, ResourceError, SearchFailureError

__all__ = ["InvalidArgumentError", "NotPSDError", "ResourceError", "SearchFailureError"]
__version__ = "0.1.0"
