"""Entropic distance calculus for multipartite nonlocality and contextuality tests."""

from .distance import (
    DistanceKind,
    JointDistribution,
    ProductTerm,
    binary_entropy,
    check_axioms,
    correlation_spectrum,
    delta,
    distance,
    emax_shannon,
    mix_distributions,
    product_expectation,
    product_marginal,
    shannon_entropy,
)
from .exceptions import ChainStructureError, NumericalError, PreconditionError

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DistanceKind",
    "JointDistribution",
    "ProductTerm",
    "binary_entropy",
    "check_axioms",
    "correlation_spectrum",
    "delta",
    "distance",
    "emax_shannon",
    "mix_distributions",
    "product_expectation",
    "product_marginal",
    "shannon_entropy",
    "ChainStructureError",
    "NumericalError",
    "PreconditionError",
]
