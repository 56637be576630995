"""Quasi-exactly-solvable spectra of one- and two-dimensional double wells.

The package builds the sl(2, R) polynomial-preserving operators behind a
family of double-well Schrodinger problems, extracts the algebraic part of
their spectra, and cross-checks every level against independent routes
(commutator identities, pointwise Schrodinger residuals, and a
finite-difference grid eigensolver).
"""

from .errors import DegenerateParameterError, DomainError, QesError
from .models import Family, PotentialModel

__version__ = "0.1.0"

__all__ = [
    "DegenerateParameterError",
    "DomainError",
    "Family",
    "PotentialModel",
    "QesError",
    "__version__",
]
