"""Executable algebra around the Morava E-theory of symmetric groups.

Rank formulas, sublattice counts, formal group law computations and the
monomial basis of the subgroup-scheme ring, each checkable against an
independent brute-force route.
"""

from .errors import BudgetExceeded, DomainError, StructuralError

__all__ = ["BudgetExceeded", "DomainError", "StructuralError"]
__version__ = "0.1.0"
