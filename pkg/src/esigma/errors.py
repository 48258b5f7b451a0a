class EsigmaError(Exception):
    pass


class DomainError(EsigmaError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class StructuralError(EsigmaError, ValueError):
    """Operands are incompatible (ring, variables, truncation order, shape)."""


class BudgetExceeded(EsigmaError):
    """A brute-force enumeration would exceed its configured bound."""

    def __init__(self, what, needed, bound):
        self.what = what
        self.needed = needed
        self.bound = bound
        super().__init__(f"{what}: needs {needed}, budget is {bound}")
