"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class UnsupportedConfiguration(ValueError):
    pass


class BudgetError(RuntimeError):
    """Raised when exhaustive enumeration would exceed its budget.

    Solvers never fall back to an approximation silently; they refuse.
    """

    def __init__(self, needed, budget):
        super().__init__(f"enumeration needs {needed} candidates, budget is {budget}")
        self.needed = needed
        self.budget = budget


class EmbeddingError(RuntimeError):
    def __init__(self, message, best_eps):
        super().__init__(f"{message} (best eps_eff={best_eps:.6g})")
        self.best_eps = best_eps


class ParseError(ValueError):
    """Input file could not be parsed; carries a line anchor."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line
