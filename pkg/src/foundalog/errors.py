class FoundalogError(Exception):
    """Base class for errors reported to users of the engine."""


class ParseError(FoundalogError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(f"{where}{message}")


class DeclarationError(FoundalogError):
    """An explicit declaration conflicts with the dependency structure."""


class BudgetExceeded(FoundalogError):
    """Model enumeration would exceed the configured number of undefined atoms."""

    def __init__(self, undefined: int, budget: int):
        self.undefined = undefined
        self.budget = budget
        super().__init__(
            f"{undefined} undefined atoms exceed the enumeration budget of {budget}"
        )


class InconsistencyError(FoundalogError):
    """An interpretation acquired a literal together with its complement."""


class OracleScaleError(FoundalogError):
    """Brute-force reference computation refused an input that is too large."""
