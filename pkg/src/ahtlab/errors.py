"""Exception types shared across the package."""


class AhtLabError(Exception):
    """Base class for all errors raised by ahtlab."""


class DomainError(AhtLabError, ValueError):
    """A value lies outside the domain an operation is defined on."""


class BudgetError(AhtLabError):
    """A construction would exceed the configured bit budget or admissible region."""


class ExprError(AhtLabError):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class ExprRuntimeError(ExprError):
    pass


class SearchBudgetExceeded(AhtLabError):
    """The node limit ran out before the search space was exhausted.

    Never conflated with a definitive "none": callers receive ``None`` only
    when every branch was explored.
    """

    def __init__(self, nodes: int):
        super().__init__(f"budget exceeded after {nodes} nodes")
        self.nodes = nodes


class CertificateFormatError(AhtLabError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NoWitnessFound(AhtLabError):
    """A search completed without finding a witness ("none within bound")."""

    def __init__(self, stage: str, message: str = "none within bound"):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
