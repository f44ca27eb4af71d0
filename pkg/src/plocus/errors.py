"""Exceptions shared across the engine."""


class PlocusError(Exception):
    pass


class PolySyntaxError(PlocusError):
    """Parse failure with a 0-based character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(PolySyntaxError):
    pass


class ExponentOverflowError(PlocusError):
    pass


class RingMismatchError(PlocusError):
    pass


class BudgetExceededError(PlocusError):
    """A degree or time budget was hit; the computation has no answer."""

    def __init__(self, message: str):
        super().__init__(message)


class MorphismError(PlocusError):
    """Declared ring map does not send the source ideal into the target ideal."""


class PointNotOnVarietyError(PlocusError):
    pass


class ScenarioError(PlocusError):
    """Scenario file is malformed; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
