"""Exception hierarchy shared by all modules."""


class MaxDelayError(Exception):
    """Base class for errors raised by this package."""


class StructuralError(MaxDelayError, ValueError):
    """An automaton, word or signature is malformed or mismatched."""


class ParseError(MaxDelayError):
    """Raised by the text reader; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceeded(MaxDelayError):
    """An exploration ran out of its node budget before closing."""


class ContractError(MaxDelayError):
    """A strategy or a game move violated the protocol."""

    def __init__(self, message, round_index=None):
        self.round_index = round_index
        if round_index is not None:
            message = f"round {round_index}: {message}"
        super().__init__(message)


class IllegalMove(ContractError):
    """A move in the class game is not allowed by the rules."""
