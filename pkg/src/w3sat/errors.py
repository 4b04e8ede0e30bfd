"""Exception hierarchy shared by every w3sat module."""


class W3satError(Exception):
    """Base class for all errors raised by this package."""


class EmptyClauseInput(W3satError, ValueError):
    pass


class VarOutOfRange(W3satError, ValueError):
    pass


class WidthExceedsN(W3satError, ValueError):
    pass


class WidthTooLarge(W3satError, ValueError):
    def __init__(self, message, clause_index=None):
        super().__init__(message)
        self.clause_index = clause_index


class ParseError(W3satError, ValueError):
    """Malformed input text. ``line`` is 1-based for DIMACS, ``position`` is a
    character offset for the bracketed list format."""

    def __init__(self, message, line=None, position=None):
        super().__init__(message)
        self.line = line
        self.position = position


class MalformedTrace(W3satError):
    pass


class NotRefuted(W3satError):
    pass


class TooLarge(W3satError):
    pass


class OracleTooLarge(TooLarge):
    pass


class IncompleteCover(W3satError):
    pass


class BadConfig(W3satError, ValueError):
    pass


class BadParams(W3satError, ValueError):
    pass


class NotACounterexample(W3satError):
    pass


class SoundnessViolation(W3satError):
    """The engine refuted an instance the oracle found satisfiable.

    This is never expected; the harness aborts the run when it happens.
    """
