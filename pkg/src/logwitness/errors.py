"""Exception hierarchy shared by all modules."""


class LogWitnessError(Exception):
    """Base class for every error raised by this package."""


class ParseError(LogWitnessError, ValueError):
    pass


class VariableInConstantError(ParseError):
    pass


class TrivialWordError(ParseError):
    pass


class ResourceError(LogWitnessError):
    """A configured cap (ball size, entry bits, element count) was exceeded."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class HeightBoundViolation(LogWitnessError):
    def __init__(self, word, height, bound):
        super().__init__(f"height {height} of {word!r} exceeds bound {bound}")
        self.word = word
        self.height = height
        self.bound = bound


class EmptyWindowError(LogWitnessError):
    pass


class WindowExhaustedError(LogWitnessError):
    """No prime in the (escalated) windows produced a usable result."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class PartialBallError(LogWitnessError):
    pass


class TargetNotFoundError(LogWitnessError, KeyError):
    pass


class VerificationError(LogWitnessError):
    """The free-group and exact-matrix checks disagree: an arithmetic bug."""
