"""Exception hierarchy shared by all polyterm modules."""


class PolytermError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(PolytermError):
    """Operands live in polynomial rings of different dimensions."""


class ResourceLimitExceeded(PolytermError):
    """A configured degree / term-count / set-size / node cap was hit."""


def format_int(value: int, max_digits: int = 40) -> str:
    """Decimal rendering that stays bounded for astronomically large values."""
    if value.bit_length() <= max_digits * 3:  # < 10**max_digits guaranteed
        return str(value)
    return f"about 10^{(value.bit_length() * 30103) // 100000}"


class CapExceeded(PolytermError):
    """An iteration cap stopped a chain-length computation.

    Carries the number of iterations performed, which is a lower bound on
    the true value.
    """

    def __init__(self, lower_bound: int, cap: int, message: str | None = None):
        self.lower_bound = lower_bound
        self.cap = cap
        super().__init__(message or
                         f"iteration cap {cap} exceeded (value > {format_int(lower_bound)})")


class TargetUnreachable(PolytermError):
    """The descending Hilbert-value iteration passed below its target."""


class ProgramError(PolytermError):
    """Base class for program-text and program-structure errors."""


class ProgramSyntaxError(ProgramError):
    """Malformed program text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class ArityError(ProgramError):
    """An assignment tuple does not cover exactly the declared variables."""


class UnknownVariable(ProgramError):
    """An identifier is not among the declared program variables."""


class InvalidSymbol(PolytermError):
    """A path string uses a branch index outside 1..l."""


class IterationLimitExceeded(PolytermError):
    """A fixpoint iteration hit its sweep limit before stabilising.

    The partial result (chain computed so far) is attached for diagnosis.
    """

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)


class UnsupportedSemantics(PolytermError):
    """The requested field semantics is not supported by this algorithm."""
