"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class LatmaxError(Exception):
    exit_code = 1


class SpecError(LatmaxError, ValueError):
    """Malformed job document or invalid input data."""

    exit_code = 2


class PrecisionError(LatmaxError, ArithmeticError):
    """A computation needed more pi-adic digits than the working precision."""

    exit_code = 3


class NonUnitError(LatmaxError, ZeroDivisionError):
    exit_code = 3


class DiameterError(LatmaxError):
    """Orbit or invariant complex grew past the diameter guard."""

    exit_code = 4


class CapExceeded(LatmaxError):
    """An exhaustive enumeration would exceed the configured cap."""

    exit_code = 4


class VerdictFailure(LatmaxError):
    """A checked theorem or internal cross-check failed."""

    exit_code = 5
