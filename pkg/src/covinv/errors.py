"""Exception hierarchy shared by every module."""


class CovinvError(Exception):
    pass


class DimensionMismatch(CovinvError, ValueError):
    pass


class FiberMismatch(CovinvError, ValueError):
    pass


class DegreeError(CovinvError, ValueError):
    pass


class NonNilpotentArgument(CovinvError, ValueError):
    pass


class Inconsistent(CovinvError):
    """Raised by the sparse solver; carries the partial solution of the pivot rows."""

    def __init__(self, message, partial=None, conflicts=None):
        super().__init__(message)
        self.partial = partial if partial is not None else {}
        self.conflicts = conflicts if conflicts is not None else []


class NoSolution(CovinvError):
    """The equation has no solution.

    ``stage`` names the failing step, ``report`` holds whatever was computed
    before the failure (a SolveReport or None).
    """

    def __init__(self, message, stage=None, report=None, obstruction=None, partial=None):
        super().__init__(message)
        self.stage = stage
        self.report = report
        self.obstruction = obstruction
        self.partial = partial


class InitialDataNotExact(CovinvError, ValueError):
    pass


class InitialDataNotCoexact(CovinvError, ValueError):
    pass


class InitialDataInKernel(CovinvError, ValueError):
    pass


class RHSNotExact(CovinvError, ValueError):
    pass


class NotAntiexact(CovinvError, ValueError):
    pass


class SingularGauge(CovinvError, ValueError):
    pass


class FrameInvalid(CovinvError, ValueError):
    pass


class InvariantViolation(CovinvError, RuntimeError):
    pass


class ParseError(CovinvError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
        self.bare_message = message


class ValidationError(CovinvError, ValueError):
    pass
