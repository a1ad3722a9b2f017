"""
Error hierarchy for the hjet toolkit.

Every failure raised by the kernels derives from HJetError and carries the
process exit code the command-line front end reports for it.
"""

from typing import Optional


class HJetError(Exception):
    """Base class for all toolkit failures"""

    exit_code = 1

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def with_stage(self, stage: str) -> "HJetError":
        """Tag the error with the pipeline stage it escaped from (first tag wins)"""
        if self.stage is None:
            self.stage = stage
        return self


class ParseError(HJetError):
    """Malformed problem file, polynomial string or growth vector"""

    exit_code = 2

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        path: Optional[str] = None,
    ):
        location = []
        if path:
            location.append(path)
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        full = f"{message} ({', '.join(location)})" if location else message
        super().__init__(full, stage="parse")
        self.line = line
        self.column = column
        self.path = path


class PreconditionError(HJetError, ValueError):
    """An operation was called outside its domain"""

    exit_code = 3


class ArityMismatchError(PreconditionError):
    pass


class RankDeficientError(PreconditionError):
    pass


class InsufficientJetOrderError(PreconditionError):
    pass


class NonTangentError(PreconditionError):
    pass


class IndexRangeError(PreconditionError, IndexError):
    pass


class NotRegularError(HJetError):
    """A construction needs a regular jet and the jet at hand is not"""

    exit_code = 4


class InconsistencyError(HJetError):
    """Internal consistency check failed; signals a bug or contradictory input"""

    exit_code = 5


class SurjectivityError(InconsistencyError):
    pass


class WidthMismatchError(InconsistencyError):
    pass


class MissingPivotError(InconsistencyError):
    pass


class StructureViolationError(InconsistencyError):
    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message)
        self.row = row
        self.column = column
