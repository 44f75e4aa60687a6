"""Exception hierarchy shared by every solver stage."""


class TightspanError(Exception):
    pass


class InvalidInstance(TightspanError, ValueError):
    pass


class InvalidAssignment(TightspanError, ValueError):
    pass


class NoLegalMachine(TightspanError):
    """Some job has no machine with processing time within the threshold."""

    def __init__(self, job: int, threshold: int):
        super().__init__(f"job {job} has no legal machine under T={threshold}")
        self.job = job
        self.threshold = threshold


class IterationLimit(TightspanError):
    pass


class NoPerfectMatching(TightspanError):
    pass


class EmptyBadMachine(TightspanError):
    pass


class NoSaturatingMatching(TightspanError):
    def __init__(self, violating: frozenset):
        super().__init__(f"Hall condition fails for bad machines {sorted(violating)}")
        self.violating = violating


class MatchingFailure(TightspanError):
    """A saturating transfer matching was guaranteed but not found."""


class IllegalTransfer(TightspanError):
    pass


class IllegalPush(TightspanError):
    pass


class MoveLimitExceeded(TightspanError):
    pass


class LimitExceeded(TightspanError):
    pass


class ParseError(TightspanError, ValueError):
    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.row = row
        self.column = column


class InvariantViolation(TightspanError, AssertionError):
    """A proven guarantee failed at run time; indicates a bug."""
