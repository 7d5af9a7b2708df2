"""Exception types shared across the package."""


class SchedulingError(Exception):
    """Base class for every error raised by dawsched."""


class InvalidWorkflowError(SchedulingError):
    """The workflow structure violates a model invariant (bad ids, empty, disconnected...)."""


class CyclicWorkflowError(InvalidWorkflowError):
    """The task graph contains a directed cycle."""


class InvalidScheduleError(SchedulingError):
    """A schedule is incomplete, duplicated, or breaks precedence constraints."""


class CorruptChromosomeError(SchedulingError):
    """A gene stream cannot be decoded into a complete, consistent schedule."""


class MismatchError(SchedulingError):
    """Two chromosomes do not belong to the same workflow/platform instance."""


class NoRouteError(SchedulingError):
    """A transfer with positive size has no link with positive bandwidth."""


class TooLargeError(SchedulingError):
    """Instance exceeds the exhaustive-search size limits."""


class PlatformValidationError(SchedulingError):
    """Platform failed validation; carries the list of diagnostics."""

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(f"{i.kind}: {i.message}" for i in self.issues)
        super().__init__(f"platform validation failed: {lines}")
