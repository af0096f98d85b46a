class DefenceSchedulerError(Exception):
    """Base class for every error this package raises on purpose."""
    pass


class InstanceError(DefenceSchedulerError):
    """The instance itself is unusable: broken structure, unreadable file or no solution."""
    pass


class InstanceFormatError(InstanceError):
    """An instance, solution or front file could not be parsed.

    The message always names the offending field path (and the line, for JSON syntax errors)
    so the file can be fixed by hand.
    """
    pass


class UnsatisfiableDefence(InstanceError):
    """One or more defences admit no committee whose members share a full time window."""

    def __init__(self, defences, detail=""):
        self.defences = tuple(defences)
        msg = f"No feasible committee for defence(s) {list(self.defences)}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class InfeasibleInstance(InstanceError):
    """Committees exist for every defence, but no complete schedule does."""
    pass


class MalformedSolution(DefenceSchedulerError):
    """A solution refers to ids outside the instance or has the wrong shape.

    This is distinct from infeasibility: a malformed solution cannot even be checked.
    """
    pass


class ParameterError(DefenceSchedulerError, ValueError):
    pass


class OracleCapExceeded(DefenceSchedulerError):
    pass


class GenerationError(DefenceSchedulerError):
    pass


class SearchTimeout(DefenceSchedulerError):
    """Raised by the search monitor to unwind a branch-and-bound at its deadline.

    Rather than threading a "stop" flag through every recursive call, the monitor raises this
    and `search.optimise` catches it at the top and reports the incumbent.
    """
    pass
