"""Exception types raised by the library.

Each carries enough context to be reported by the command line front end.
"""


class StratMechError(Exception):
    """Base class for all library errors."""


class InvariantViolation(StratMechError, ValueError):
    """A state failed one of its declared invariants."""

    def __init__(self, invariant, detail=""):
        self.invariant = invariant
        msg = f"{invariant} invariant violated"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class StepUnderflow(StratMechError):
    pass


class BaseMismatch(StratMechError, ValueError):
    pass


class NotInAnnH(StratMechError, ValueError):
    pass


class NotOnLevelSet(StratMechError, ValueError):
    pass


class NotOnOrbit(StratMechError, ValueError):
    pass


class SingularConfig(StratMechError, ValueError):
    pass


class SectionFailure(StratMechError):
    pass


class IntegratorError(StratMechError):
    """Failure inside a time stepper; ``time`` is the failing sample time."""

    def __init__(self, msg, time=None):
        self.time = time
        if time is not None:
            msg = f"{msg} (t = {time:.17g})"
        super().__init__(msg)


class ConvergenceFailure(IntegratorError):
    pass


class PoleCrossing(IntegratorError):
    pass


class StepTooLarge(IntegratorError, ValueError):
    pass
