"""Exception types shared across the engine."""


class SpaceError(Exception):
    """Base class for engine errors."""


class ParameterError(SpaceError, ValueError):
    """Invalid instance parameters or malformed input."""


class InstanceMismatchError(SpaceError):
    """Operands belong to different space instances."""


class DomainError(SpaceError, ValueError):
    """Operand outside an operation's documented domain."""


class BudgetExceededError(SpaceError):
    """An enumeration exceeded its configured budget."""


class TruncationTooShallowError(SpaceError):
    """No witness with the required extension headroom exists in the truncation."""


class NoInnerWitnessError(SpaceError):
    """No selector in the declared family matches the kernel on any admissible reduct."""


class FusionExhaustedError(SpaceError):
    """Fusion ran out of refinements before the diagonal sequence stabilized."""

    def __init__(self, stage: int, partial=None):
        super().__init__(f"fusion refinement failed at stage {stage}")
        self.stage = stage
        self.partial = partial
