"""Exception types shared across the toolkit.

CLI exit-code mapping: InvalidInputError -> 2, NoFeasiblePlanError -> 3,
StageFailure (and subclasses) -> 4.
"""


class AsmkitError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(AsmkitError):
    """Malformed or out-of-contract input (degenerate mesh, bad config, ...)."""


class NoFeasiblePlanError(AsmkitError):
    """The sequence search found no full-depth part-grasp sequence."""


class StageFailure(AsmkitError):
    """A pipeline stage failed; `stage` names the failing stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class InterlockedAssemblyError(StageFailure):
    """No part could be removed in a disassembly round (violates the
    insertion-only assembly precondition)."""

    def __init__(self, message: str):
        super().__init__("precedence", message)


class FixtureFailure(StageFailure):
    def __init__(self, message: str):
        super().__init__("fixture", message)


class PlanFailure(StageFailure):
    def __init__(self, message: str):
        super().__init__("motion", message)
