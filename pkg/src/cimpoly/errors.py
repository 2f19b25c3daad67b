"""Exception hierarchy.

``PreconditionError`` subclasses map to CLI exit code 2, ``LimitExceeded`` to 3.
"""


class CimError(ValueError):
    pass


class PreconditionError(CimError):
    pass


class CreatesCycle(PreconditionError):
    pass


class NotAnEdge(PreconditionError):
    pass


class AlreadyAdjacent(PreconditionError):
    pass


class SizeMismatch(PreconditionError):
    pass


class NotRealizable(PreconditionError):
    pass


class NotAVertex(PreconditionError):
    pass


class PreconditionViolated(PreconditionError):
    pass


class SkeletonMismatch(PreconditionError):
    pass


class NotATree(PreconditionError):
    pass


class EmptySet(PreconditionError):
    pass


class MarkovEquivalentInput(PreconditionError):
    pass


class DifferenceNotSubtree(PreconditionError):
    pass


class EmptyDelta(PreconditionError):
    pass


class Disconnected(CimError):
    pass


class Infeasible(CimError):
    """A construction step found no admissible choice."""


class LimitExceeded(CimError):
    pass
