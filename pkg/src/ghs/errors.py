"""Exception hierarchy shared by every rewrite and analysis."""


class GHSError(Exception):
    """Base class for all engine errors."""


class ValidationError(GHSError):
    """A surface failed structural validation.

    Attributes:
        violations: the violated invariants, as reported by ``validate``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid surface: {lines}")


class UnknownId(GHSError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CyclicInput(GHSError):
    """The dual digraph contains a coherent cycle."""


class NoCollection(GHSError):
    pass


class MalformedTree(GHSError):
    pass


class GenusMismatch(GHSError):
    pass


class RealizabilityViolation(GHSError):
    pass


class EmptyPlan(GHSError):
    pass


class MissingAssignment(GHSError):
    pass


class NotProduct(GHSError):
    pass


class DegenerateConsolidation(GHSError):
    pass


class NotConsolidable(GHSError):
    pass


class NotThinningMove(GHSError):
    """An untelescoping plan that would not decrease width."""


class TrackedObjectConflict(GHSError):
    """A move would destroy the surface a tracked sphere or disc lives on."""


class OrientationMismatch(GHSError):
    pass


class NotAdjacent(GHSError):
    pass


class InconsistentSpec(GHSError):
    pass


class TubeBudgetExceeded(GHSError):
    pass


class NotSelfAmalgamatable(GHSError):
    pass


class NothingToMerge(GHSError):
    pass


class BadIncidence(GHSError):
    pass


class NonSphereEnclosure(GHSError):
    pass


class PatternViolation(GHSError):
    pass


class ParseError(GHSError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class PreconditionFailed(GHSError):
    pass
