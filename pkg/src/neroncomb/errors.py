"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`NeronCombError`.
Violated mathematical preconditions (a curve that is not stable, not d-general, ...)
derive from :class:`PreconditionError`; the CLI maps those to exit status 1.
"""


class NeronCombError(Exception):
    pass


class PreconditionError(NeronCombError):
    pass


# graph construction
class DisconnectedGraph(PreconditionError):
    pass


class DuplicateVertexId(NeronCombError):
    pass


class BadEdgeIndex(NeronCombError):
    pass


class EmptySubcurve(NeronCombError):
    pass


# lattices and multidegrees
class DimensionMismatch(NeronCombError):
    pass


class NonZeroSumGenerator(PreconditionError):
    pass


class TotalMismatch(PreconditionError):
    pass


class CurveMismatch(PreconditionError):
    pass


# curve/degree hypotheses
class GenusTooSmall(PreconditionError):
    pass


class NotSemistableCurve(PreconditionError):
    pass


class NotQuasistableCurve(PreconditionError):
    pass


class NotStableCurve(PreconditionError):
    pass


class NotDGeneral(PreconditionError):
    pass


class DisconnectedNormalization(PreconditionError):
    pass


class NotSemibalanced(PreconditionError):
    pass


class MixedStratifications(NeronCombError):
    pass


class EmptyResult(NeronCombError):
    """An enumeration that a theorem guarantees non-empty came back empty."""


class CurveSyntaxError(NeronCombError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
