"""Exception hierarchy.

Two branches matter to the CLI: InputError maps to exit status 1
(bad files, bad parameters), ComputationError maps to exit status 2
(the inputs were valid but the result is undefined or unstable).
"""


class TopoprobeError(Exception):
    """Base class for all errors raised by this package."""


class InputError(TopoprobeError):
    """Invalid input data or parameters."""


class ComputationError(TopoprobeError):
    """Computation cannot produce a well-defined result."""


# pointcloud loading / sampling
class MalformedFile(InputError):
    pass


class NonFiniteData(InputError):
    pass


class EmptyCloud(InputError):
    pass


class SampleTooLarge(InputError):
    pass


# persistence
class UnsupportedDegree(InputError):
    pass


class BadThreshold(InputError):
    pass


class TooLarge(InputError):
    pass


# descriptors
class DegreeUnavailable(InputError):
    pass


class NegativeAlpha(InputError):
    pass


# power-law fitting / dimension estimation
class DegenerateFit(ComputationError):
    pass


class NonPositiveValue(InputError):
    pass


class SlopeAtLeastOne(ComputationError):
    pass


# classical intrinsic-dimension estimators
class DuplicatePoints(InputError):
    pass


class TooFew(InputError):
    pass


class BadK(InputError):
    pass


class DegenerateDistances(ComputationError):
    pass


# trajectory analysis
class BatchTooLarge(InputError):
    pass


class MissingFile(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class ConstantInput(ComputationError):
    pass


class LengthMismatch(InputError):
    pass


class MissingMeasure(InputError):
    pass


class UnknownMeasure(InputError):
    pass
