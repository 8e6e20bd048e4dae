"""Exception hierarchy shared by every module."""


class QuatlabError(Exception):
    """Base class for all library errors."""


class SingularDenominator(QuatlabError):
    pass


class SingularMatrix(QuatlabError):
    pass


class InvalidIndex(QuatlabError):
    pass


class OutOfDomain(QuatlabError):
    pass


class DimensionMismatch(QuatlabError):
    pass


class BadRadius(QuatlabError):
    pass


class OnBoundary(QuatlabError):
    pass


class NonConvergence(QuatlabError):
    pass


class DegenerateEigenvalues(QuatlabError):
    pass


class OutsideConvergenceRegion(QuatlabError):
    pass


class CoincidentPoints(QuatlabError):
    pass


class ProjectiveSingularity(QuatlabError):
    pass


class InvalidLambda(QuatlabError):
    pass


class NotInKernel(QuatlabError):
    pass


class SingularOnCycle(QuatlabError):
    pass


class OutsideAdmissibleRegion(QuatlabError):
    pass


class UnknownSuite(QuatlabError):
    pass


class ConfigInvalid(QuatlabError):
    pass
