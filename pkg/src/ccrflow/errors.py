"""Exception hierarchy shared by every module of the package."""


class CCRFlowError(Exception):
    """Base class for all errors raised by ccrflow."""


# cone geometry
class NotPointed(CCRFlowError):
    pass


class NotSpanning(CCRFlowError):
    pass


class DimensionTooLarge(CCRFlowError):
    pass


class NotInterior(CCRFlowError):
    pass


class NotInCone(CCRFlowError):
    pass


class EmptyResult(CCRFlowError):
    pass


# operator calculus
class SpaceMismatch(CCRFlowError):
    pass


class NoAdjointAvailable(CCRFlowError):
    pass


class SubspaceNotInvariant(CCRFlowError):
    pass


# representations and flows
class ModuleError(CCRFlowError):
    """Raised for an invalid P-module description."""


class NotLatticePoint(CCRFlowError):
    pass


class WindowTooSmall(CCRFlowError):
    pass


class DegenerateRepresentation(CCRFlowError):
    pass


class NotInKernel(CCRFlowError):
    pass


class NotComparable(CCRFlowError):
    pass


class NotScalar(CCRFlowError):
    """An operator expected to be a multiple of the identity is not."""


class BasePointMismatch(CCRFlowError):
    pass


class FactorizationFailed(CCRFlowError):
    pass


class KernelNotPSD(CCRFlowError):
    pass


# cocycles and twisted systems
class InvalidParams(CCRFlowError):
    pass


class NotContractive(CCRFlowError):
    pass


class NotInDualInterior(CCRFlowError):
    pass


class ConfigError(CCRFlowError):
    pass
