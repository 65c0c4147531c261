"""Exception hierarchy shared by all modules."""


class DaugtreeError(Exception):
    """Base class for every error raised by the package."""


class InvalidNode(DaugtreeError, ValueError):
    pass


class ConfigurationError(DaugtreeError, ValueError):
    pass


class CapacityError(DaugtreeError):
    """A search or enumeration would exceed the configured size limits."""


class NormalizationError(DaugtreeError, ValueError):
    pass


class UndefinedInput(DaugtreeError, ValueError):
    pass


class NotApplicable(DaugtreeError):
    """The requested criterion cannot be applied to this input."""


class EmptySlice(DaugtreeError):
    pass


class DepthExceeded(DaugtreeError):
    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class NotInBall(DaugtreeError, ValueError):
    pass


class PreconditionError(DaugtreeError, ValueError):
    pass


class VerificationError(DaugtreeError):
    pass


class InfeasibleProgram(DaugtreeError):
    pass


class UnboundedProgram(DaugtreeError):
    pass


class FormatError(DaugtreeError, ValueError):
    """Malformed vector, functional or certificate file."""
