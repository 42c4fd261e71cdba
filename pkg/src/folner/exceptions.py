"""Exception hierarchy shared by every engine."""


class FolnerError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDimensionError(FolnerError, ValueError):
    pass


class InvalidGraphError(FolnerError, ValueError):
    pass


class EmptySubsetError(FolnerError, ValueError):
    pass


class DomainError(FolnerError, ValueError):
    """A vertex or edge lies outside the domain an object is defined on."""


class UndefinedRatioError(FolnerError, ArithmeticError):
    """A Følner ratio was requested for a set with a boundaryless component."""


class NoCoolingFunctionError(FolnerError):
    """The subset has a connected component without boundary edges."""

    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class InvariantError(FolnerError, AssertionError):
    """An internal invariant of an algorithm was breached."""


class StepLimitError(FolnerError, RuntimeError):
    pass


class ResourceGuardError(FolnerError):
    """Refusing a computation whose size exceeds a configured cap."""


class InconsistentDiagramError(FolnerError, ValueError):
    pass


class NotPeelingError(FolnerError, ValueError):
    pass


class EngineDisagreementError(FolnerError):
    """Two engines returned different minimum norms for the same input."""

    def __init__(self, message, results=()):
        super().__init__(message)
        self.results = tuple(results)
