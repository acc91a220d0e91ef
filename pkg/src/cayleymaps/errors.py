"""Exception types shared across the package."""


class CayleyMapsError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CayleyMapsError, ValueError):
    """Malformed input to a kernel-level operation (bad mapping, bad dart, ...)."""


class DomainMismatchError(InvalidInputError):
    """Two permutations with different domain sizes were combined."""


class GroupValidationError(CayleyMapsError, ValueError):
    """A multiplication table fails the group axioms."""


class GroupSpecError(CayleyMapsError, ValueError):
    """Unknown builtin family or out-of-range parameter in a group descriptor."""


class ConnectionSetError(CayleyMapsError, ValueError):
    """Base class for connection-set validation failures."""


class ContainsIdentityError(ConnectionSetError):
    pass


class NotInverseClosedError(ConnectionSetError):
    pass


class NotGeneratingError(ConnectionSetError):
    pass


class InvalidDartError(InvalidInputError):
    """An (tail, head) pair is not an oriented edge of the map at hand."""


class BruteForceSizeError(CayleyMapsError, ValueError):
    """Brute-force oracle invoked beyond its factorial guard."""


class BudgetExceededError(CayleyMapsError, RuntimeError):
    """An exhaustive run would exceed the configured map budget."""


class SamplerRetryError(CayleyMapsError, RuntimeError):
    """Rejection sampler exhausted its retry cap (indicates a bug upstream)."""


class MapFormatError(CayleyMapsError, ValueError):
    """A group or map JSON document does not match the documented schema."""
