"""Exception hierarchy shared by every module of the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""


class FieldMismatch(EngineError, ValueError):
    """Scalars or matrices from different fields were combined."""


class DimensionMismatch(EngineError, ValueError):
    """Shapes or ambient dimensions do not fit together."""


class InconsistentSystem(EngineError, ValueError):
    """A linear system A·X = B has no solution."""


class NotBounded(EngineError, ValueError):
    """A matrix does not map the null subspace of its domain into that of its codomain."""


class ComposabilityError(EngineError, ValueError):
    """Two maps cannot be composed (codomain and domain differ)."""


class NotAComplex(EngineError, ValueError):
    """Consecutive differentials do not compose to zero."""


class NotStrictExact(EngineError, ValueError):
    """A sequence is not a kernel-cokernel pair in some degree."""


class NotEquivariant(EngineError, ValueError):
    """A map or action is incompatible with the group structure."""


class EndpointMismatch(EngineError, ValueError):
    """Heart morphisms with non-matching sources or targets."""


class InternalInconsistency(EngineError, RuntimeError):
    """Two independent computations of the same object disagree."""


class ResourceLimit(EngineError, RuntimeError):
    """A computation would exceed the configured resource cap."""


class UnknownSuite(EngineError, KeyError):
    """The requested law suite does not exist."""


class TaskValidationError(EngineError, ValueError):
    """A task file failed to parse or validate.

    ``location`` points at the offending spot, e.g. ``"line 3, column 7"`` or
    ``"maps.f.matrix.1"``.
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{message} (at {location})" if location else message)


class NotAHeartObject(EngineError, ValueError):
    """A map is not monic (left heart) or not a categorical epic (right heart)."""
