"""Exception types shared across the package."""


class FourwaveError(Exception):
    """Base class for all package errors."""


class PreconditionError(FourwaveError):
    """An operation was called outside its documented domain."""


class NullDenominator(PreconditionError):
    """A reciprocal light-cone factor 1/<eta,eta> was requested at a
    lightlike covector.  Carries the offending index set when known."""

    def __init__(self, msg="lightlike covector has no reciprocal", indices=None):
        super().__init__(msg if indices is None else f"{msg} (indices {indices})")
        self.indices = indices


class NotABasis(PreconditionError):
    """Four covectors expected to span the fibre are linearly dependent."""


class NDViolation(PreconditionError):
    """The first four frame covectors are linearly dependent."""


class RankDeficient(PreconditionError):
    """A family of tensors expected to span the fibre does not."""


class SingularMetric(PreconditionError):
    """A metric tensor required to be invertible is singular."""


class Unsupported(FourwaveError):
    """The requested computation is not available on this preset."""


class IntegrationError(FourwaveError):
    """Adaptive integration failed; carries the last accepted state."""

    def __init__(self, msg, last_state=None):
        super().__init__(msg)
        self.last_state = last_state


class Ambiguous(FourwaveError):
    """An intersection query produced conflicting candidates."""


class ExcludedPoint(FourwaveError):
    """A detection query point lies inside the exclusion sets, where the
    detection function is not defined."""
