"""Exception hierarchy shared by all modules."""


class DTVError(Exception):
    """Base class for errors raised by this package."""


class DomainError(DTVError, ValueError):
    """An input lies outside the domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at (or too close to) a pole."""


class DegenerateLatticeError(DomainError):
    """The cubic 4t^3 - g2 t - g3 has a repeated root."""


class MalformedPoleError(DomainError):
    """A local potential has a pole of order > 2 or a nonzero residue."""


class PreconditionError(DomainError):
    """A documented precondition does not hold for the given data."""


class NotCommutingError(PreconditionError):
    """Operators handed to the Burchnall-Chaundy peel do not commute."""


class TruncationError(DTVError):
    """Series truncation is too shallow for the requested certification.

    ``required`` is the minimal truncation order that would be accepted.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required

    def hint(self):
        return {"required_trunc_order": self.required}
