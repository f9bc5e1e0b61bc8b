class QuadBettiError(Exception):
    """Base class for all package errors."""


class InputError(QuadBettiError, ValueError):
    """Malformed input: bad rationals, dimension mismatches, out-of-range arguments."""


class NotTransversal(QuadBettiError):
    """The perturbed map is not (certifiably) transversal; re-perturb and retry."""

    def __init__(self, reason: str, message: str = ""):
        super().__init__(message or reason)
        self.reason = reason


class NotGeneric(NotTransversal):
    """Corank-2 suspicion or a label jump other than one on the sphere."""


class MeshTooCoarse(NotTransversal):
    """The sign field is inconsistent at the current mesh resolution."""


class VertexOnCurve(QuadBettiError):
    """A mesh vertex lies exactly on the discriminant curve."""
