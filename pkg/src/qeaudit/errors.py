"""Exception types shared across the package."""


class AuditError(Exception):
    """Base class for all qeaudit domain errors."""


class NonHermitianError(AuditError):
    """Input matrix is not Hermitian within tolerance."""


class EigenSolverError(AuditError):
    """The eigensolver failed to converge."""


class SpectralDomainError(AuditError):
    """A spectral function was requested outside its domain conventions."""


class ShapeMismatchError(AuditError):
    """Subsystem dimensions are inconsistent with the ambient matrix."""


class DensityValidationError(AuditError):
    """A matrix failed density-matrix validation.

    ``invariant`` names the violated property ("hermiticity", "positivity"
    or "trace") and ``defect`` is the measured size of the violation.
    """

    def __init__(self, invariant: str, defect: float, message: str | None = None):
        self.invariant = invariant
        self.defect = float(defect)
        super().__init__(message or f"{invariant} violated by {abs(defect):g}")


class ChannelValidationError(AuditError):
    """Kraus operators do not form a trace-preserving channel."""


class PreconditionError(AuditError):
    """A certificate precondition is not met."""


class DegenerateOverlapError(AuditError):
    """Root overlap collapsed to zero; the logarithmic bound is undefined."""
