"""Dense complex Hermitian linear algebra.

Eigendecomposition, spectral matrix functions (sqrt, support-restricted log,
exp, real powers), the trace norm, and the two-argument resolvent integral
kernel used by the triple-product trace bound.

Conventions fixed here and relied on everywhere else:

* Hermiticity is accepted up to ``HERMITICITY_RTOL * max(1, max|entry|)``;
  accepted matrices are symmetrized before factorization.
* Eigenvalues in ``(-PSD_CLAMP, 0)`` are treated as zero before sqrt/log.
* Logarithms and negative powers act on the support only: eigenvalues at or
  below ``floor`` map to 0 in the image, so spectral functions stay finite
  on singular positive matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EigenSolverError, NonHermitianError, SpectralDomainError

HERMITICITY_RTOL = 1e-12
PSD_CLAMP = 1e-10
SUPPORT_FLOOR = 1e-12
RECONSTRUCTION_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns, so that
    ``V @ diag(w) @ V.conj().T`` reconstructs the input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]


def hermiticity_defect(a: np.ndarray) -> float:
    """Max-abs deviation of ``a`` from its conjugate transpose."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T)))


def hermiticity_tolerance(a: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    return HERMITICITY_RTOL * scale


def require_hermitian(a: np.ndarray, context: str = "matrix") -> np.ndarray:
    """Check Hermiticity within tolerance and return the symmetrized copy."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonHermitianError(f"{context} must be square, got shape {a.shape}")
    defect = hermiticity_defect(a)
    tol = hermiticity_tolerance(a)
    if defect > tol:
        raise NonHermitianError(
            f"{context} is not Hermitian: defect {defect:g} exceeds {tol:g}"
        )
    return 0.5 * (a + a.conj().T)


def hermitian_eig(a: np.ndarray) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    h = require_hermitian(a)
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigendecomposition failed: {exc}") from exc
    return Spectrum(eigenvalues.astype(float), eigenvectors)


def assemble(eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> np.ndarray:
    """Assemble ``V diag(w) V†`` from eigenvalues and eigenvector columns."""
    return (eigenvectors * np.asarray(eigenvalues, dtype=float)) @ eigenvectors.conj().T


def spectrum_apply(spectrum: Spectrum, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Assemble ``V diag(fn(w)) V†`` from a spectral decomposition."""
    return assemble(fn(spectrum.eigenvalues), spectrum.eigenvectors)


def _clamped_psd_eigenvalues(w: np.ndarray, context: str) -> np.ndarray:
    if np.min(w) < -PSD_CLAMP:
        raise SpectralDomainError(
            f"{context} needs a positive semidefinite matrix; "
            f"found eigenvalue {np.min(w):g}"
        )
    return np.maximum(w, 0.0)


def log_on_support(w: np.ndarray, floor: float = SUPPORT_FLOOR) -> np.ndarray:
    """Elementwise log with eigenvalues <= floor mapped to 0."""
    return np.where(w > floor, np.log(np.maximum(w, floor)), 0.0)


def power_on_support(w: np.ndarray, p: float, floor: float = SUPPORT_FLOOR) -> np.ndarray:
    """Elementwise power; negative powers act on the support only."""
    if p < 0:
        return np.where(w > floor, np.power(np.maximum(w, floor), p), 0.0)
    return np.power(w, p)


def matrix_sqrt(a: np.ndarray) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix."""
    spec = hermitian_eig(a)
    w = _clamped_psd_eigenvalues(spec.eigenvalues, "sqrt")
    return assemble(np.sqrt(w), spec.eigenvectors)


def matrix_log(a: np.ndarray, floor: float = SUPPORT_FLOOR) -> np.ndarray:
    """Support-restricted logarithm: eigenvalues <= floor map to 0."""
    spec = hermitian_eig(a)
    w = _clamped_psd_eigenvalues(spec.eigenvalues, "log")
    return assemble(log_on_support(w, floor), spec.eigenvectors)


def matrix_exp(a: np.ndarray) -> np.ndarray:
    """Exponential of a Hermitian matrix."""
    spec = hermitian_eig(a)
    return spectrum_apply(spec, np.exp)


def matrix_power(a: np.ndarray, p: float, floor: float = SUPPORT_FLOOR) -> np.ndarray:
    """Real power of a PSD Hermitian matrix.

    Nonnegative powers clamp the tiny negative eigenvalues allowed by
    ``PSD_CLAMP``; negative powers additionally invert on the support only
    (eigenvalues <= floor map to 0), giving the pseudo-inverse convention.
    """
    spec = hermitian_eig(a)
    w = _clamped_psd_eigenvalues(spec.eigenvalues, f"power({p})")
    return assemble(power_on_support(w, p, floor), spec.eigenvectors)


def trace_norm(a: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    spec = hermitian_eig(a)
    return float(np.sum(np.abs(spec.eigenvalues)))


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, ord="fro"))


def resolvent_integral_kernel(a: float, b: float) -> float:
    """Closed form of the integral of 1/((t+a)(t+b)) over t in [0, inf).

    Equals ln(a/b)/(a-b) with the removable singularity at a = b filled by
    its continuous limit 1/a; near-coincident arguments use the symmetric
    midpoint 2/(a+b), which agrees with 1/a to the width of the branch.
    """
    if a <= 0.0 or b <= 0.0:
        raise SpectralDomainError(f"kernel arguments must be positive, got ({a:g}, {b:g})")
    if abs(a - b) <= 1e-12 * max(a, b):
        return 2.0 / (a + b)
    return float(np.log(a / b) / (a - b))
