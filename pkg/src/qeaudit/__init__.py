"""Numerical certificates for quantum entropy inequalities.

Computes von Neumann entropy functionals on finite-dimensional density
matrices and certifies subadditivity, divergence lower bounds, monotonicity
of relative entropy with its remainder term, recovery-map consistency, and
the trace inequalities behind them, over both closed-form families and
seeded random sweeps.
"""

from .certificates import (
    Certificate,
    DEFAULT_TOLERANCE,
    data_processing_certificate,
    divergence_bounds_certificate,
    gt3_certificate,
    monotonicity_certificate,
    multipartite_certificate,
    petz_equality_residual,
    petz_recovery,
    proofstep_certificate,
    subadditivity_certificate,
)
from .errors import (
    AuditError,
    ChannelValidationError,
    DegenerateOverlapError,
    DensityValidationError,
    EigenSolverError,
    NonHermitianError,
    PreconditionError,
    ShapeMismatchError,
    SpectralDomainError,
)
from .functionals import (
    mutual_information,
    relative_entropy,
    renyi_divergence,
    root_overlap,
    total_correlation,
    von_neumann_entropy,
)
from .harness import Report, SweepConfig, replay_trial, run_slater_battery, run_sweep
from .linalg import (
    Spectrum,
    hermitian_eig,
    matrix_exp,
    matrix_log,
    matrix_power,
    matrix_sqrt,
    resolvent_integral_kernel,
    trace_norm,
)
from .states import (
    Block,
    BlockSpec,
    DensityMatrix,
    KrausChannel,
    apply_channel,
    epsilon_mix,
    equality_family,
    marginal,
    random_channel,
    random_density,
    random_hermitian,
    slater_pair,
    validate_density,
)
from .tensor import direct_sum, kron, lift, partial_trace

__version__ = "0.1.0"

__all__ = [
    "AuditError",
    "Block",
    "BlockSpec",
    "Certificate",
    "ChannelValidationError",
    "DEFAULT_TOLERANCE",
    "DegenerateOverlapError",
    "DensityMatrix",
    "DensityValidationError",
    "EigenSolverError",
    "KrausChannel",
    "NonHermitianError",
    "PreconditionError",
    "Report",
    "ShapeMismatchError",
    "SpectralDomainError",
    "Spectrum",
    "SweepConfig",
    "apply_channel",
    "data_processing_certificate",
    "direct_sum",
    "divergence_bounds_certificate",
    "epsilon_mix",
    "equality_family",
    "gt3_certificate",
    "hermitian_eig",
    "kron",
    "lift",
    "marginal",
    "matrix_exp",
    "matrix_log",
    "matrix_power",
    "matrix_sqrt",
    "monotonicity_certificate",
    "multipartite_certificate",
    "mutual_information",
    "partial_trace",
    "petz_equality_residual",
    "petz_recovery",
    "proofstep_certificate",
    "random_channel",
    "random_density",
    "random_hermitian",
    "relative_entropy",
    "renyi_divergence",
    "replay_trial",
    "resolvent_integral_kernel",
    "root_overlap",
    "run_slater_battery",
    "run_sweep",
    "slater_pair",
    "subadditivity_certificate",
    "total_correlation",
    "trace_norm",
    "validate_density",
    "von_neumann_entropy",
]
