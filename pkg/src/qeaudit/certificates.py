"""Certificate evaluators for entropy inequalities and equality conditions.

Each evaluator computes the left side of one inequality together with every
bound it dominates, the per-bound slacks, and any equality-condition
residuals, and packages them into a :class:`Certificate` whose verdict is
decided at a fixed absolute tolerance. Slacks are oriented so that a valid
input always yields slacks >= 0 up to numerical noise: for lower bounds the
slack is lhs - bound, for upper bounds it is bound - lhs. Residuals that
encode exact identities carry a limit and gate the verdict; purely
diagnostic residuals carry none.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import tensor
from .errors import DegenerateOverlapError, PreconditionError, ShapeMismatchError
from .functionals import _support_violation, relative_entropy, von_neumann_entropy
from .linalg import (
    frobenius_norm,
    matrix_exp,
    require_hermitian,
    resolvent_integral_kernel,
    trace_norm,
)
from .states import DensityMatrix, KrausChannel, apply_channel, marginal, validate_density

DEFAULT_TOLERANCE = 1e-8
IDENTITY_TOL = 1e-8
RECOVERY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Certificate:
    """Outcome of one theorem instance.

    ``slacks`` holds one entry per bound (nonnegative up to noise when the
    statement holds); ``residuals`` holds equality-condition defects, of
    which those listed in ``residual_limits`` must stay below their limit
    for the verdict to be "pass".
    """

    name: str
    lhs: float
    bounds: dict[str, float]
    slacks: dict[str, float]
    residuals: dict[str, float] = field(default_factory=dict)
    residual_limits: dict[str, float] = field(default_factory=dict)
    tolerance: float = DEFAULT_TOLERANCE
    verdict: str = "fail"
    flags: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def min_slack(self) -> float:
        return min(self.slacks.values()) if self.slacks else math.inf

    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0


def _finish(
    name: str,
    lhs: float,
    bounds: dict[str, float],
    slacks: dict[str, float],
    residuals: dict[str, float] | None = None,
    residual_limits: dict[str, float] | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    flags: tuple[str, ...] = (),
) -> Certificate:
    residuals = residuals or {}
    residual_limits = residual_limits or {}
    ok = all(s >= -tolerance for s in slacks.values()) and all(
        residuals[key] <= limit for key, limit in residual_limits.items()
    )
    return Certificate(
        name=name,
        lhs=float(lhs),
        bounds={k: float(v) for k, v in bounds.items()},
        slacks={k: float(v) for k, v in slacks.items()},
        residuals={k: float(v) for k, v in residuals.items()},
        residual_limits=dict(residual_limits),
        tolerance=tolerance,
        verdict="pass" if ok else "fail",
        flags=flags,
    )


def _bipartite(dims, ambient: int) -> tuple[int, int]:
    dims = tensor.validate_shape(dims, ambient)
    if len(dims) != 2:
        raise ShapeMismatchError(f"a bipartite shape is required, got {dims}")
    return dims


def _overlap_bound(sqrt_a: np.ndarray, sqrt_b: np.ndarray):
    """Hilbert-Schmidt gap, log bound and overlap-identity residual.

    Returns (hs, renyi, residual) with hs = ||sqrt_a - sqrt_b||_F^2,
    renyi = -2 ln(1 - hs/2), and residual comparing 1 - hs/2 against the
    directly computed overlap Tr[sqrt_a sqrt_b] (an exact identity for unit
    trace arguments).
    """
    hs = frobenius_norm(sqrt_a - sqrt_b) ** 2
    argument = 1.0 - 0.5 * hs
    if argument <= 0.0:
        raise DegenerateOverlapError(
            f"overlap argument {argument:g} is not positive; the log bound is undefined"
        )
    direct = float(np.real(np.trace(sqrt_a @ sqrt_b)))
    return hs, -2.0 * math.log(argument), abs(direct - argument)


def subadditivity_certificate(
    rho12: DensityMatrix, dims, tolerance: float = DEFAULT_TOLERANCE
) -> Certificate:
    """Mutual information against its three product-state comparison bounds.

    lhs = S_1 + S_2 - S_12. Bounds: the sharp log bound
    -2 ln(1 - ||sqrt(rho_12) - sqrt(rho_1 x rho_2)||_F^2 / 2), the squared
    trace-distance bound (Pinsker route), and the raw Hilbert-Schmidt gap,
    which the log bound always dominates.
    """
    dims = _bipartite(dims, rho12.dim)
    rho1 = marginal(rho12, dims, [0])
    rho2 = marginal(rho12, dims, [1])
    lhs = (
        von_neumann_entropy(rho1)
        + von_neumann_entropy(rho2)
        - von_neumann_entropy(rho12)
    )
    sqrt_prod = tensor.kron(rho1.sqrt(), rho2.sqrt())
    hs, renyi, identity_residual = _overlap_bound(rho12.sqrt(), sqrt_prod)
    pinsker = 0.5 * trace_norm(rho12.matrix - tensor.kron(rho1.matrix, rho2.matrix)) ** 2
    bounds = {"renyi": renyi, "pinsker": pinsker, "hs": hs}
    return _finish(
        "subadditivity",
        lhs,
        bounds,
        {k: lhs - v for k, v in bounds.items()},
        residuals={"overlap_identity": identity_residual},
        residual_limits={"overlap_identity": IDENTITY_TOL},
        tolerance=tolerance,
    )


def multipartite_certificate(
    rho: DensityMatrix, dims, tolerance: float = DEFAULT_TOLERANCE
) -> Certificate:
    """Total correlation against the log bound to the product of marginals."""
    dims = tensor.validate_shape(dims, rho.dim)
    if len(dims) < 2:
        raise ShapeMismatchError(f"need at least 2 subsystems, got {dims}")
    marginals = [marginal(rho, dims, [k]) for k in range(len(dims))]
    lhs = sum(von_neumann_entropy(m) for m in marginals) - von_neumann_entropy(rho)
    sqrt_prod = tensor.kron_all([m.sqrt() for m in marginals])
    _, renyi, identity_residual = _overlap_bound(rho.sqrt(), sqrt_prod)
    return _finish(
        "multipartite",
        lhs,
        {"renyi": renyi},
        {"renyi": lhs - renyi},
        residuals={"overlap_identity": identity_residual},
        residual_limits={"overlap_identity": IDENTITY_TOL},
        tolerance=tolerance,
    )


def divergence_bounds_certificate(
    rho: DensityMatrix, sigma: DensityMatrix, tolerance: float = DEFAULT_TOLERANCE
) -> Certificate:
    """Relative entropy against its trace-distance and root-overlap bounds.

    An infinite lhs passes trivially and is flagged, since every finite
    bound is then dominated.
    """
    lhs = relative_entropy(rho, sigma)
    sqrt_r, sqrt_s = rho.sqrt(), sigma.sqrt()
    hs = frobenius_norm(sqrt_r - sqrt_s) ** 2
    direct = float(np.real(np.trace(sqrt_r @ sqrt_s)))
    identity_residual = abs(direct - (1.0 - 0.5 * hs))
    pinsker = 0.5 * trace_norm(rho.matrix - sigma.matrix) ** 2
    renyi_half = -2.0 * math.log(direct) if direct > 0.0 else math.inf
    bounds = {"pinsker": pinsker, "renyi_half": renyi_half}
    if math.isinf(lhs):
        slacks = {k: math.inf for k in bounds}
        flags = ("infinite_lhs",)
    else:
        slacks = {k: lhs - v for k, v in bounds.items()}
        flags = ()
    return _finish(
        "divergence_bounds",
        lhs,
        bounds,
        slacks,
        residuals={"overlap_identity": identity_residual},
        residual_limits={"overlap_identity": IDENTITY_TOL},
        tolerance=tolerance,
        flags=flags,
    )


def _require_full_rank(**named_states: DensityMatrix) -> None:
    for label, state in named_states.items():
        if not state.is_full_rank():
            raise PreconditionError(
                f"{label} is rank deficient (min eigenvalue {state.min_eigenvalue:g}); "
                f"regularize with epsilon_mix before certifying"
            )


def monotonicity_certificate(
    rho12: DensityMatrix,
    sigma12: DensityMatrix,
    dims,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Certificate:
    """Partial-trace contraction of relative entropy with its remainder.

    lhs is the gap D(rho_12||sigma_12) - D(rho_1||sigma_1); the bound is
    the remainder ||sqrt(rho_12) - exp((ln sigma_12 - ln sigma_1 x I
    + ln rho_1 x I)/2)||_F^2. The diagnostic ``log_match`` residual is the
    Frobenius defect of the equality condition
    ln rho_12 - ln sigma_12 = (ln rho_1 - ln sigma_1) x I; it vanishes
    exactly when the gap does.
    """
    dims = _bipartite(dims, rho12.dim)
    if sigma12.dim != rho12.dim:
        raise ShapeMismatchError(f"state dimensions differ: {rho12.dim} vs {sigma12.dim}")
    rho1 = marginal(rho12, dims, [0])
    sigma1 = marginal(sigma12, dims, [0])
    _require_full_rank(sigma12=sigma12, sigma1=sigma1, rho1=rho1)

    lhs = relative_entropy(rho12, sigma12) - relative_entropy(rho1, sigma1)
    log_s12 = sigma12.log()
    log_s1_lift = tensor.lift(sigma1.log(), dims, 0)
    log_r1_lift = tensor.lift(rho1.log(), dims, 0)
    recovery = matrix_exp(0.5 * (log_s12 - log_s1_lift + log_r1_lift))
    remainder = frobenius_norm(rho12.sqrt() - recovery) ** 2

    log_match = frobenius_norm(
        (rho12.log() - log_s12) - (tensor.lift(rho1.log() - sigma1.log(), dims, 0))
    )
    return _finish(
        "monotonicity",
        lhs,
        {"remainder": remainder},
        {"remainder": lhs - remainder},
        residuals={"log_match": log_match},
        tolerance=tolerance,
    )


def petz_recovery(
    rho12: DensityMatrix, dims, tau1: DensityMatrix
) -> DensityMatrix:
    """Transfer a state on subsystem 1 back to the joint space through rho12.

    Maps tau_1 to sqrt(rho_12) (rho_1^{-1/2} tau_1 rho_1^{-1/2} x I)
    sqrt(rho_12). The map is trace preserving on states supported in
    supp(rho_1) and returns rho_12 itself when fed rho_1.
    """
    dims = _bipartite(dims, rho12.dim)
    if tau1.dim != dims[0]:
        raise ShapeMismatchError(
            f"recovery input dimension {tau1.dim} != subsystem dimension {dims[0]}"
        )
    rho1 = marginal(rho12, dims, [0])
    if _support_violation(tau1, rho1):
        raise PreconditionError("recovery input is not supported in supp(rho_1)")
    inv_sqrt = rho1.power(-0.5)
    lifted = tensor.lift(inv_sqrt @ tau1.matrix @ inv_sqrt, dims, 0)
    sqrt_joint = rho12.sqrt()
    return validate_density(sqrt_joint @ lifted @ sqrt_joint)


def petz_equality_residual(
    rho12: DensityMatrix, sigma12: DensityMatrix, dims
) -> float:
    """Tr[(T(sigma_1) - sigma_12)^2] for the recovery map built from rho12.

    Zero exactly when sigma_12 is recovered from its own marginal, the
    recovery-map form of the equality condition for monotonicity.
    """
    dims = _bipartite(dims, rho12.dim)
    sigma1 = marginal(sigma12, dims, [0])
    recovered = petz_recovery(rho12, dims, sigma1)
    return frobenius_norm(recovered.matrix - sigma12.matrix) ** 2


def gt3_certificate(
    rho1: DensityMatrix,
    sigma1: DensityMatrix,
    sigma12: DensityMatrix,
    dims,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Certificate:
    """Triple-product trace bound with its closed-form resolvent integral.

    lhs = Tr exp(ln sigma_12 - ln sigma_1 x I + ln rho_1 x I) is bounded by
    the integral of Tr[sigma_12 (t+sigma_1)^{-1} rho_1 (t+sigma_1)^{-1}]
    over t >= 0, evaluated exactly in the eigenbasis of sigma_1 via the
    two-point resolvent kernel. When sigma_1 is the marginal of sigma_12
    the integral collapses to Tr rho_1 = 1, recorded as the gating
    ``unit_integral`` residual.
    """
    dims = _bipartite(dims, sigma12.dim)
    if rho1.dim != dims[0] or sigma1.dim != dims[0]:
        raise ShapeMismatchError(
            f"marginal inputs must live on dimension {dims[0]}, "
            f"got {rho1.dim} and {sigma1.dim}"
        )
    _require_full_rank(sigma12=sigma12, sigma1=sigma1, rho1=rho1)

    exponent = (
        sigma12.log()
        - tensor.lift(sigma1.log(), dims, 0)
        + tensor.lift(rho1.log(), dims, 0)
    )
    lhs = float(np.real(np.trace(matrix_exp(exponent))))

    u = sigma1.eigenvectors
    s = sigma1.eigenvalues
    sigma12_marginal = tensor.partial_trace(sigma12.matrix, dims, [0])
    rho_t = u.conj().T @ rho1.matrix @ u
    marg_t = u.conj().T @ sigma12_marginal @ u
    d1 = dims[0]
    kernel = np.empty((d1, d1))
    for a in range(d1):
        for b in range(d1):
            kernel[a, b] = resolvent_integral_kernel(float(s[a]), float(s[b]))
    integral = float(np.real(np.sum(kernel * rho_t * marg_t.T)))

    return _finish(
        "gt3",
        lhs,
        {"triple_product": integral},
        {"triple_product": integral - lhs},
        residuals={"unit_integral": abs(integral - 1.0)},
        residual_limits={"unit_integral": IDENTITY_TOL},
        tolerance=tolerance,
    )


def proofstep_certificate(
    h: np.ndarray, a: np.ndarray, tolerance: float = DEFAULT_TOLERANCE
) -> Certificate:
    """The two scalar trace inequalities used by every bound in this module.

    With Tr e^{-H} = 1 (H is shifted to enforce this, and the shift is
    flagged): Tr e^{-H+A} >= exp(Tr A e^{-H}) and, with X = -H, Y = A,
    Tr e^{X+Y} <= Tr e^X e^Y. lhs = Tr e^{-H+A} sits between the two.
    """
    h = require_hermitian(np.asarray(h, dtype=complex), "H")
    a = require_hermitian(np.asarray(a, dtype=complex), "A")
    if h.shape != a.shape:
        raise ShapeMismatchError(f"H and A dimensions differ: {h.shape} vs {a.shape}")
    flags: tuple[str, ...] = ()
    partition = float(np.real(np.trace(matrix_exp(-h))))
    if abs(partition - 1.0) > 1e-9:
        h = h + math.log(partition) * np.eye(h.shape[0])
        flags = ("normalized",)
    gibbs = matrix_exp(-h)
    lhs = float(np.real(np.trace(matrix_exp(a - h))))
    pb_bound = math.exp(float(np.real(np.trace(a @ gibbs))))
    gt_bound = float(np.real(np.trace(gibbs @ matrix_exp(a))))
    return _finish(
        "proofstep",
        lhs,
        {"peierls_bogoliubov": pb_bound, "golden_thompson": gt_bound},
        {"peierls_bogoliubov": lhs - pb_bound, "golden_thompson": gt_bound - lhs},
        tolerance=tolerance,
        flags=flags,
    )


def data_processing_certificate(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    channel: KrausChannel,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Certificate:
    """Relative entropy contraction under a Kraus channel."""
    lhs = relative_entropy(rho, sigma)
    if math.isinf(lhs):
        raise PreconditionError("relative entropy of the inputs is infinite")
    bound = relative_entropy(apply_channel(channel, rho), apply_channel(channel, sigma))
    return _finish(
        "data_processing",
        lhs,
        {"processed": bound},
        {"processed": lhs - bound},
        tolerance=tolerance,
    )
