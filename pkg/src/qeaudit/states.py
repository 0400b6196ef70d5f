"""Construction and validation of density matrices and quantum channels.

Covers validated states with cached spectra, seeded random ensembles
(Hilbert-Schmidt induced), the antisymmetric two-particle reduction of a
Slater determinant together with its maximally mixed reference, the
block-diagonal family saturating monotonicity of relative entropy, and
Kraus channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg, tensor
from .errors import (
    AuditError,
    ChannelValidationError,
    DensityValidationError,
    ShapeMismatchError,
)
from .linalg import SUPPORT_FLOOR, Spectrum
from .rng import SplitMix64

TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
EQUALITY_FAMILY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state: Hermitian, PSD and unit trace, with cached spectrum.

    ``eigenvalues`` are ascending and clamped to be nonnegative;
    ``eigenvectors`` holds matching orthonormal columns.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def is_full_rank(self, floor: float = SUPPORT_FLOOR) -> bool:
        return self.min_eigenvalue > floor

    def rank(self, floor: float = POSITIVITY_TOL) -> int:
        return int(np.count_nonzero(self.eigenvalues > floor))

    def sqrt(self) -> np.ndarray:
        return linalg.assemble(np.sqrt(self.eigenvalues), self.eigenvectors)

    def log(self, floor: float = SUPPORT_FLOOR) -> np.ndarray:
        """Support-restricted matrix logarithm from the cached spectrum."""
        return linalg.assemble(
            linalg.log_on_support(self.eigenvalues, floor), self.eigenvectors
        )

    def power(self, p: float, floor: float = SUPPORT_FLOOR) -> np.ndarray:
        return linalg.assemble(
            linalg.power_on_support(self.eigenvalues, p, floor), self.eigenvectors
        )


def validate_density(m: np.ndarray) -> DensityMatrix:
    """Validate a matrix as a state or raise a structured rejection.

    Checks, in order: hermiticity, positivity (eigenvalues above
    ``-POSITIVITY_TOL``, then clamped to zero), unit trace. The raised
    ``DensityValidationError`` names the violated invariant and the
    measured defect.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DensityValidationError("hermiticity", float("nan"), f"not square: {m.shape}")
    defect = linalg.hermiticity_defect(m)
    if defect > linalg.hermiticity_tolerance(m):
        raise DensityValidationError("hermiticity", defect)
    h = 0.5 * (m + m.conj().T)
    spec = linalg.hermitian_eig(h)
    if spec.eigenvalues[0] < -POSITIVITY_TOL:
        raise DensityValidationError("positivity", float(spec.eigenvalues[0]))
    trace = float(np.real(np.trace(h)))
    if abs(trace - 1.0) > TRACE_TOL:
        raise DensityValidationError("trace", trace, f"trace {trace:g} is not 1")
    w = np.maximum(spec.eigenvalues, 0.0)
    return DensityMatrix(h, w, spec.eigenvectors)


def marginal(rho: DensityMatrix, dims, keep) -> DensityMatrix:
    """Reduced state on the kept subsystems."""
    return validate_density(tensor.partial_trace(rho.matrix, dims, keep))


def random_hermitian(dim: int, seed: int, scale: float = 1.0) -> np.ndarray:
    """Seeded random Hermitian matrix (G + G†)/2 with Gaussian entries."""
    g = SplitMix64(seed).complex_normal_matrix(dim, dim)
    return scale * 0.5 * (g + g.conj().T)


def random_density(dim: int, rank: int, seed: int) -> DensityMatrix:
    """Seeded random state G G† / Tr(G G†) with G a dim x rank Gaussian."""
    if not 1 <= rank <= dim:
        raise ShapeMismatchError(f"rank must be in [1, {dim}], got {rank}")
    g = SplitMix64(seed).complex_normal_matrix(dim, rank)
    m = g @ g.conj().T
    m /= np.real(np.trace(m))
    return validate_density(m)


def epsilon_mix(rho: DensityMatrix, eps: float) -> DensityMatrix:
    """Mixture (1-eps) rho + eps I/dim; full rank for eps > 0."""
    if not 0.0 <= eps <= 1.0:
        raise ShapeMismatchError(f"eps must be in [0, 1], got {eps}")
    if eps == 0.0:
        return rho
    d = rho.dim
    mixed = (1.0 - eps) * rho.matrix + (eps / d) * np.eye(d)
    w = (1.0 - eps) * rho.eigenvalues + eps / d
    return DensityMatrix(mixed, w, rho.eigenvectors)


def swap_operator(n: int) -> np.ndarray:
    """The exchange operator on C^n x C^n."""
    s = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            s[i * n + j, j * n + i] = 1.0
    return s


def slater_pair(n: int) -> tuple[DensityMatrix, DensityMatrix, tuple[int, int]]:
    """Two-particle reduction of the n-particle Slater determinant, paired
    with the product of its maximally mixed marginals.

    Returns (rho, sigma, shape) where rho is the normalized projector onto
    the antisymmetric subspace of C^n x C^n, built from (I - SWAP)/2 and
    normalized by its rank n(n-1)/2, and sigma = I/n^2. Both marginals of
    rho equal I/n.
    """
    if n < 2:
        raise ShapeMismatchError(f"need at least 2 levels, got {n}")
    dim = n * n
    projector = 0.5 * (np.eye(dim) - swap_operator(n))
    rho = projector / (n * (n - 1) / 2)
    sigma = np.eye(dim, dtype=complex) / dim
    return validate_density(rho), validate_density(sigma), (n, n)


@dataclass(frozen=True)
class Block:
    """One direct summand of the equality family.

    Weights are the block probabilities of the two states. The optional
    operators pin the block states explicitly; when omitted they are drawn
    from the construction seed. ``tau_right`` is shared between the two
    output states by design.
    """

    weight_q: float
    weight_r: float
    left_dim: int
    right_dim: int
    rho_left: np.ndarray | None = None
    sigma_left: np.ndarray | None = None
    tau_right: np.ndarray | None = None


@dataclass(frozen=True)
class BlockSpec:
    """Validated list of blocks: weights positive, each column summing to 1."""

    blocks: tuple[Block, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ShapeMismatchError("block specification is empty")
        for b in self.blocks:
            if b.left_dim < 1 or b.right_dim < 1:
                raise ShapeMismatchError(f"block dimensions must be positive: {b}")
            if b.weight_q <= 0.0 or b.weight_r <= 0.0:
                raise ShapeMismatchError(
                    f"block weights must be positive, got q={b.weight_q}, r={b.weight_r}"
                )
        for label, total in (("q", self._sum("weight_q")), ("r", self._sum("weight_r"))):
            if abs(total - 1.0) > 1e-12:
                raise ShapeMismatchError(f"{label} weights sum to {total!r}, expected 1")

    def _sum(self, attr: str) -> float:
        return float(sum(getattr(b, attr) for b in self.blocks))


def _log_match_residual(rho12, sigma12, rho1, sigma1, dims) -> float:
    delta12 = linalg.matrix_log(rho12) - linalg.matrix_log(sigma12)
    delta1 = linalg.matrix_log(rho1) - linalg.matrix_log(sigma1)
    return linalg.frobenius_norm(delta12 - tensor.lift(delta1, dims, 0))


def equality_family(
    blocks: BlockSpec, seed: int
) -> tuple[DensityMatrix, DensityMatrix, tuple[int, int]]:
    """Generate a pair of bipartite states saturating monotonicity.

    Block j contributes ``q_j * rho_j (x) tau_j`` to the first state and
    ``r_j * sigma_j (x) tau_j`` to the second, block-diagonally in the left
    factor, with the right factor ``tau_j`` shared between both states.
    Such pairs make the joint log-difference equal the lifted marginal
    log-difference, which forces a zero monotonicity gap. The residual of
    that log-difference identity is asserted at construction.

    All blocks must share the same right dimension so the output lives on a
    single bipartite space.
    """
    right_dims = {b.right_dim for b in blocks.blocks}
    if len(right_dims) != 1:
        raise ShapeMismatchError(
            f"all blocks must share one right dimension, got {sorted(right_dims)}"
        )
    d2 = right_dims.pop()

    seeder = SplitMix64(seed)
    rho_blocks = []
    sigma_blocks = []
    for b in blocks.blocks:
        rho_l = b.rho_left if b.rho_left is not None else (
            random_density(b.left_dim, b.left_dim, seeder.next_u64()).matrix
        )
        sigma_l = b.sigma_left if b.sigma_left is not None else (
            random_density(b.left_dim, b.left_dim, seeder.next_u64()).matrix
        )
        tau_r = b.tau_right if b.tau_right is not None else (
            random_density(d2, d2, seeder.next_u64()).matrix
        )
        rho_blocks.append(b.weight_q * tensor.kron(rho_l, tau_r))
        sigma_blocks.append(b.weight_r * tensor.kron(sigma_l, tau_r))

    rho12 = validate_density(tensor.direct_sum(rho_blocks))
    sigma12 = validate_density(tensor.direct_sum(sigma_blocks))
    d1 = sum(b.left_dim for b in blocks.blocks)
    dims = (d1, d2)

    rho1 = tensor.partial_trace(rho12.matrix, dims, [0])
    sigma1 = tensor.partial_trace(sigma12.matrix, dims, [0])
    residual = _log_match_residual(rho12.matrix, sigma12.matrix, rho1, sigma1, dims)
    if residual > EQUALITY_FAMILY_TOL:
        raise AuditError(
            f"equality family construction failed: log-difference residual {residual:g}"
        )
    return rho12, sigma12, dims


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    in_dim: int
    out_dim: int
    kraus_ops: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if not self.kraus_ops:
            raise ChannelValidationError("channel has no Kraus operators")
        for k in self.kraus_ops:
            if k.shape != (self.out_dim, self.in_dim):
                raise ChannelValidationError(
                    f"Kraus operator shape {k.shape} != ({self.out_dim}, {self.in_dim})"
                )
        gram = sum(k.conj().T @ k for k in self.kraus_ops)
        defect = float(np.max(np.abs(gram - np.eye(self.in_dim))))
        if defect > 1e-10:
            raise ChannelValidationError(
                f"channel is not trace preserving: sum K†K differs from I by {defect:g}"
            )


def apply_channel(channel: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply sum_k K rho K†; trace and positivity are preserved."""
    if rho.dim != channel.in_dim:
        raise ShapeMismatchError(
            f"state dimension {rho.dim} != channel input dimension {channel.in_dim}"
        )
    out = np.zeros((channel.out_dim, channel.out_dim), dtype=complex)
    for k in channel.kraus_ops:
        out += k @ rho.matrix @ k.conj().T
    return validate_density(out)


def random_channel(in_dim: int, out_dim: int, n_kraus: int, seed: int) -> KrausChannel:
    """Seeded random channel from a Haar-like isometry.

    A Gaussian (n_kraus*out_dim) x in_dim matrix is orthonormalized by QR
    (with phases fixed so the R diagonal is positive) and sliced into
    n_kraus stacked Kraus blocks, so trace preservation holds by
    construction.
    """
    if n_kraus < 1:
        raise ChannelValidationError(f"need at least one Kraus operator, got {n_kraus}")
    if n_kraus * out_dim < in_dim:
        raise ChannelValidationError(
            f"infeasible dimensions: {n_kraus} Kraus blocks of output dimension "
            f"{out_dim} cannot carry an input of dimension {in_dim}"
        )
    g = SplitMix64(seed).complex_normal_matrix(n_kraus * out_dim, in_dim)
    q, _ = np.linalg.qr(g)
    # canonical column phases: leading significant entry made real positive
    lead = q[np.argmax(np.abs(q) > 1e-12, axis=0), np.arange(q.shape[1])]
    lead = np.where(np.abs(lead) == 0, 1.0, lead)
    isometry = q * (np.abs(lead) / lead)[None, :]
    ops = tuple(
        isometry[i * out_dim:(i + 1) * out_dim, :].copy() for i in range(n_kraus)
    )
    return KrausChannel(in_dim, out_dim, ops)
