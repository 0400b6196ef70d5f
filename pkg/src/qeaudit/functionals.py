"""Scalar entropy functionals on validated states.

All divergences use the natural logarithm. Quantities that are infinite on
support violations (relative entropy, Renyi divergence) return ``math.inf``;
by contract that value arises only when the first state has weight beyond
``SUPPORT_WEIGHT_TOL`` outside the support of the second.
"""

from __future__ import annotations

import math

import numpy as np

from . import tensor
from .errors import ShapeMismatchError
from .linalg import SUPPORT_FLOOR, power_on_support
from .states import DensityMatrix, marginal

ENTROPY_FLOOR = 1e-15
SUPPORT_WEIGHT_TOL = 1e-8


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-Tr rho ln rho, with eigenvalues at or below 1e-15 contributing 0."""
    w = rho.eigenvalues
    mask = w > ENTROPY_FLOOR
    value = -float(np.sum(w[mask] * np.log(w[mask])))
    return max(value, 0.0)


def _support_violation(rho: DensityMatrix, sigma: DensityMatrix) -> bool:
    """True if some populated eigenvector of rho leaks out of supp(sigma)."""
    kernel = sigma.eigenvectors[:, sigma.eigenvalues <= SUPPORT_FLOOR]
    populated = rho.eigenvectors[:, rho.eigenvalues > SUPPORT_FLOOR]
    if kernel.shape[1] == 0 or populated.shape[1] == 0:
        return False
    weights = np.sum(np.abs(kernel.conj().T @ populated) ** 2, axis=0)
    return bool(np.max(weights) > SUPPORT_WEIGHT_TOL)


def _require_same_dim(rho: DensityMatrix, sigma: DensityMatrix) -> None:
    if rho.dim != sigma.dim:
        raise ShapeMismatchError(f"state dimensions differ: {rho.dim} vs {sigma.dim}")


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr rho (ln rho - ln sigma), or inf when supp(rho) leaves supp(sigma).

    The finite branch restricts both logarithms to the respective supports.
    """
    _require_same_dim(rho, sigma)
    if _support_violation(rho, sigma):
        return math.inf
    w = rho.eigenvalues
    mask = w > ENTROPY_FLOOR
    tr_rho_log_rho = float(np.sum(w[mask] * np.log(w[mask])))

    populations = np.real(
        np.einsum("ij,jk,ki->i", sigma.eigenvectors.conj().T, rho.matrix, sigma.eigenvectors)
    )
    support = sigma.eigenvalues > SUPPORT_FLOOR
    cross = float(np.sum(populations[support] * np.log(sigma.eigenvalues[support])))
    return tr_rho_log_rho - cross


def renyi_divergence(rho: DensityMatrix, sigma: DensityMatrix, alpha: float) -> float:
    """Renyi divergence ln(Tr rho^a sigma^(1-a)) / (a - 1) for a in (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    _require_same_dim(rho, sigma)
    overlap_sq = np.abs(rho.eigenvectors.conj().T @ sigma.eigenvectors) ** 2
    wa = power_on_support(rho.eigenvalues, alpha)
    wb = power_on_support(sigma.eigenvalues, 1.0 - alpha)
    trace = float(wa @ overlap_sq @ wb)
    if trace <= 0.0:
        return math.inf
    return math.log(trace) / (alpha - 1.0)


def root_overlap(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr[sqrt(rho) sqrt(sigma)], a fidelity-like similarity in [0, 1]."""
    _require_same_dim(rho, sigma)
    overlap_sq = np.abs(rho.eigenvectors.conj().T @ sigma.eigenvectors) ** 2
    return float(np.sqrt(rho.eigenvalues) @ overlap_sq @ np.sqrt(sigma.eigenvalues))


def mutual_information(rho12: DensityMatrix, dims) -> float:
    """S(rho_1) + S(rho_2) - S(rho_12) on a bipartite factorization.

    Coincides with the relative entropy of rho_12 against the product of
    its marginals.
    """
    dims = tensor.validate_shape(dims, rho12.dim)
    if len(dims) != 2:
        raise ShapeMismatchError(f"mutual information needs a bipartite shape, got {dims}")
    s1 = von_neumann_entropy(marginal(rho12, dims, [0]))
    s2 = von_neumann_entropy(marginal(rho12, dims, [1]))
    return s1 + s2 - von_neumann_entropy(rho12)


def total_correlation(rho: DensityMatrix, dims) -> float:
    """Sum of marginal entropies minus the joint entropy."""
    dims = tensor.validate_shape(dims, rho.dim)
    if len(dims) < 2:
        raise ShapeMismatchError(f"total correlation needs at least 2 subsystems, got {dims}")
    marginal_sum = sum(
        von_neumann_entropy(marginal(rho, dims, [k])) for k in range(len(dims))
    )
    return marginal_sum - von_neumann_entropy(rho)
