"""Tensor-product index bookkeeping.

Kronecker products, partial traces over arbitrary subsystem subsets,
single-slot operator lifts, and block-diagonal direct sums.

Subsystem 0 is the slowest-varying index (the leftmost Kronecker factor),
matching ``numpy.kron``: the ambient row index of a product over dims
``(d0, d1, ...)`` is ``i0*d1*d2*... + i1*d2*... + ...``.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import ShapeMismatchError


def validate_shape(dims: Sequence[int], ambient_dim: int) -> tuple[int, ...]:
    """Check that ``dims`` factorizes a matrix of size ``ambient_dim``."""
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ShapeMismatchError(f"subsystem dimensions must be positive, got {dims}")
    if math.prod(dims) != ambient_dim:
        raise ShapeMismatchError(
            f"shape {dims} has product {math.prod(dims)}, ambient dimension is {ambient_dim}"
        )
    return dims


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the left factor slowest."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    out = None
    for m in mats:
        out = np.asarray(m, dtype=complex) if out is None else kron(out, m)
    if out is None:
        raise ShapeMismatchError("kron_all needs at least one factor")
    return out


def _subsystem_strides(dims: Sequence[int]) -> list[int]:
    strides = [1] * len(dims)
    for k in range(len(dims) - 2, -1, -1):
        strides[k] = strides[k + 1] * dims[k + 1]
    return strides


def _offsets(dims: Sequence[int], strides: Sequence[int]) -> np.ndarray:
    """Flat ambient offsets of every multi-index over the given subsystems."""
    offsets = np.zeros(1, dtype=np.intp)
    for d, s in zip(dims, strides):
        offsets = (offsets[:, None] + s * np.arange(d, dtype=np.intp)[None, :]).ravel()
    return offsets


def _normalized_keep(keep: Iterable[int], n: int) -> tuple[int, ...]:
    keep = tuple(sorted(set(int(k) for k in keep)))
    if not keep:
        raise ShapeMismatchError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise ShapeMismatchError(f"keep {keep} out of range for {n} subsystems")
    return keep


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep`` (0-based indices).

    Computed by direct summation over the traced multi-indices: the output
    entry at kept indices (i, j) is the sum of ``m[i+t, j+t]`` over all flat
    offsets ``t`` of the traced subsystems.
    """
    m = np.asarray(m, dtype=complex)
    dims = validate_shape(dims, m.shape[0])
    keep = _normalized_keep(keep, len(dims))
    strides = _subsystem_strides(dims)
    if len(keep) == len(dims):
        return m.copy()

    traced = [k for k in range(len(dims)) if k not in keep]
    kept_offsets = _offsets([dims[k] for k in keep], [strides[k] for k in keep])
    traced_offsets = _offsets([dims[k] for k in traced], [strides[k] for k in traced])

    out = np.zeros((len(kept_offsets), len(kept_offsets)), dtype=complex)
    for t in traced_offsets:
        idx = kept_offsets + t
        out += m[np.ix_(idx, idx)]
    return out


def lift(a: np.ndarray, dims: Sequence[int], at: int) -> np.ndarray:
    """Embed ``a`` into slot ``at`` of the product space: I x .. x a x .. x I."""
    a = np.asarray(a, dtype=complex)
    dims = tuple(int(d) for d in dims)
    if at < 0 or at >= len(dims):
        raise ShapeMismatchError(f"slot {at} out of range for shape {dims}")
    if a.shape != (dims[at], dims[at]):
        raise ShapeMismatchError(
            f"operator of shape {a.shape} does not fit subsystem {at} of dimension {dims[at]}"
        )
    before = math.prod(dims[:at])
    after = math.prod(dims[at + 1:])
    out = a
    if before > 1:
        out = kron(np.eye(before), out)
    if after > 1:
        out = kron(out, np.eye(after))
    return out


def direct_sum(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Block-diagonal embedding of square blocks, in order."""
    blocks = [np.asarray(b, dtype=complex) for b in blocks]
    if not blocks:
        raise ShapeMismatchError("direct_sum needs at least one block")
    total = sum(b.shape[0] for b in blocks)
    out = np.zeros((total, total), dtype=complex)
    pos = 0
    for b in blocks:
        n = b.shape[0]
        out[pos:pos + n, pos:pos + n] = b
        pos += n
    return out
