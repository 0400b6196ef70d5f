import math

import numpy as np
import pytest

from qeaudit import states, tensor
from qeaudit.errors import (
    AuditError,
    ChannelValidationError,
    DensityValidationError,
    ShapeMismatchError,
)
from qeaudit.functionals import relative_entropy, root_overlap
from qeaudit.states import (
    Block,
    BlockSpec,
    KrausChannel,
    apply_channel,
    epsilon_mix,
    equality_family,
    random_channel,
    random_density,
    random_hermitian,
    slater_pair,
    validate_density,
)

from oracles import classical_kl


class TestValidateDensity:
    def test_accepts_maximally_mixed(self):
        rho = validate_density(np.eye(2) / 2)
        assert rho.dim == 2
        assert np.allclose(rho.eigenvalues, [0.5, 0.5])

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(DensityValidationError) as exc:
            validate_density(np.diag([1.2, -0.2]))
        assert exc.value.invariant == "positivity"
        assert exc.value.defect == pytest.approx(-0.2, abs=1e-12)
        assert "positivity violated by 0.2" in str(exc.value)

    def test_rejects_bad_trace(self):
        with pytest.raises(DensityValidationError) as exc:
            validate_density(np.diag([0.6, 0.6]))
        assert exc.value.invariant == "trace"
        assert exc.value.defect == pytest.approx(1.2, abs=1e-12)

    def test_rejects_non_hermitian(self):
        m = np.array([[0.5, 0.3], [0.0, 0.5]], dtype=complex)
        with pytest.raises(DensityValidationError) as exc:
            validate_density(m)
        assert exc.value.invariant == "hermiticity"

    def test_clamps_tiny_negatives(self):
        rho = validate_density(np.diag([1.0 + 5e-11, -5e-11]))
        assert rho.eigenvalues[0] == 0.0


class TestRandomDensity:
    def test_trivial_scalar_state(self):
        rho = random_density(1, 1, seed=0)
        assert np.allclose(rho.matrix, [[1.0]])

    def test_deterministic(self):
        a = random_density(4, 4, seed=99)
        b = random_density(4, 4, seed=99)
        assert np.array_equal(a.matrix, b.matrix)

    def test_different_seeds_differ(self):
        a = random_density(4, 4, seed=1)
        b = random_density(4, 4, seed=2)
        assert not np.allclose(a.matrix, b.matrix)

    def test_rank_control(self):
        rho = random_density(4, 2, seed=5)
        assert int(np.count_nonzero(rho.eigenvalues > 1e-10)) == 2

    def test_rejects_bad_rank(self):
        with pytest.raises(ShapeMismatchError):
            random_density(3, 4, seed=0)
        with pytest.raises(ShapeMismatchError):
            random_density(3, 0, seed=0)

    def test_random_hermitian_properties(self):
        h = random_hermitian(5, seed=3)
        assert np.allclose(h, h.conj().T)
        assert np.array_equal(h, random_hermitian(5, seed=3))


class TestSlaterPair:
    def test_n2_is_singlet(self):
        rho, sigma, dims = slater_pair(2)
        assert dims == (2, 2)
        assert rho.rank() == 1
        assert np.allclose(sigma.matrix, np.eye(4) / 4)

    def test_n2_relative_entropy(self):
        rho, sigma, _ = slater_pair(2)
        assert relative_entropy(rho, sigma) == pytest.approx(math.log(4), abs=1e-10)

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_marginals_maximally_mixed(self, n):
        rho, _, dims = slater_pair(n)
        for slot in (0, 1):
            red = tensor.partial_trace(rho.matrix, dims, [slot])
            assert np.max(np.abs(red - np.eye(n) / n)) <= 1e-10

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_log_overlap_equals_divergence(self, n):
        rho, sigma, _ = slater_pair(n)
        d = relative_entropy(rho, sigma)
        assert -2.0 * math.log(root_overlap(rho, sigma)) == pytest.approx(d, abs=1e-9)
        assert d == pytest.approx(math.log(2 * n / (n - 1)), abs=1e-9)

    def test_rejects_small_n(self):
        with pytest.raises(ShapeMismatchError):
            slater_pair(1)


class TestEqualityFamily:
    def test_single_block_shared_state_gives_equal_pair(self):
        shared = random_density(2, 2, seed=8).matrix
        spec = BlockSpec(
            (Block(1.0, 1.0, 2, 2, rho_left=shared, sigma_left=shared),)
        )
        rho12, sigma12, dims = equality_family(spec, seed=0)
        assert dims == (2, 2)
        assert np.allclose(rho12.matrix, sigma12.matrix, atol=1e-14)

    def test_two_blocks_build_and_validate(self):
        spec = BlockSpec((Block(0.5, 0.25, 2, 2), Block(0.5, 0.75, 2, 2)))
        rho12, sigma12, dims = equality_family(spec, seed=12)
        assert dims == (4, 2)
        assert rho12.is_full_rank() and sigma12.is_full_rank()

    def test_deterministic(self):
        spec = BlockSpec((Block(0.5, 0.25, 2, 2), Block(0.5, 0.75, 2, 2)))
        a = equality_family(spec, seed=4)[0]
        b = equality_family(spec, seed=4)[0]
        assert np.array_equal(a.matrix, b.matrix)

    def test_classical_decomposition_on_diagonal_blocks(self):
        # with commuting diagonal blocks the marginal divergence splits into
        # a weight term plus the weighted per-block divergences
        q = (0.5, 0.5)
        r = (0.25, 0.75)
        p_blocks = ([0.2, 0.8], [0.6, 0.4])
        s_blocks = ([0.5, 0.5], [0.3, 0.7])
        blocks = tuple(
            Block(
                q[j], r[j], 2, 2,
                rho_left=np.diag(p_blocks[j]).astype(complex),
                sigma_left=np.diag(s_blocks[j]).astype(complex),
            )
            for j in range(2)
        )
        rho12, sigma12, dims = equality_family(BlockSpec(blocks), seed=77)
        rho1 = states.marginal(rho12, dims, [0])
        sigma1 = states.marginal(sigma12, dims, [0])
        expected = classical_kl(q, r) + sum(
            q[j] * classical_kl(p_blocks[j], s_blocks[j]) for j in range(2)
        )
        assert relative_entropy(rho1, sigma1) == pytest.approx(expected, abs=1e-10)

    def test_rejects_mismatched_right_dims(self):
        spec_blocks = (Block(0.5, 0.5, 2, 2), Block(0.5, 0.5, 2, 3))
        with pytest.raises(ShapeMismatchError):
            equality_family(BlockSpec(spec_blocks), seed=0)

    def test_rejects_bad_weights(self):
        with pytest.raises(ShapeMismatchError):
            BlockSpec((Block(0.5, 1.0, 2, 2), Block(0.6, 0.0, 2, 2)))
        with pytest.raises(ShapeMismatchError):
            BlockSpec((Block(0.7, 0.5, 2, 2), Block(0.5, 0.5, 2, 2)))


class TestChannels:
    def test_identity_channel(self):
        chan = KrausChannel(2, 2, (np.eye(2, dtype=complex),))
        rho = random_density(2, 2, seed=6)
        out = apply_channel(chan, rho)
        assert np.allclose(out.matrix, rho.matrix, atol=1e-12)

    def test_depolarizing_channel(self):
        d = 3
        ops = tuple(
            np.outer(np.eye(d)[:, x], np.eye(d)[:, y]).astype(complex) / math.sqrt(d)
            for x in range(d)
            for y in range(d)
        )
        chan = KrausChannel(d, d, ops)
        out = apply_channel(chan, random_density(d, d, seed=9))
        assert np.allclose(out.matrix, np.eye(d) / d, atol=1e-12)

    def test_partial_trace_as_kraus_channel(self):
        d1, d2 = 2, 3
        ops = []
        for x in range(d2):
            k = np.zeros((d1, d1 * d2), dtype=complex)
            for i in range(d1):
                k[i, i * d2 + x] = 1.0
            ops.append(k)
        chan = KrausChannel(d1 * d2, d1, tuple(ops))
        rho = random_density(d1 * d2, d1 * d2, seed=13)
        via_channel = apply_channel(chan, rho)
        direct = tensor.partial_trace(rho.matrix, (d1, d2), [0])
        assert np.allclose(via_channel.matrix, direct, atol=1e-12)

    def test_rejects_non_trace_preserving(self):
        with pytest.raises(ChannelValidationError):
            KrausChannel(2, 2, (0.5 * np.eye(2, dtype=complex),))

    def test_random_channel_invariant(self):
        chan = random_channel(3, 2, 4, seed=17)
        gram = sum(k.conj().T @ k for k in chan.kraus_ops)
        assert np.max(np.abs(gram - np.eye(3))) <= 1e-10

    def test_random_channel_deterministic(self):
        a = random_channel(3, 2, 4, seed=21)
        b = random_channel(3, 2, 4, seed=21)
        for ka, kb in zip(a.kraus_ops, b.kraus_ops):
            assert np.array_equal(ka, kb)

    def test_random_channel_scalar(self):
        chan = random_channel(1, 1, 1, seed=2)
        assert np.allclose(chan.kraus_ops[0], [[1.0]], atol=1e-12)

    def test_random_channel_infeasible(self):
        with pytest.raises(ChannelValidationError):
            random_channel(5, 2, 2, seed=0)

    def test_apply_channel_dimension_mismatch(self):
        chan = random_channel(3, 2, 4, seed=17)
        with pytest.raises(ShapeMismatchError):
            apply_channel(chan, random_density(2, 2, seed=1))


class TestEpsilonMix:
    def test_zero_eps_is_identity_map(self):
        rho = random_density(3, 3, seed=14)
        assert epsilon_mix(rho, 0.0) is rho

    def test_full_mix_is_maximally_mixed(self):
        rho = random_density(3, 3, seed=15)
        out = epsilon_mix(rho, 1.0)
        assert np.allclose(out.matrix, np.eye(3) / 3, atol=1e-14)

    def test_min_eigenvalue_floor(self):
        rho = random_density(4, 1, seed=16)  # pure, rank 1
        eps = 1e-4
        out = epsilon_mix(rho, eps)
        assert out.min_eigenvalue >= eps / 4 - 1e-15

    def test_rejects_out_of_range(self):
        rho = random_density(2, 2, seed=17)
        with pytest.raises(ShapeMismatchError):
            epsilon_mix(rho, -0.1)
        with pytest.raises(ShapeMismatchError):
            epsilon_mix(rho, 1.5)

    def test_mix_passes_validation(self):
        rho = random_density(5, 2, seed=18)
        out = epsilon_mix(rho, 1e-6)
        validate_density(out.matrix)  # no raise
