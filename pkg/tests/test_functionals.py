import math

import numpy as np
import pytest

from qeaudit import functionals as fn
from qeaudit import tensor
from qeaudit.errors import ShapeMismatchError
from qeaudit.linalg import frobenius_norm, hermitian_eig, trace_norm
from qeaudit.states import marginal, random_density, random_hermitian, slater_pair, validate_density

from oracles import classical_renyi, entropy_scipy, ptrace_einsum


def pure_state(vec):
    vec = np.asarray(vec, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    return validate_density(np.outer(vec, vec.conj()))


def ghz_state():
    psi = np.zeros(8, dtype=complex)
    psi[0] = psi[7] = 1.0 / math.sqrt(2.0)
    return validate_density(np.outer(psi, psi.conj()))


def bell_state():
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1.0 / math.sqrt(2.0)
    return validate_density(np.outer(psi, psi.conj()))


class TestVonNeumannEntropy:
    def test_pure_state(self):
        assert fn.von_neumann_entropy(pure_state([1.0, 0.0])) == 0.0

    def test_maximally_mixed(self):
        rho = validate_density(np.eye(5) / 5)
        assert fn.von_neumann_entropy(rho) == pytest.approx(math.log(5), abs=1e-12)

    def test_binary_spectrum(self):
        # scalar oracle: -0.25 ln 0.25 - 0.75 ln 0.75
        rho = validate_density(np.diag([0.25, 0.75]))
        assert fn.von_neumann_entropy(rho) == pytest.approx(0.5623351446188083, abs=1e-12)

    def test_bounded_by_log_dim(self):
        for seed in range(6):
            rho = random_density(6, 6, seed=seed)
            s = fn.von_neumann_entropy(rho)
            assert 0.0 <= s <= math.log(6) + 1e-10


class TestRelativeEntropy:
    def test_self_is_zero(self):
        rho = random_density(4, 4, seed=1)
        assert fn.relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_pure_vs_maximally_mixed(self):
        d = 5
        phi = pure_state(np.arange(1, d + 1))
        sigma = validate_density(np.eye(d) / d)
        assert fn.relative_entropy(phi, sigma) == pytest.approx(math.log(d), abs=1e-10)

    def test_slater_closed_form(self):
        rho, sigma, _ = slater_pair(3)
        assert fn.relative_entropy(rho, sigma) == pytest.approx(math.log(3), abs=1e-10)

    def test_support_violation_is_infinite(self):
        rho = pure_state([1.0, 0.0])
        sigma = pure_state([0.0, 1.0])
        assert math.isinf(fn.relative_entropy(rho, sigma))

    def test_nonnegative_on_random_pairs(self):
        for seed in range(10):
            rho = random_density(5, 5, seed=2 * seed)
            sigma = random_density(5, 5, seed=2 * seed + 1)
            assert fn.relative_entropy(rho, sigma) >= -1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            fn.relative_entropy(random_density(2, 2, 0), random_density(3, 3, 0))

    def test_joint_unitary_invariance(self):
        for seed in range(5):
            rho = random_density(4, 4, seed=40 + seed)
            sigma = random_density(4, 4, seed=80 + seed)
            u = hermitian_eig(random_hermitian(4, seed=120 + seed)).eigenvectors
            rho_u = validate_density(u @ rho.matrix @ u.conj().T)
            sigma_u = validate_density(u @ sigma.matrix @ u.conj().T)
            assert fn.relative_entropy(rho_u, sigma_u) == pytest.approx(
                fn.relative_entropy(rho, sigma), abs=1e-9
            )

    def test_pinsker_inequality(self):
        for seed in range(20):
            rho = random_density(4, 4, seed=300 + seed)
            sigma = random_density(4, 4, seed=600 + seed)
            d = fn.relative_entropy(rho, sigma)
            bound = 0.5 * trace_norm(rho.matrix - sigma.matrix) ** 2
            assert d - bound >= -1e-8


class TestRenyiDivergence:
    def test_zero_on_equal_states(self):
        rho = random_density(3, 3, seed=7)
        for alpha in (0.1, 0.5, 0.9):
            assert fn.renyi_divergence(rho, rho, alpha) == pytest.approx(0.0, abs=1e-12)

    def test_half_order_matches_overlap_on_slater(self):
        rho, sigma, _ = slater_pair(4)
        d_half = fn.renyi_divergence(rho, sigma, 0.5)
        assert d_half == pytest.approx(-2.0 * math.log(fn.root_overlap(rho, sigma)), abs=1e-10)
        # the family saturates the half-order bound
        assert d_half == pytest.approx(fn.relative_entropy(rho, sigma), abs=1e-9)

    def test_commuting_matches_classical(self):
        rho = validate_density(np.diag([0.3, 0.7]))
        sigma = validate_density(np.diag([0.5, 0.5]))
        expected = classical_renyi([0.3, 0.7], [0.5, 0.5], 0.5)
        assert fn.renyi_divergence(rho, sigma, 0.5) == pytest.approx(expected, abs=1e-12)

    def test_rejects_alpha_out_of_range(self):
        rho = random_density(2, 2, seed=1)
        for alpha in (0.0, 1.0, -0.3, 1.7):
            with pytest.raises(ValueError):
                fn.renyi_divergence(rho, rho, alpha)

    def test_monotone_in_alpha(self):
        grid = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
        for seed in range(8):
            rho = random_density(4, 4, seed=1000 + seed)
            sigma = random_density(4, 4, seed=2000 + seed)
            values = [fn.renyi_divergence(rho, sigma, a) for a in grid]
            for lo, hi in zip(values, values[1:]):
                assert hi - lo >= -1e-8
            assert values[-1] <= fn.relative_entropy(rho, sigma) + 1e-8


class TestRootOverlap:
    def test_equal_states(self):
        rho = random_density(4, 4, seed=3)
        assert fn.root_overlap(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_pure_states(self):
        assert fn.root_overlap(pure_state([1, 0]), pure_state([0, 1])) == 0.0

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_slater_closed_form(self, n):
        # projector algebra: Tr sqrt(rho) = sqrt(rank) with rank n(n-1)/2,
        # and sqrt(sigma) = I/n, so the overlap is sqrt((n-1)/(2n))
        rho, sigma, _ = slater_pair(n)
        assert fn.root_overlap(rho, sigma) == pytest.approx(
            math.sqrt((n - 1) / (2 * n)), abs=1e-10
        )

    def test_identity_against_hilbert_schmidt_gap(self):
        for seed in range(10):
            rho = random_density(5, 5, seed=50 + seed)
            sigma = random_density(5, 5, seed=150 + seed)
            overlap = fn.root_overlap(rho, sigma)
            gap = frobenius_norm(rho.sqrt() - sigma.sqrt()) ** 2
            assert abs(overlap - (1.0 - 0.5 * gap)) <= 1e-10

    def test_range(self):
        for seed in range(10):
            rho = random_density(4, 2, seed=seed)
            sigma = random_density(4, 4, seed=seed + 500)
            assert 0.0 <= fn.root_overlap(rho, sigma) <= 1.0 + 1e-10


class TestMutualInformation:
    def test_product_state(self):
        joint = validate_density(
            tensor.kron(random_density(2, 2, 1).matrix, random_density(3, 3, 2).matrix)
        )
        assert fn.mutual_information(joint, (2, 3)) == pytest.approx(0.0, abs=1e-10)

    def test_maximally_entangled(self):
        assert fn.mutual_information(bell_state(), (2, 2)) == pytest.approx(
            2 * math.log(2), abs=1e-10
        )

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_slater_closed_form(self, n):
        rho, _, dims = slater_pair(n)
        assert fn.mutual_information(rho, dims) == pytest.approx(
            math.log(2 * n / (n - 1)), abs=1e-9
        )

    def test_equals_divergence_from_marginal_product(self):
        for seed in range(6):
            rho12 = random_density(6, 6, seed=700 + seed)
            product = validate_density(
                tensor.kron(
                    marginal(rho12, (2, 3), [0]).matrix,
                    marginal(rho12, (2, 3), [1]).matrix,
                )
            )
            assert fn.mutual_information(rho12, (2, 3)) == pytest.approx(
                fn.relative_entropy(rho12, product), abs=1e-9
            )

    def test_rejects_non_bipartite(self):
        rho = random_density(8, 8, seed=0)
        with pytest.raises(ShapeMismatchError):
            fn.mutual_information(rho, (2, 2, 2))


class TestTotalCorrelation:
    def test_threefold_product(self):
        parts = [random_density(2, 2, seed=s).matrix for s in (1, 2, 3)]
        joint = validate_density(tensor.kron_all(parts))
        assert fn.total_correlation(joint, (2, 2, 2)) == pytest.approx(0.0, abs=1e-10)

    def test_ghz(self):
        assert fn.total_correlation(ghz_state(), (2, 2, 2)) == pytest.approx(
            3 * math.log(2), abs=1e-10
        )

    def test_reduces_to_mutual_information(self):
        rho = random_density(6, 6, seed=9)
        assert fn.total_correlation(rho, (2, 3)) == pytest.approx(
            fn.mutual_information(rho, (2, 3)), abs=1e-12
        )

    def test_matches_bruteforce_oracle(self):
        rho = random_density(8, 8, seed=42)
        expected = (
            sum(
                entropy_scipy(ptrace_einsum(rho.matrix, (2, 2, 2), [k]))
                for k in range(3)
            )
            - entropy_scipy(rho.matrix)
        )
        assert fn.total_correlation(rho, (2, 2, 2)) == pytest.approx(expected, abs=1e-9)

    def test_rejects_single_subsystem(self):
        rho = random_density(4, 4, seed=0)
        with pytest.raises(ShapeMismatchError):
            fn.total_correlation(rho, (4,))
