import math

import numpy as np
import pytest

from conftest import random_density, random_pure_density
from ctsim.hilbert import (
    DensityOperator,
    Ket,
    OutcomeUnreachableError,
    eig_hermitian,
    kron,
    partial_trace,
    project,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

BELL_PHI_PLUS = Ket((2, 2), np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2))


def naive_kron(a, b):
    ar, ac = a.shape
    br, bc = b.shape
    out = np.zeros((ar * br, ac * bc), dtype=complex)
    for i in range(ar):
        for j in range(ac):
            for k in range(br):
                for l in range(bc):
                    out[i * br + k, j * bc + l] = a[i, j] * b[k, l]
    return out


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_sigma_z_pair(self):
        assert np.array_equal(kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]).astype(complex))

    def test_matches_naive_double_loop(self, rng):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        got = kron(a, b)
        assert abs(got[2, 3] - a[1, 1] * b[0, 1]) < 1e-14
        assert np.max(np.abs(got - naive_kron(a, b))) < 1e-14


class TestEigHermitian:
    def test_diagonal_sorted_ascending(self):
        w, _ = eig_hermitian(np.diag([3.0, 1.0, 2.0]).astype(complex))
        assert np.allclose(w, [1.0, 2.0, 3.0])

    def test_pauli_x_spectrum(self):
        w, _ = eig_hermitian(SIGMA_X)
        assert np.allclose(w, [-1.0, 1.0])

    def test_reconstruction_and_orthonormality(self, rng):
        g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        h = g + g.conj().T
        w, v = eig_hermitian(h)
        assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) < 1e-8
        assert np.max(np.abs(v.conj().T @ v - np.eye(8))) < 1e-8
        for k in range(8):
            assert np.max(np.abs(h @ v[:, k] - w[k] * v[:, k])) < 1e-8

    def test_rejects_non_hermitian_naming_asymmetry(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(ValueError, match="asymmetry"):
            eig_hermitian(m)


class TestPartialTrace:
    def test_bell_state_reduces_to_maximally_mixed(self):
        reduced = partial_trace(BELL_PHI_PLUS.to_density(), keep=[1])
        assert np.allclose(reduced.matrix, np.eye(2) / 2, atol=1e-12)

    def test_product_state_factorizes(self, rng):
        rho_a = random_density(rng, (2,))
        rho_b = random_density(rng, (3,))
        joint = DensityOperator((2, 3), kron(rho_a.matrix, rho_b.matrix))
        assert np.max(np.abs(partial_trace(joint, [1]).matrix - rho_b.matrix)) < 1e-12
        assert np.max(np.abs(partial_trace(joint, [0]).matrix - rho_a.matrix)) < 1e-12

    def test_ms_state_reduction_matches_hand_expansion(self):
        # (|000> + c|111> + d|011>)/sqrt(2) traced over the first qubit gives
        # (|00><00| + |11><11| + d (|00><11| + h.c.))/2 with d = sin(pi/6) = 1/2.
        from ctsim.encodings import MsParams, ms_state_vsp

        rho = ms_state_vsp(MsParams(math.pi / 6)).to_density()
        reduced = partial_trace(rho, keep=[1, 2])
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = expected[3, 3] = 0.5
        expected[0, 3] = expected[3, 0] = 0.25
        assert np.max(np.abs(reduced.matrix - expected)) < 1e-12

    def test_trace_preserved(self, rng):
        rho = random_density(rng, (2, 3, 2))
        for keep in ([0], [1], [2], [0, 2], [0, 1, 2]):
            assert abs(np.trace(partial_trace(rho, keep).matrix) - 1.0) < 1e-12

    def test_keep_set_errors(self, rng):
        rho = random_density(rng, (2, 2))
        with pytest.raises(ValueError):
            partial_trace(rho, [])
        with pytest.raises(ValueError):
            partial_trace(rho, [2])


class TestProject:
    def test_bell_state_marginal(self):
        ket0 = Ket((2,), np.array([1, 0], dtype=complex))
        post, prob = project(BELL_PHI_PLUS.to_density(), 1, ket0)
        assert abs(prob - 0.5) < 1e-12
        assert np.allclose(post.matrix, np.diag([1.0, 0.0]), atol=1e-12)

    def test_orthogonal_outcome_unreachable(self):
        amps = np.zeros(8, dtype=complex)
        amps[0] = 1.0
        rho = Ket((2, 2, 2), amps).to_density()
        ket1 = Ket((2,), np.array([0, 1], dtype=complex))
        for subsystem in range(3):
            with pytest.raises(OutcomeUnreachableError, match="unreachable"):
                project(rho, subsystem, ket1)

    def test_ms_state_controller_outcome(self):
        from ctsim.encodings import MsParams, charlie_basis, ms_state_vsp

        params = MsParams(math.pi / 6)
        rho = ms_state_vsp(params).to_density()
        xi_plus, _ = charlie_basis(params)
        post, prob = project(rho, 0, xi_plus)
        assert abs(prob - (1 + params.d) / 2) < 1e-12
        assert np.max(np.abs(post.matrix - BELL_PHI_PLUS.to_density().matrix)) < 1e-10

    def test_probabilities_sum_to_one_over_basis(self, rng):
        rho = random_density(rng, (2, 3))
        u = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))[0]
        total = 0.0
        for k in range(3):
            _, prob = project(rho, 1, Ket((3,), u[:, k]))
            total += prob
        assert abs(total - 1.0) < 1e-10

    def test_commutes_with_partial_trace_on_untouched_subsystems(self, rng):
        rho = random_density(rng, (2, 2, 3))
        ket = Ket((3,), np.array([1, 0, 0], dtype=complex))
        post, _ = project(rho, 2, ket)
        left = partial_trace(post, [0])
        right_post, _ = project(partial_trace(rho, [0, 2]), 1, ket)
        assert np.max(np.abs(left.matrix - right_post.matrix)) < 1e-10


class TestStateInvariants:
    def test_ket_requires_unit_norm(self):
        with pytest.raises(ValueError, match="norm"):
            Ket((2,), np.array([1.0, 1.0], dtype=complex))

    def test_density_requires_hermitian_unit_trace(self):
        with pytest.raises(ValueError, match="Hermitian"):
            DensityOperator((2,), np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex))
        with pytest.raises(ValueError, match="trace"):
            DensityOperator((2,), np.eye(2, dtype=complex))

    def test_random_states_positive(self, rng):
        for dims in ((2, 2), (2, 3), (2, 2, 2)):
            random_density(rng, dims).assert_positive()
            random_pure_density(rng, dims).assert_positive()
