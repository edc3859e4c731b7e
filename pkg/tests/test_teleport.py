import math

import numpy as np
import pytest

from conftest import random_density
from ctsim.channel import CoherentMsState, DampingParams
from ctsim.encodings import CoherentEncoding, MsParams, charlie_basis
from ctsim.hilbert import DensityOperator, partial_trace, project
from ctsim.teleport import (
    CtFigures,
    cat_magic_basis,
    closed_form_vsp,
    coherent_conditioned_probabilities,
    control_power,
    ct_pipeline_coherent,
    ct_pipeline_vsp,
    efficiency,
    fef_oracle,
    fully_entangled_fraction,
    magic_basis,
    teleport_fidelity,
)

BELL = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
SINGLET = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)


class TestMagicBasis:
    def test_orthonormal(self):
        kets = magic_basis()
        for i, a in enumerate(kets):
            for j, b in enumerate(kets):
                expected = 1.0 if i == j else 0.0
                assert abs(a.overlap(b) - expected) < 1e-12

    def test_each_vector_maximally_entangled(self):
        for ket in magic_basis():
            reduced = partial_trace(ket.to_density(), [0])
            assert np.max(np.abs(reduced.matrix - np.eye(2) / 2)) < 1e-10

    @pytest.mark.parametrize("gamma", [0.3, 0.8, 1.5])
    def test_cat_variant_orthonormal(self, gamma):
        from ctsim.encodings import fock_cutoff

        kets = cat_magic_basis(gamma, fock_cutoff(gamma))
        for i, a in enumerate(kets):
            for j, b in enumerate(kets):
                expected = 1.0 if i == j else 0.0
                assert abs(a.overlap(b) - expected) < 1e-10


class TestFullyEntangledFraction:
    def test_bell_state_is_one(self):
        rho = DensityOperator((2, 2), np.outer(BELL, BELL.conj()))
        assert abs(fully_entangled_fraction(rho) - 1.0) < 1e-12

    def test_maximally_mixed_is_quarter(self):
        rho = DensityOperator((2, 2), np.eye(4, dtype=complex) / 4)
        assert abs(fully_entangled_fraction(rho) - 0.25) < 1e-12

    def test_matches_oracle_on_random_states(self, rng):
        for _ in range(20):
            rho = random_density(rng, (2, 2))
            assert abs(fully_entangled_fraction(rho) - fef_oracle(rho)) < 1e-6

    def test_basis_dimension_mismatch_rejected(self, rng):
        rho = random_density(rng, (2, 2))
        with pytest.raises(ValueError, match="dimension"):
            fully_entangled_fraction(rho, cat_magic_basis(0.5, 16))


class TestFefOracle:
    def test_singlet_is_locally_equivalent_to_bell(self):
        rho = DensityOperator((2, 2), np.outer(SINGLET, SINGLET.conj()))
        assert abs(fef_oracle(rho) - 1.0) < 1e-7

    def test_product_state_reaches_half(self):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = 1.0
        assert abs(fef_oracle(DensityOperator((2, 2), m)) - 0.5) < 1e-7

    def test_werner_state_is_linear(self):
        p = 0.6
        m = p * np.outer(BELL, BELL.conj()) + (1 - p) * np.eye(4) / 4
        rho = DensityOperator((2, 2), m)
        assert abs(fef_oracle(rho) - 0.7) < 1e-7
        assert abs(fully_entangled_fraction(rho) - 0.7) < 1e-12


class TestScalarMaps:
    def test_teleport_fidelity_values(self):
        assert teleport_fidelity(1.0) == 1.0
        assert abs(teleport_fidelity(0.5) - 2.0 / 3.0) < 1e-15
        assert abs(teleport_fidelity(0.25) - 0.5) < 1e-15

    def test_control_power_branches(self):
        assert control_power(1.0) == pytest.approx(0.0, abs=1e-15)
        assert control_power(2.0 / 3.0) == 1.0
        assert control_power(0.5) == 1.0
        assert abs(control_power(5.0 / 6.0) - 0.5) < 1e-12

    def test_efficiency_branches(self):
        assert efficiency(1.0, 1.0) == pytest.approx(1.0)
        assert efficiency(0.7, 2.0 / 3.0) == 0.0
        assert efficiency(0.7, 0.5) == 0.0
        assert abs(efficiency(0.5, 0.9) - 0.35) < 1e-12

    def test_figures_invariants_enforced(self):
        with pytest.raises(ValueError, match="C_p"):
            CtFigures(f_c=1.0, f_nc=0.5, c_p=0.5, eta=0.5)
        with pytest.raises(ValueError, match="eta"):
            CtFigures(f_c=0.5, f_nc=0.9, c_p=0.3, eta=0.2)


class TestVspPipeline:
    def test_ghz_anchor(self):
        fig = ct_pipeline_vsp(MsParams(0.0), DampingParams(0.0))
        assert abs(fig.f_nc - 2.0 / 3.0) < 1e-9
        assert abs(fig.f_c - 1.0) < 1e-9
        assert abs(fig.c_p - 1.0) < 1e-9
        assert abs(fig.eta - 1.0) < 1e-9

    def test_bell_product_anchor(self):
        fig = ct_pipeline_vsp(MsParams(math.pi / 2), DampingParams(0.0))
        assert abs(fig.f_nc - 1.0) < 1e-9
        assert fig.c_p == pytest.approx(0.0, abs=1e-9)
        assert fig.eta == pytest.approx(0.0, abs=1e-9)

    def test_intermediate_anchor(self):
        fig = ct_pipeline_vsp(MsParams(math.pi / 6), DampingParams(0.0))
        assert abs(fig.f_nc - 5.0 / 6.0) < 1e-9
        assert abs(fig.c_p - 0.5) < 1e-9

    @pytest.mark.parametrize("theta", [0.0, 0.3, math.pi / 4, math.pi / 2])
    @pytest.mark.parametrize("r", [0.0, 0.35, 0.7071067811865476, 1.0])
    def test_matches_closed_form(self, theta, r):
        fig = ct_pipeline_vsp(MsParams(theta), DampingParams(r))
        f_nc, f_c = closed_form_vsp(MsParams(theta), DampingParams(r))
        assert abs(fig.f_nc - f_nc) < 1e-9
        assert abs(fig.f_c - f_c) < 1e-9

    def test_closed_form_examples(self):
        _, f_c = closed_form_vsp(MsParams(0.3), DampingParams(0.0))
        assert abs(f_c - 1.0) < 1e-15
        _, f_c = closed_form_vsp(MsParams(0.3), DampingParams(1.0))
        assert abs(f_c - 2.0 / 3.0) < 1e-15
        _, f_c = closed_form_vsp(MsParams(0.3), DampingParams(math.sqrt(0.5)))
        assert abs(f_c - 0.75) < 1e-12

    def test_conditioned_fidelity_monotone_then_minimal(self):
        # Non-increasing up to r = 1/sqrt(2) where it bottoms out at 3/4
        # before the quartic term turns around.
        grid = np.linspace(0.0, math.sqrt(0.5), 40)
        values = [ct_pipeline_vsp(MsParams(0.5), DampingParams(r)).f_c for r in grid]
        assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))
        assert abs(min(values) - 0.75) < 1e-9

    def test_total_loss_collapses_to_classical_bound(self):
        for theta in (0.0, math.pi / 4):
            fig = ct_pipeline_vsp(MsParams(theta), DampingParams(1.0))
            assert abs(fig.f_c - 2.0 / 3.0) < 1e-9
            assert abs(fig.f_nc - 2.0 / 3.0) < 1e-9

    def test_outcome_probabilities_loss_independent(self):
        params = MsParams(0.9)
        for r in (0.0, 0.5, 0.9):
            fig = ct_pipeline_vsp(params, DampingParams(r))
            assert abs(fig.outcome_probs[0] - (1 + params.d) / 2) < 1e-10
            assert abs(fig.outcome_probs[1] - (1 - params.d) / 2) < 1e-10


class TestCoherentPipeline:
    @pytest.mark.parametrize("alpha", [0.2, 0.5, 1.25, 2.5])
    @pytest.mark.parametrize("r", [0.0, 0.4, 1.0])
    def test_control_power_flat_for_ghz_type(self, alpha, r):
        fig = ct_pipeline_coherent(MsParams(0.0), CoherentEncoding(alpha), DampingParams(r))
        assert abs(fig.c_p - 1.0) < 1e-9

    def test_quasi_bell_channel_teleports_almost_perfectly(self):
        fig = ct_pipeline_coherent(MsParams(math.pi / 2), CoherentEncoding(2.5), DampingParams(0.0))
        assert fig.f_nc >= 1.0 - 1e-6

    def test_probability_completeness(self):
        pp, pm = coherent_conditioned_probabilities(MsParams(math.pi / 4), CoherentEncoding(0.5))
        assert abs(pp + pm - 1.0) < 1e-12

    def test_probabilities_match_projection_on_dense_state(self):
        params, enc, p = MsParams(math.pi / 3), CoherentEncoding(0.5), DampingParams(0.4)
        rho = CoherentMsState.build(params, enc, p).materialize()
        expected = coherent_conditioned_probabilities(params, enc)
        for ket, want in zip(charlie_basis(params), expected):
            _, prob = project(rho, 0, ket)
            assert abs(prob - want) < 1e-10

    def test_cat_frame_route_matches_fock_space_computation(self):
        # F_nc computed in the 4-dim cat frame must equal the full Fock-space
        # magic-basis evaluation on the materialized state.
        params, enc, p = MsParams(math.pi / 4), CoherentEncoding(0.5), DampingParams(0.3)
        fig = ct_pipeline_coherent(params, enc, p)
        rho = CoherentMsState.build(params, enc, p).materialize()
        rho_nc = partial_trace(rho, [1, 2])
        kets = cat_magic_basis(enc.alpha * p.tau, enc.n_max)
        b = np.column_stack([k.amplitudes for k in kets])
        m = b.conj().T @ rho_nc.matrix @ b
        f = float(np.linalg.eigvalsh((m.real + m.real.T) / 2)[-1])
        assert abs(teleport_fidelity(f) - fig.f_nc) < 1e-9

    def test_conditioned_fidelity_curves_cross(self):
        # Large amplitude wins at low loss, small amplitude at high loss.
        diffs = []
        for r in np.linspace(0.0, 1.0, 51):
            p = DampingParams(r)
            f_small = ct_pipeline_coherent(MsParams(0.0), CoherentEncoding(0.5), p).f_c
            f_large = ct_pipeline_coherent(MsParams(0.0), CoherentEncoding(2.5), p).f_c
            diffs.append(f_large - f_small)
        assert diffs[0] > 0
        assert min(diffs) < 0

    def test_degenerate_minus_outcome_skipped(self):
        fig = ct_pipeline_coherent(MsParams(math.pi / 2), CoherentEncoding(0.5), DampingParams(0.2))
        assert len(fig.outcome_probs) == 1
        assert abs(fig.outcome_probs[0] - 1.0) < 1e-12

    def test_zero_amplitude_encoding_is_classical(self):
        # |alpha> = |-alpha> at alpha = 0: no channel entanglement survives.
        fig = ct_pipeline_coherent(MsParams(math.pi / 4), CoherentEncoding(0.0), DampingParams(0.3))
        assert abs(fig.f_c - 2.0 / 3.0) < 1e-12
        assert abs(fig.f_nc - 2.0 / 3.0) < 1e-12
        assert fig.eta == 0.0
        assert fig.c_p == 1.0

    def test_control_power_decreases_with_theta_at_no_loss(self):
        p = DampingParams(0.0)
        for alpha in (0.5, 1.25):
            values = [
                ct_pipeline_coherent(MsParams(t), CoherentEncoding(alpha), p).c_p
                for t in np.linspace(0.0, math.pi / 2, 9)
            ]
            assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


class TestEfficiencyComparison:
    def test_coherent_wins_at_weak_loss_for_large_theta(self):
        # At theta = pi/3 some coherent amplitude beats the vsp encoding for
        # weak and moderate losses; deep in the lossy regime vsp wins back.
        theta = MsParams(math.pi / 3)
        alphas = (0.2, 0.5, 1.25, 2.5)

        def best_coherent(p):
            return max(
                ct_pipeline_coherent(theta, CoherentEncoding(a), p).eta for a in alphas
            )

        for r in (0.0, 0.1, 0.2, 0.3):
            p = DampingParams(r)
            assert best_coherent(p) > ct_pipeline_vsp(theta, p).eta
        for r in (0.5, 0.8):
            p = DampingParams(r)
            assert best_coherent(p) < ct_pipeline_vsp(theta, p).eta

    def test_efficiency_not_monotone_in_loss(self):
        # Control power grows with loss while the conditioned fidelity falls,
        # so their product can peak at intermediate r.
        etas = [
            ct_pipeline_vsp(MsParams(math.pi / 3), DampingParams(r)).eta
            for r in np.linspace(0.0, 1.0, 51)
        ]
        assert any(b > a + 1e-6 for a, b in zip(etas, etas[1:]))
        assert max(etas) > etas[0]
