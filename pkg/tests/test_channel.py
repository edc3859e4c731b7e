import math

import numpy as np
import pytest

from conftest import random_density
from ctsim.channel import (
    CoherentMsState,
    DampingParams,
    LindbladConfig,
    damp_coherent_pair,
    damp_vsp,
    evolve_ms_coherent,
    lindblad_integrate,
)
from ctsim.encodings import CoherentEncoding, MsParams, coherent_ket, ms_state_coherent, ms_state_vsp
from ctsim.hilbert import Ket, partial_trace, trace_distance


def vsp_reduced_closed_form(theta: float, r: float) -> np.ndarray:
    """Two-mode state after loss, controller traced out, in the Fock pair basis."""
    tau_sq = 1.0 - r * r
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = (1.0 + r**4) / 2.0
    m[3, 3] = tau_sq**2 / 2.0
    m[0, 3] = m[3, 0] = tau_sq * math.sin(theta) / 2.0
    m[1, 1] = m[2, 2] = r * r * tau_sq / 2.0
    return m


class TestDampingParams:
    def test_pythagorean_identity(self):
        for r in (0.0, 0.3, 0.8, 1.0):
            p = DampingParams(r)
            assert abs(p.r**2 + p.tau**2 - 1.0) < 1e-15

    def test_rate_time_constructor(self):
        p = DampingParams.from_rate_time(1.0, 0.5)
        assert abs(p.tau - math.exp(-0.25)) < 1e-15
        assert abs(DampingParams(p.r).time() - 0.5) < 1e-12

    def test_range_guard(self):
        with pytest.raises(ValueError):
            DampingParams(1.2)
        with pytest.raises(ValueError):
            DampingParams(1.0).time()


class TestDampVsp:
    def test_no_loss_is_identity(self, rng):
        rho = random_density(rng, (2, 2, 2))
        out = damp_vsp(rho, DampingParams(0.0))
        assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-14

    def test_full_decay_empties_the_modes(self):
        amps = np.zeros(8, dtype=complex)
        amps[0b011] = 1.0  # controller |0>, both modes excited
        rho = Ket((2, 2, 2), amps).to_density()
        out = damp_vsp(rho, DampingParams(1.0))
        expected = np.zeros((8, 8), dtype=complex)
        expected[0, 0] = 1.0
        assert np.max(np.abs(out.matrix - expected)) < 1e-14

    @pytest.mark.parametrize("theta", [0.0, math.pi / 6, math.pi / 3])
    @pytest.mark.parametrize("r", [0.0, 0.5, 0.9])
    def test_reduced_state_matches_closed_form(self, theta, r):
        rho = damp_vsp(ms_state_vsp(MsParams(theta)).to_density(), DampingParams(r))
        reduced = partial_trace(rho, [1, 2])
        assert np.max(np.abs(reduced.matrix - vsp_reduced_closed_form(theta, r))) < 1e-12

    def test_trace_preserved_and_positive_on_random_inputs(self, rng):
        for _ in range(5):
            rho = random_density(rng, (2, 2, 2))
            out = damp_vsp(rho, DampingParams(rng.uniform(0.0, 1.0)))
            assert abs(np.trace(out.matrix).real - 1.0) < 1e-12
            assert out.min_eigenvalue() > -1e-8

    def test_semigroup_composition(self, rng):
        rho = random_density(rng, (2, 2, 2))
        p1, p2 = DampingParams(0.4), DampingParams(0.8)
        combined = DampingParams(math.sqrt(1.0 - (p1.tau * p2.tau) ** 2))
        two_step = damp_vsp(damp_vsp(rho, p1), p2)
        one_step = damp_vsp(rho, combined)
        assert np.max(np.abs(two_step.matrix - one_step.matrix)) < 1e-10


class TestDampCoherentPair:
    def test_population_dyad_keeps_full_weight(self):
        bra, ket, factor = damp_coherent_pair(0.7, 0.7, DampingParams(0.6))
        assert factor == 1.0
        assert abs(bra - 0.7 * DampingParams(0.6).tau) < 1e-15

    def test_no_loss_keeps_coherence(self):
        _, _, factor = damp_coherent_pair(1.0, -1.0, DampingParams(0.0))
        assert factor == 1.0

    def test_two_mode_cross_factor(self):
        p = DampingParams(math.sqrt(0.5))
        _, _, factor = damp_coherent_pair(1.0, -1.0, p)
        assert abs(factor**2 - math.exp(-2.0)) < 1e-12

    def test_factor_semigroup(self):
        alpha = 0.8
        p1, p2 = DampingParams(0.5), DampingParams(0.6)
        combined = DampingParams(math.sqrt(1.0 - (p1.tau * p2.tau) ** 2))
        _, _, f1 = damp_coherent_pair(alpha, -alpha, p1)
        gamma1 = alpha * p1.tau
        _, _, f2 = damp_coherent_pair(gamma1, -gamma1, p2)
        _, _, f_combined = damp_coherent_pair(alpha, -alpha, combined)
        assert abs(f1 * f2 - f_combined) < 1e-10

    def test_magnitude_mismatch_rejected(self):
        with pytest.raises(ValueError, match="magnitude"):
            damp_coherent_pair(0.5, -0.6, DampingParams(0.1))


class TestEvolveMsCoherent:
    def test_no_loss_reproduces_pure_state(self):
        params, enc = MsParams(math.pi / 4), CoherentEncoding(0.5)
        rho = evolve_ms_coherent(params, enc, DampingParams(0.0))
        expected = ms_state_coherent(params, enc).to_density()
        assert np.max(np.abs(rho.matrix - expected.matrix)) < 1e-10

    @pytest.mark.parametrize("theta", [0.0, math.pi / 4, math.pi / 2])
    @pytest.mark.parametrize("alpha,r", [(0.2, 0.3), (0.5, 0.7), (1.25, 0.5)])
    def test_reduced_state_matches_published_coefficients(self, theta, alpha, r):
        # N^2 [ |g,g><g,g| + |-g,-g><-g,-g| + e^(-4 r^2 a^2) sin(theta) cross ]
        params, enc, p = MsParams(theta), CoherentEncoding(alpha), DampingParams(r)
        reduced = partial_trace(evolve_ms_coherent(params, enc, p), [1, 2])
        n = enc.n_max
        gamma = alpha * p.tau
        gg = np.kron(coherent_ket(gamma, n).amplitudes, coherent_ket(gamma, n).amplitudes)
        mm = np.kron(coherent_ket(-gamma, n).amplitudes, coherent_ket(-gamma, n).amplitudes)
        n_sq = 1.0 / (2.0 + 2.0 * params.d * math.exp(-4.0 * alpha * alpha))
        decoh = math.exp(-4.0 * r * r * alpha * alpha)
        expected = n_sq * (
            np.outer(gg, gg.conj())
            + np.outer(mm, mm.conj())
            + params.d * decoh * (np.outer(gg, mm.conj()) + np.outer(mm, gg.conj()))
        )
        assert np.max(np.abs(reduced.matrix - expected)) < 1e-9
        assert abs(np.trace(reduced.matrix).real - 1.0) < 1e-9
        assert reduced.min_eigenvalue() > -1e-8

    def test_full_decay_leaves_vacuum_modes(self):
        params, enc = MsParams(math.pi / 3), CoherentEncoding(0.5)
        rho = evolve_ms_coherent(params, enc, DampingParams(1.0))
        reduced = partial_trace(rho, [1, 2])
        expected = np.zeros_like(reduced.matrix)
        expected[0, 0] = 1.0
        assert np.max(np.abs(reduced.matrix - expected)) < 1e-9


class TestLindbladIntegrate:
    def test_zero_rate_is_identity(self, rng):
        rho = random_density(rng, (2, 2, 2))
        out = lindblad_integrate(rho, LindbladConfig(gamma_rate=0.0, t_final=1e3, dt=1.0))
        assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-12

    def test_single_mode_exponential_decay(self):
        # One excited mode decaying to e^(-G t) = 0.75 population.
        amps = np.array([0.0, 1.0], dtype=complex)
        rho = Ket((1, 2, 1), amps).to_density()
        t = -math.log(0.75)
        out = lindblad_integrate(rho, LindbladConfig(gamma_rate=1.0, t_final=t, dt=0.002))
        expected = np.diag([0.25, 0.75]).astype(complex)
        assert np.max(np.abs(out.matrix - expected)) < 1e-8

    def test_step_control_enforced(self):
        with pytest.raises(ValueError, match="dt"):
            LindbladConfig(gamma_rate=1.0, t_final=1.0, dt=0.05)

    def test_n_max_consistency_checked(self, rng):
        rho = random_density(rng, (2, 3, 3))
        cfg = LindbladConfig(gamma_rate=1.0, t_final=0.1, dt=0.01, n_max=4)
        with pytest.raises(ValueError, match="n_max"):
            lindblad_integrate(rho, cfg)

    def test_matches_analytic_vsp_map(self):
        params, p = MsParams(math.pi / 4), DampingParams(0.6)
        rho0 = ms_state_vsp(params).to_density()
        numeric = lindblad_integrate(
            rho0, LindbladConfig(gamma_rate=1.0, t_final=p.time(), dt=0.002)
        )
        assert trace_distance(damp_vsp(rho0, p), numeric) < 1e-6

    def test_matches_analytic_coherent_map(self):
        params, enc, p = MsParams(math.pi / 4), CoherentEncoding(0.5), DampingParams(0.5)
        rho0 = ms_state_coherent(params, enc).to_density()
        numeric = lindblad_integrate(
            rho0, LindbladConfig(gamma_rate=1.0, t_final=p.time(), dt=0.01)
        )
        analytic = CoherentMsState.build(params, enc, p).materialize()
        assert trace_distance(analytic, numeric) < 1e-5
