"""Amplitude damping of the two transmitted modes.

Production paths are the closed-form maps: a Kraus pair per mode for the
vacuum/single-photon encoding and a dyad-by-dyad rule for coherent states
(|a><b| picks up exp(-r^2 (a-b)^2 / 2) per mode and its amplitudes shrink
to a*tau, b*tau).  A fourth-order Runge-Kutta integration of the
master equation in truncated Fock space serves as the brute-force oracle.
Loss is parameterized by the normalized time r = sqrt(1 - exp(-G t)),
tau = sqrt(1 - r^2); the controller subsystem is never damped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .encodings import CoherentEncoding, MsParams, coherent_ket
from .hilbert import DensityOperator

MAX_DT_RATE = 0.01          # step control: dt * gamma_rate must not exceed this
TRACE_DRIFT_ABORT = 1e-6    # integrator aborts past this trace drift


class IntegrationError(RuntimeError):
    """Master-equation integration violated its accuracy contract."""


@dataclass(frozen=True)
class DampingParams:
    """Normalized loss time r in [0, 1]; tau = sqrt(1 - r^2)."""

    r: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r}")

    @property
    def tau(self) -> float:
        return math.sqrt(1.0 - self.r * self.r)

    @classmethod
    def from_rate_time(cls, gamma_rate: float, t: float) -> "DampingParams":
        """Build from a dissipation rate and propagation time: tau = e^(-G t / 2)."""
        tau = math.exp(-gamma_rate * t / 2.0)
        return cls(math.sqrt(max(0.0, 1.0 - tau * tau)))

    def time(self, gamma_rate: float = 1.0) -> float:
        """Propagation time reproducing this r at the given rate."""
        if self.r >= 1.0:
            raise ValueError("r = 1 corresponds to infinite time")
        return -math.log(1.0 - self.r * self.r) / gamma_rate


def _apply_single_site_kraus(matrix: np.ndarray, dims, site: int, kraus) -> np.ndarray:
    """Apply sum_K (I x K x I) rho (I x K x I)^dagger on one subsystem."""
    n = len(dims)
    t = matrix.reshape(tuple(dims) * 2)
    out = np.zeros_like(t)
    for k in kraus:
        left = np.moveaxis(np.tensordot(k, t, axes=([1], [site])), 0, site)
        both = np.tensordot(left, k.conj(), axes=([n + site], [1]))
        out += np.moveaxis(both, -1, n + site)
    side = matrix.shape[0]
    return out.reshape(side, side)


def damp_vsp(rho: DensityOperator, p: DampingParams) -> DensityOperator:
    """Amplitude-damp modes 2 and 3 of a three-qubit state.

    Per mode: populations |1><1| -> tau^2 |1><1| + r^2 |0><0| and the
    single-quantum coherence |1><0| -> tau |1><0|; the controller qubit is
    untouched.
    """
    if rho.dims != (2, 2, 2):
        raise ValueError(f"damp_vsp requires dims (2, 2, 2), got {rho.dims}")
    tau, r = p.tau, p.r
    kraus = (
        np.array([[1.0, 0.0], [0.0, tau]], dtype=complex),
        np.array([[0.0, r], [0.0, 0.0]], dtype=complex),
    )
    m = rho.matrix
    for site in (1, 2):
        m = _apply_single_site_kraus(m, rho.dims, site, kraus)
    return DensityOperator(rho.dims, m)


def damp_coherent_pair(
    bra_amp: float, ket_amp: float, p: DampingParams
) -> tuple[float, float, float]:
    """Damp one coherent dyad |ket_amp><bra_amp| on a single mode.

    Returns the shrunk amplitudes (bra*tau, ket*tau) and the coherence
    factor exp(-r^2 (bra - ket)^2 / 2): one for same-sign dyads,
    exp(-2 r^2 alpha^2) for opposite signs.
    """
    if abs(abs(bra_amp) - abs(ket_amp)) > 1e-12:
        raise ValueError(f"amplitudes must share magnitude, got {bra_amp}, {ket_amp}")
    diff = bra_amp - ket_amp
    factor = math.exp(-p.r * p.r * diff * diff / 2.0)
    return bra_amp * p.tau, ket_amp * p.tau, factor


@dataclass(frozen=True)
class CoherentMsState:
    """Damped coherent-encoded channel state in its dyad frame.

    The state stays a 3x3 weight matrix over the components
    (|0>|+g,+g>, |1>|-g,-g>, |0>|-g,-g>) with g = alpha*tau; sweeps never
    need the full Fock-space matrix.  ``materialize`` builds it on demand.
    """

    theta: float
    alpha: float
    r: float
    n_max: int
    gamma: float
    qubit: tuple[int, int, int] = field(default=(0, 1, 0), repr=False)
    signs: tuple[float, float, float] = field(default=(1.0, -1.0, -1.0), repr=False)
    weights: np.ndarray = field(default=None, repr=False)

    @classmethod
    def build(
        cls, params: MsParams, enc: CoherentEncoding, p: DampingParams
    ) -> "CoherentMsState":
        amps = (1.0, params.c, params.d)
        signs = (1.0, -1.0, -1.0)
        norm_sq = 2.0 + 2.0 * params.d * math.exp(-4.0 * enc.alpha * enc.alpha)
        v = np.array(amps) / math.sqrt(norm_sq)
        w = np.empty((3, 3))
        for k in range(3):
            for l in range(3):
                _, _, f = damp_coherent_pair(signs[k] * enc.alpha, signs[l] * enc.alpha, p)
                w[k, l] = v[k] * v[l] * f * f  # one factor per damped mode
        return cls(
            theta=params.theta,
            alpha=enc.alpha,
            r=p.r,
            n_max=enc.n_max,
            gamma=enc.alpha * p.tau,
            weights=w,
        )

    def materialize(self) -> DensityOperator:
        """Expand the dyad frame into a dense (2, n_max, n_max) operator."""
        n = self.n_max
        mode = {
            1.0: coherent_ket(self.gamma, n).amplitudes,
            -1.0: coherent_ket(-self.gamma, n).amplitudes,
        }
        qubit = {0: np.array([1.0, 0.0], dtype=complex), 1: np.array([0.0, 1.0], dtype=complex)}
        comps = [
            np.kron(qubit[self.qubit[k]], np.kron(mode[self.signs[k]], mode[self.signs[k]]))
            for k in range(3)
        ]
        dim = 2 * n * n
        m = np.zeros((dim, dim), dtype=complex)
        for k in range(3):
            for l in range(3):
                m += self.weights[k, l] * np.outer(comps[k], comps[l].conj())
        return DensityOperator((2, n, n), m)


def evolve_ms_coherent(
    params: MsParams, enc: CoherentEncoding, p: DampingParams
) -> DensityOperator:
    """Damped coherent-encoded channel state as a dense density operator."""
    return CoherentMsState.build(params, enc, p).materialize()


@dataclass(frozen=True)
class LindbladConfig:
    """Integration settings for the photon-loss master equation."""

    gamma_rate: float
    t_final: float
    dt: float
    n_max: int = 0

    def __post_init__(self):
        if self.gamma_rate < 0 or self.t_final < 0 or self.dt <= 0:
            raise ValueError("gamma_rate, t_final must be >= 0 and dt > 0")
        if self.dt * self.gamma_rate > MAX_DT_RATE + 1e-15:
            raise ValueError(
                f"dt * gamma_rate = {self.dt * self.gamma_rate:.3e} exceeds {MAX_DT_RATE}"
            )


def _loss_rhs(t: np.ndarray, dims, gamma: float, num_weight: np.ndarray) -> np.ndarray:
    """d(rho)/dt for photon loss on subsystems 1 and 2 of a tripartite tensor.

    The jump term a rho a^dag is a shifted, sqrt-weighted copy along each
    mode's row/column axis pair; the anticommutator is diagonal in the Fock
    basis and enters as the precomputed elementwise ``num_weight``.
    """
    out = num_weight * t
    n = len(dims)
    for site in (1, 2):
        d = dims[site]
        if d < 2:
            continue
        w = np.sqrt(np.arange(1, d, dtype=float))
        row_shape = [1] * (2 * n)
        row_shape[site] = d - 1
        col_shape = [1] * (2 * n)
        col_shape[n + site] = d - 1
        dst = [slice(None)] * (2 * n)
        src = [slice(None)] * (2 * n)
        dst[site] = slice(0, d - 1)
        dst[n + site] = slice(0, d - 1)
        src[site] = slice(1, d)
        src[n + site] = slice(1, d)
        out[tuple(dst)] += gamma * w.reshape(row_shape) * w.reshape(col_shape) * t[tuple(src)]
    return out


def lindblad_integrate(rho0: DensityOperator, cfg: LindbladConfig) -> DensityOperator:
    """Integrate photon loss on subsystems 1 and 2 with classic RK4.

    The state is re-symmetrized after every step; trace drift beyond
    TRACE_DRIFT_ABORT raises.  Serves as the oracle for the analytic maps.
    """
    dims = rho0.dims
    if len(dims) != 3:
        raise ValueError(f"expected three subsystems, got dims {dims}")
    if cfg.n_max and (dims[1] != cfg.n_max or dims[2] != cfg.n_max):
        raise ValueError(f"cfg.n_max={cfg.n_max} does not match mode dims {dims[1:]}")

    g = cfg.gamma_rate
    n = len(dims)
    fock = [np.arange(d, dtype=float) for d in dims]
    num_weight = np.zeros(tuple(dims) * 2)
    for site in (1, 2):
        row_shape = [1] * (2 * n)
        row_shape[site] = dims[site]
        col_shape = [1] * (2 * n)
        col_shape[n + site] = dims[site]
        num_weight = num_weight + fock[site].reshape(row_shape) + fock[site].reshape(col_shape)
    num_weight = -0.5 * g * num_weight

    side = rho0.dim
    t = rho0.matrix.reshape(tuple(dims) * 2).astype(complex)
    remaining = cfg.t_final
    while remaining > 1e-15:
        h = min(cfg.dt, remaining)
        k1 = _loss_rhs(t, dims, g, num_weight)
        k2 = _loss_rhs(t + 0.5 * h * k1, dims, g, num_weight)
        k3 = _loss_rhs(t + 0.5 * h * k2, dims, g, num_weight)
        k4 = _loss_rhs(t + h * k3, dims, g, num_weight)
        t = t + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        m = t.reshape(side, side)
        m = 0.5 * (m + m.conj().T)
        drift = abs(float(np.trace(m).real) - 1.0)
        if drift > TRACE_DRIFT_ABORT:
            raise IntegrationError(f"trace drift {drift:.3e} exceeds {TRACE_DRIFT_ABORT}")
        t = m.reshape(tuple(dims) * 2)
        remaining -= h
    return DensityOperator(dims, t.reshape(side, side))
