"""Genuine tripartite nonlocality via the Svetlichny combination.

Eight three-body correlators of dichotomic observables, signs +1 on terms
with at most one primed setting and -1 otherwise; hybrid local models obey
|S_v| <= 4 and quantum mechanics caps it at 4*sqrt(2).  Qubits use rotated
sigma-z observables, modes use displaced photon-number parity.

The 12-parameter maximization is a multi-start simplex descent running on
a compiled kernel when available (see ctsim._backend); this module holds
the reference evaluators the kernels are tested against.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.linalg import expm

from . import _backend
from .channel import CoherentMsState
from .hilbert import ATOL_STATE, DensityOperator, kron

SV_QUANTUM_MAX = 4.0 * math.sqrt(2.0)
SV_LOCAL_BOUND = 4.0
# Half-widths for displacement starting points, cycled per start.
_BETA_START_SCALES = (0.25, 0.5, 1.0, 2.0)
# Sign of each correlator E(A^i, B^j, C^k): + unless two or more settings primed.
_TERMS = tuple(
    (pa, pb, pc, 1.0 if pa + pb + pc <= 1 else -1.0)
    for pa, pb, pc in product((0, 1), repeat=3)
)

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class QubitSetting:
    """Rotated sigma-z observable direction (polar omega, azimuth delta)."""

    omega: float
    delta: float

    @property
    def zeta(self) -> complex:
        """Rotation argument -omega e^(-i delta) / 2."""
        return -0.5 * self.omega * cmath.exp(-1j * self.delta)


@dataclass(frozen=True)
class ModeSetting:
    """Displacement argument of a displaced-parity observable."""

    beta: complex


@dataclass(frozen=True)
class SvetlichnySettings:
    """Per-party (unprimed, primed) observable settings; 12 real parameters."""

    charlie: tuple[QubitSetting, QubitSetting]
    alice: tuple
    bob: tuple

    def to_vector(self) -> np.ndarray:
        x = []
        for s in (*self.charlie, *self.alice, *self.bob):
            if isinstance(s, QubitSetting):
                x += [s.omega, s.delta]
            else:
                x += [s.beta.real, s.beta.imag]
        return np.array(x)

    @classmethod
    def from_vector(cls, x, encoding: str) -> "SvetlichnySettings":
        x = np.asarray(x, dtype=float)
        if x.shape != (12,):
            raise ValueError(f"expected 12 parameters, got shape {x.shape}")
        charlie = (QubitSetting(x[0], x[1]), QubitSetting(x[2], x[3]))
        if encoding == "vsp":
            alice = (QubitSetting(x[4], x[5]), QubitSetting(x[6], x[7]))
            bob = (QubitSetting(x[8], x[9]), QubitSetting(x[10], x[11]))
        elif encoding == "coherent":
            alice = (ModeSetting(complex(x[4], x[5])), ModeSetting(complex(x[6], x[7])))
            bob = (ModeSetting(complex(x[8], x[9])), ModeSetting(complex(x[10], x[11])))
        else:
            raise ValueError(f"unknown encoding {encoding!r}")
        return cls(charlie, alice, bob)


def rotated_sigma_z(s: QubitSetting) -> np.ndarray:
    """Conjugate sigma-z by the rotation R(zeta); Hermitian with spectrum {-1, +1}."""
    z = s.zeta
    mag = abs(z)
    if mag == 0.0:
        rot = np.eye(2, dtype=complex)
    else:
        c, sn = math.cos(mag), math.sin(mag)
        rot = np.array([[c, (z / mag) * sn], [-(z.conjugate() / mag) * sn, c]])
    return rot @ np.diag([1.0 + 0j, -1.0 + 0j]) @ rot.conj().T


def beta_bound(n_max: int) -> float:
    """Largest displacement the truncated Fock ladder represents faithfully."""
    return math.sqrt(n_max) / 3.0


def displacement_operator(beta: complex, n_max: int) -> np.ndarray:
    """exp(beta a^dag - beta* a) on the truncated ladder (scaling and squaring)."""
    a = np.diag(np.sqrt(np.arange(1, n_max, dtype=float)), k=1).astype(complex)
    return expm(beta * a.conj().T - beta.conjugate() * a)


def displaced_parity(s: ModeSetting, n_max: int) -> np.ndarray:
    """D(beta) (photon-number parity) D(beta)^dagger in the Fock basis."""
    mag = abs(s.beta)
    if mag > beta_bound(n_max):
        raise ValueError(
            f"|beta| = {mag:.3f} exceeds truncation-validity bound "
            f"{beta_bound(n_max):.3f} for n_max = {n_max}"
        )
    d = displacement_operator(s.beta, n_max)
    parity = np.diag((-1.0) ** np.arange(n_max)).astype(complex)
    pi = d @ parity @ d.conj().T
    return 0.5 * (pi + pi.conj().T)


def parity_element(bra_amp: float, ket_amp: float, beta: complex) -> complex:
    """<a| Pi(beta) |b> for real coherent amplitudes a, b, in closed form.

    Displacing both states by -beta turns the sandwich into a plain
    coherent-state overlap <a-beta|beta-b> times the displacement phases.
    """
    mu = bra_amp - beta
    nu = beta - ket_amp
    return cmath.exp(
        1j * (bra_amp - ket_amp) * beta.imag
        - 0.5 * (mu.real * mu.real + mu.imag * mu.imag)
        - 0.5 * (nu.real * nu.real + nu.imag * nu.imag)
        + mu.conjugate() * nu
    )


def correlation_tensor(rho: DensityOperator) -> np.ndarray:
    """T[i, j, k] = Tr[rho (sigma_i x sigma_j x sigma_k)] over x, y, z."""
    if rho.dims != (2, 2, 2):
        raise ValueError(f"correlation tensor requires dims (2, 2, 2), got {rho.dims}")
    t = np.empty((3, 3, 3))
    for i, si in enumerate(_PAULI):
        for j, sj in enumerate(_PAULI):
            for k, sk in enumerate(_PAULI):
                val = complex(np.trace(rho.matrix @ kron(kron(si, sj), sk)))
                if abs(val.imag) > ATOL_STATE:
                    raise ValueError(f"correlator has imaginary part {val.imag:.3e}")
                t[i, j, k] = val.real
    return t


def _svetlichny_vsp_dense(rho: DensityOperator, settings: SvetlichnySettings) -> float:
    obs_c = [rotated_sigma_z(s) for s in settings.charlie]
    obs_a = [rotated_sigma_z(s) for s in settings.alice]
    obs_b = [rotated_sigma_z(s) for s in settings.bob]
    total = 0.0
    for pa, pb, pc, sign in _TERMS:
        o = kron(kron(obs_c[pc], obs_a[pa]), obs_b[pb])
        val = complex(np.trace(rho.matrix @ o))
        if abs(val.imag) > ATOL_STATE:
            raise ValueError(f"correlator has imaginary part {val.imag:.3e}")
        total += sign * val.real
    return total


def _svetlichny_coherent_dense(rho: DensityOperator, settings: SvetlichnySettings) -> float:
    n = rho.dims[1]
    obs_c = [rotated_sigma_z(s) for s in settings.charlie]
    obs_a = [displaced_parity(s, n) for s in settings.alice]
    obs_b = [displaced_parity(s, rho.dims[2]) for s in settings.bob]
    t = rho.matrix.reshape(rho.dims + rho.dims)
    total = 0.0
    for pa, pb, pc, sign in _TERMS:
        val = complex(
            np.einsum("qabQAB,Qq,Aa,Bb->", t, obs_c[pc], obs_a[pa], obs_b[pb], optimize=True)
        )
        if abs(val.imag) > 1e-8:
            raise ValueError(f"correlator has imaginary part {val.imag:.3e}")
        total += sign * val.real
    return total


def _svetlichny_coherent_dyads(state: CoherentMsState, settings: SvetlichnySettings) -> float:
    """Low-rank evaluation: exact parity matrix elements on the dyad frame."""
    obs_c = [rotated_sigma_z(s) for s in settings.charlie]
    amps = [s * state.gamma for s in state.signs]

    def parity_table(setting: ModeSetting) -> np.ndarray:
        return np.array(
            [[parity_element(a, b, setting.beta) for b in amps] for a in amps]
        )

    tab_a = [parity_table(s) for s in settings.alice]
    tab_b = [parity_table(s) for s in settings.bob]
    q = state.qubit
    w = state.weights
    total = 0.0
    for pa, pb, pc, sign in _TERMS:
        oc, oa, ob = obs_c[pc], tab_a[pa], tab_b[pb]
        val = 0j
        for k in range(3):
            for l in range(3):
                val += w[k, l] * oc[q[l], q[k]] * oa[l, k] * ob[l, k]
        total += sign * val.real
    return total


def svetlichny_value(state, settings: SvetlichnySettings, encoding: str) -> float:
    """Signed Svetlichny combination S_v for the given observable settings.

    ``state`` is a (2, 2, 2) DensityOperator for the vsp encoding; for the
    coherent encoding it is either the CoherentMsState dyad form (exact,
    truncation-free) or a dense (2, n, n) DensityOperator (displacements
    then limited by the truncation-validity bound).
    """
    if encoding == "vsp":
        if not isinstance(state, DensityOperator) or state.dims != (2, 2, 2):
            raise ValueError("vsp encoding requires a (2, 2, 2) DensityOperator")
        return _svetlichny_vsp_dense(state, settings)
    if encoding == "coherent":
        if isinstance(state, CoherentMsState):
            return _svetlichny_coherent_dyads(state, settings)
        if isinstance(state, DensityOperator) and len(state.dims) == 3:
            return _svetlichny_coherent_dense(state, settings)
        raise ValueError("coherent encoding requires a CoherentMsState or (2, n, n) operator")
    raise ValueError(f"unknown encoding {encoding!r}")


def _canonical_vector(x: np.ndarray, encoding: str) -> np.ndarray:
    """Fold qubit angles into omega in [0, pi], delta in [0, 2 pi)."""
    out = x.copy()
    pairs = range(0, 12, 2) if encoding == "vsp" else range(0, 4, 2)
    for i in pairs:
        w = out[i] % (2.0 * math.pi)
        dlt = out[i + 1]
        if w > math.pi:
            w = 2.0 * math.pi - w
            dlt += math.pi
        out[i] = w
        out[i + 1] = dlt % (2.0 * math.pi)
    return out


def maximize_svetlichny(
    state,
    encoding: str,
    n_starts: int = 64,
    tol: float = 1e-8,
    seed: int = 0,
    max_evals: int = 8000,
) -> tuple[float, SvetlichnySettings]:
    """Maximize |S_v| over the twelve observable parameters.

    Multi-start Nelder-Mead descent on -|S_v| from seeded uniform starting
    points; starts are drawn up front so the result is independent of
    evaluation order.  Angles roam freely (the observables are periodic)
    while mode displacements are softly boxed to |Re, Im| <= 2 (gamma + 1).
    Every evaluation is checked against the quantum bound 4*sqrt(2).
    """
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    rng = np.random.default_rng(seed)
    unit = rng.uniform(0.0, 1.0, size=(n_starts, 12))

    if encoding == "vsp":
        tensor = correlation_tensor(state)
        lo = np.array([0.0, 0.0] * 6)
        hi = np.array([math.pi, 2.0 * math.pi] * 6)
        starts = lo + unit * (hi - lo)
        steps = 0.1 * (hi - lo)
        best, best_x, seen, _ = _backend.maximize_vsp(
            np.ascontiguousarray(tensor), starts, steps, tol, max_evals
        )
    elif encoding == "coherent":
        if not isinstance(state, CoherentMsState):
            raise ValueError("coherent maximization runs on the CoherentMsState dyad form")
        bmax = 2.0 * (state.gamma + 1.0)
        starts = np.empty_like(unit)
        starts[:, 0:4:2] = unit[:, 0:4:2] * math.pi
        starts[:, 1:4:2] = unit[:, 1:4:2] * 2.0 * math.pi
        # Parity contrast decays like exp(-2 Im(beta)^2) while its phase turns
        # at rate 4 gamma, so the optima sit at small |beta|; cycle the start
        # scale so both tight and wide basins get sampled inside the box.
        for i in range(n_starts):
            scale = min(_BETA_START_SCALES[i % len(_BETA_START_SCALES)], bmax)
            starts[i, 4:] = (unit[i, 4:] * 2.0 - 1.0) * scale
        steps = np.array([0.1 * math.pi, 0.2 * math.pi] * 2 + [0.2] * 8)
        best, best_x, seen, _ = _backend.maximize_coherent(
            np.ascontiguousarray(state.weights),
            np.array(state.qubit, dtype=np.int32),
            np.array(state.signs),
            state.gamma,
            bmax,
            starts,
            steps,
            tol,
            max_evals,
        )
    else:
        raise ValueError(f"unknown encoding {encoding!r}")

    if seen > SV_QUANTUM_MAX + 1e-6:
        raise RuntimeError(f"evaluated |S_v| = {seen} beyond the quantum bound")
    settings = SvetlichnySettings.from_vector(_canonical_vector(best_x, encoding), encoding)
    return best, settings
