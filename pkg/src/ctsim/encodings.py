"""State preparation for both single-rail optical encodings.

The tripartite channel state interpolates between a GHZ state and a
qubit-times-Bell product through one angle theta: with c = cos(theta) and
d = sin(theta) the state is (|000> + c|111> + d|011>)/sqrt(2), ordered as
(controller, sender, receiver).  Modes 2 and 3 are carried either by
vacuum/single-photon qubits or by coherent states |alpha>, |-alpha>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hilbert import ATOL_STATE, Ket, partial_trace

# Fock-space tail mass allowed past the truncation.
TAIL_TOL = 1e-12
# Below this amplitude the even/odd cat pair degenerates into Fock |0>, |1>.
CAT_DEGENERATE_AMP = 1e-4


class TruncationError(ValueError):
    """Fock truncation too small for the requested coherent amplitude."""


@dataclass(frozen=True)
class MsParams:
    """Angle defining the channel state; c = cos(theta), d = sin(theta)."""

    theta: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")

    @property
    def c(self) -> float:
        return math.cos(self.theta)

    @property
    def d(self) -> float:
        return math.sin(self.theta)


def coherent_tail_mass(alpha: float, n_max: int) -> float:
    """Probability weight of |alpha> on Fock states n >= n_max."""
    lam = alpha * alpha
    if lam == 0.0:
        return 0.0
    # 1 - CDF of Poisson(lam) at n_max - 1, summed forward until negligible.
    term = math.exp(-lam)
    cdf = term
    for n in range(1, n_max):
        term *= lam / n
        cdf += term
    return max(0.0, 1.0 - cdf)


def fock_cutoff(alpha: float) -> int:
    """Truncation dimension policy for coherent amplitude ``alpha``.

    Starts at ceil(alpha^2 + 6 alpha + 12) and grows until the tail mass
    drops below TAIL_TOL.  Shared by every module that materializes modes.
    """
    a = abs(alpha)
    n = math.ceil(a * a + 6.0 * a + 12.0)
    while coherent_tail_mass(a, n) >= TAIL_TOL:
        n += 1
    return n


def coherent_ket(alpha: float, n_max: int) -> Ket:
    """Coherent state |alpha> truncated to ``n_max`` Fock levels.

    Amplitudes exp(-alpha^2/2) alpha^n / sqrt(n!), renormalized after
    truncation.  Real (possibly negative) amplitudes only.
    """
    tail = coherent_tail_mass(alpha, n_max)
    if tail >= TAIL_TOL:
        raise TruncationError(
            f"tail mass {tail:.3e} at n_max={n_max} exceeds {TAIL_TOL:.0e}; "
            f"need n_max >= {fock_cutoff(alpha)}"
        )
    amps = np.empty(n_max, dtype=complex)
    amps[0] = math.exp(-alpha * alpha / 2.0)
    for n in range(1, n_max):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    amps /= np.linalg.norm(amps)
    return Ket((n_max,), amps)


@dataclass(frozen=True)
class CoherentEncoding:
    """Coherent-state qubit {|alpha>, |-alpha>} with its Fock truncation."""

    alpha: float
    n_max: int = 0

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        n = self.n_max if self.n_max > 0 else fock_cutoff(self.alpha)
        object.__setattr__(self, "n_max", int(n))
        tail = coherent_tail_mass(self.alpha, self.n_max)
        if tail >= TAIL_TOL:
            raise TruncationError(
                f"tail mass {tail:.3e} at n_max={self.n_max} exceeds {TAIL_TOL:.0e}; "
                f"need n_max >= {fock_cutoff(self.alpha)}"
            )


def ms_state_vsp(params: MsParams) -> Ket:
    """Channel state in the vacuum/single-photon encoding, dims (2, 2, 2)."""
    amps = np.zeros(8, dtype=complex)
    s = 1.0 / math.sqrt(2.0)
    amps[0b000] = s
    amps[0b111] = s * params.c
    amps[0b011] = s * params.d
    return Ket((2, 2, 2), amps)


def ms_state_coherent(params: MsParams, enc: CoherentEncoding) -> Ket:
    """Channel state with coherent-state modes, dims (2, n_max, n_max).

    The controller keeps a true two-level system; modes 2 and 3 carry
    |+-alpha>.  The raw superposition
    (|0,a,a> + c|1,-a,-a> + d|0,-a,-a>)/sqrt(2) has squared norm
    1 + sin(theta) exp(-4 alpha^2) because the mode states overlap; the
    returned ket is renormalized.
    """
    n = enc.n_max
    plus = coherent_ket(enc.alpha, n).amplitudes
    minus = coherent_ket(-enc.alpha, n).amplitudes
    e0 = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([0.0, 1.0], dtype=complex)
    pp = np.kron(plus, plus)
    mm = np.kron(minus, minus)
    s = 1.0 / math.sqrt(2.0)
    raw = s * (np.kron(e0, pp) + params.c * np.kron(e1, mm) + params.d * np.kron(e0, mm))
    raw /= np.linalg.norm(raw)
    return Ket((2, n, n), raw)


def charlie_basis(params: MsParams) -> tuple[Ket, Ket]:
    """Controller measurement basis xi+- = [(1 +- d)|0> +- c|1>] normalized.

    With (1 +- d)^2 + c^2 = 2(1 +- d) the components reduce to
    (sqrt((1 +- d)/2), +- c / sqrt(2(1 +- d))).  At d = 1 the minus vector
    degenerates; continuity in c -> 0+ fixes it as -|1>.
    """
    c, d = params.c, params.d
    plus = np.array([math.sqrt((1 + d) / 2), c / math.sqrt(2 * (1 + d))], dtype=complex)
    if 1.0 - d < 1e-12:
        minus = np.array([0.0, -1.0], dtype=complex)
    else:
        minus = np.array([math.sqrt((1 - d) / 2), -c / math.sqrt(2 * (1 - d))], dtype=complex)
    plus /= np.linalg.norm(plus)
    minus /= np.linalg.norm(minus)
    return Ket((2,), plus), Ket((2,), minus)


@dataclass(frozen=True)
class CatBasis:
    """Orthonormal even/odd cat pair for one mode of amplitude gamma."""

    gamma: float
    n_max: int
    even_ket: Ket = field(repr=False)
    odd_ket: Ket = field(repr=False)

    @property
    def gram(self) -> float:
        """Overlap <gamma|-gamma> = exp(-2 gamma^2)."""
        return math.exp(-2.0 * self.gamma * self.gamma)


def cat_basis(gamma: float, n_max: int) -> CatBasis:
    """Even and odd coherent superpositions (|g> +- |-g>) normalized.

    For gamma below CAT_DEGENERATE_AMP the pair is replaced by its analytic
    limit, the Fock states |0> and |1>.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")
    if gamma < CAT_DEGENERATE_AMP:
        even = np.zeros(n_max, dtype=complex)
        odd = np.zeros(n_max, dtype=complex)
        even[0] = 1.0
        odd[1] = 1.0
        return CatBasis(gamma, n_max, Ket((n_max,), even), Ket((n_max,), odd))
    plus = coherent_ket(gamma, n_max).amplitudes
    minus = coherent_ket(-gamma, n_max).amplitudes
    even = plus + minus
    odd = plus - minus
    even /= np.linalg.norm(even)
    odd /= np.linalg.norm(odd)
    return CatBasis(gamma, n_max, Ket((n_max,), even), Ket((n_max,), odd))


_SIGMA_Y2 = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)


def _concurrence(rho2: np.ndarray) -> float:
    """Two-qubit concurrence via the spin-flipped spectrum."""
    tilde = _SIGMA_Y2 @ rho2.conj() @ _SIGMA_Y2
    lam = np.linalg.eigvals(rho2 @ tilde)
    lam = np.sqrt(np.clip(lam.real, 0.0, None))
    lam.sort()
    return max(0.0, lam[3] - lam[2] - lam[1] - lam[0])


def tangle(state: Ket) -> float:
    """Residual three-way entanglement of a pure three-qubit state.

    Computed as C^2 of qubit 1 against the rest minus the squared pairwise
    concurrences C^2_12 and C^2_13.
    """
    if state.dims != (2, 2, 2):
        raise ValueError(f"tangle requires dims (2, 2, 2), got {state.dims}")
    rho = state.to_density()
    rho1 = partial_trace(rho, [0]).matrix
    c1_sq = 4.0 * float(np.linalg.det(rho1).real)
    c12 = _concurrence(partial_trace(rho, [0, 1]).matrix)
    c13 = _concurrence(partial_trace(rho, [0, 2]).matrix)
    tau = c1_sq - c12 * c12 - c13 * c13
    if tau < -ATOL_STATE or tau > 1.0 + ATOL_STATE:
        raise ValueError(f"tangle {tau} outside [0, 1]")
    return min(max(tau, 0.0), 1.0)
