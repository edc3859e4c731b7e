"""Dense complex linear algebra on states with labeled subsystems.

Every state carries its subsystem dimensions explicitly so hybrid
qubit-plus-mode registers stay unambiguous.  All numerics are
double-precision complex; the global tolerance policy lives here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Tolerance policy shared by the whole package.
ATOL_STATE = 1e-10   # norm / trace / hermiticity of state carriers
ATOL_EIG = 1e-8      # eigensolver residuals
ATOL_PSD = 1e-9      # allowed negativity of density-operator spectra
PROB_FLOOR = 1e-14   # below this a measurement outcome is unreachable


class OutcomeUnreachableError(ValueError):
    """Projective measurement outcome has (numerically) zero probability."""


def _as_complex_matrix(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class Ket:
    """Pure state over an ordered list of subsystems."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        amp = np.asarray(self.amplitudes, dtype=complex).ravel()
        object.__setattr__(self, "amplitudes", amp)
        if any(d <= 0 for d in dims):
            raise ValueError(f"subsystem dimensions must be positive, got {dims}")
        if math.prod(dims) != amp.size:
            raise ValueError(f"dims {dims} imply size {math.prod(dims)}, got {amp.size}")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > ATOL_STATE:
            raise ValueError(f"ket norm {norm} deviates from 1 by more than {ATOL_STATE}")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: "Ket") -> complex:
        """Inner product <self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def to_density(self) -> "DensityOperator":
        return DensityOperator(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace operator over an ordered list of subsystems.

    Hermiticity and trace are validated at construction; positivity is
    asserted separately via :meth:`min_eigenvalue` (cubic cost, so it is
    exercised by the test suites rather than on every construction).
    """

    dims: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        m = _as_complex_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if math.prod(dims) != m.shape[0]:
            raise ValueError(f"dims {dims} imply side {math.prod(dims)}, got {m.shape[0]}")
        asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if asym > ATOL_STATE:
            raise ValueError(f"matrix is not Hermitian: max |m - m^H| = {asym:.3e}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > ATOL_STATE:
            raise ValueError(f"trace {tr} deviates from 1 by more than {ATOL_STATE}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue; should be >= -ATOL_PSD for a physical state."""
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def assert_positive(self, tol: float = ATOL_PSD) -> None:
        lo = self.min_eigenvalue()
        if lo < -tol:
            raise ValueError(f"density operator has eigenvalue {lo:.3e} < -{tol:.1e}")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(_as_complex_matrix(a), _as_complex_matrix(b))


def eig_hermitian(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns eigenvalues in ascending order and the matrix whose columns are
    the matching orthonormal eigenvectors.  Rejects non-Hermitian input.
    """
    m = _as_complex_matrix(m)
    asym = float(np.max(np.abs(m - m.conj().T)))
    if asym > ATOL_STATE:
        raise ValueError(f"matrix is not Hermitian: max asymmetry {asym:.3e} > {ATOL_STATE}")
    w, v = np.linalg.eigh(m)
    return w, v


def _to_tensor(rho: DensityOperator) -> np.ndarray:
    """Reshape the matrix to one row and one column axis per subsystem."""
    return rho.matrix.reshape(rho.dims + rho.dims)


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Trace out every subsystem not listed in ``keep``.

    The result carries the kept subsystems in their original order.
    """
    n = len(rho.dims)
    keep = sorted({int(k) for k in keep})
    if not keep:
        raise ValueError("keep set must not be empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")

    t = _to_tensor(rho)
    # Row/column axes of traced subsystems share an einsum index; kept ones stay free.
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(t, row + col, out)
    side = math.prod(rho.dims[i] for i in keep)
    return DensityOperator(tuple(rho.dims[i] for i in keep), reduced.reshape(side, side))


def project(rho: DensityOperator, subsystem: int, ket: Ket) -> tuple[DensityOperator, float]:
    """Project ``subsystem`` onto ``ket`` and renormalize.

    Returns the post-measurement state on the remaining subsystems together
    with the outcome probability Tr[(|k><k| x I) rho].  Outcomes with
    probability below PROB_FLOOR are unreachable and raise.
    """
    n = len(rho.dims)
    if not 0 <= subsystem < n:
        raise ValueError(f"subsystem {subsystem} out of range for {n} subsystems")
    if ket.dims != (rho.dims[subsystem],):
        raise ValueError(f"ket dims {ket.dims} do not match subsystem dim {rho.dims[subsystem]}")
    if n == 1:
        raise ValueError("projecting the only subsystem leaves no residual state")

    t = _to_tensor(rho)
    v = ket.amplitudes
    # <k| rho |k> on the addressed subsystem: contract its row axis with v*, column with v.
    t = np.tensordot(v.conj(), t, axes=([0], [subsystem]))
    # The contracted axis is gone; the matching column axis moved up by one.
    t = np.tensordot(t, v, axes=([n - 1 + subsystem], [0]))

    rest = tuple(d for i, d in enumerate(rho.dims) if i != subsystem)
    side = math.prod(rest)
    sub = t.reshape(side, side)
    prob = float(np.trace(sub).real)
    if prob < PROB_FLOOR:
        raise OutcomeUnreachableError(
            f"outcome unreachable: probability {prob:.3e} below {PROB_FLOOR:.0e}"
        )
    if prob > 1.0 + ATOL_STATE:
        raise ValueError(f"outcome probability {prob} exceeds 1")
    return DensityOperator(rest, sub / prob), min(prob, 1.0)


def trace_distance(a: DensityOperator, b: DensityOperator) -> float:
    """Half the trace norm of a - b."""
    if a.dims != b.dims:
        raise ValueError(f"dims mismatch: {a.dims} vs {b.dims}")
    w = np.linalg.eigvalsh(a.matrix - b.matrix)
    return 0.5 * float(np.sum(np.abs(w)))
