"""Pure-Python fallback for the Svetlichny hot kernels.

Mirrors ctsim._kernels (the Cython extension) operation for operation:
objective evaluation for both encodings plus the multi-start Nelder-Mead
descent.  Plain floats and lists beat numpy at this size; keep arithmetic
order identical to the compiled code so both backends agree numerically.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

_N = 12  # parameters per settings vector


def _bloch(omega: float, delta: float) -> tuple[float, float, float]:
    s = math.sin(omega)
    return s * math.cos(delta), s * math.sin(delta), math.cos(omega)


def _trilinear(t, a, b, c) -> float:
    """sum_ijk c_i a_j b_k T[i,j,k]; T indexed (controller, sender, receiver)."""
    total = 0.0
    for i in range(3):
        for j in range(3):
            for k in range(3):
                total += c[i] * a[j] * b[k] * t[9 * i + 3 * j + k]
    return total


def _sv_vsp(t, x) -> float:
    c = _bloch(x[0], x[1])
    cp = _bloch(x[2], x[3])
    a = _bloch(x[4], x[5])
    ap = _bloch(x[6], x[7])
    b = _bloch(x[8], x[9])
    bp = _bloch(x[10], x[11])
    u = (c[0] + cp[0], c[1] + cp[1], c[2] + cp[2])
    v = (c[0] - cp[0], c[1] - cp[1], c[2] - cp[2])
    return (
        _trilinear(t, a, b, u)
        + _trilinear(t, a, bp, v)
        + _trilinear(t, ap, b, v)
        - _trilinear(t, ap, bp, u)
    )


def _parity_element(a: float, b: float, beta: complex) -> complex:
    mu = a - beta
    nu = beta - b
    return cmath.exp(
        1j * (a - b) * beta.imag
        - 0.5 * (mu.real * mu.real + mu.imag * mu.imag)
        - 0.5 * (nu.real * nu.real + nu.imag * nu.imag)
        + mu.conjugate() * nu
    )


def _parity_table(amps, beta: complex):
    return [[_parity_element(amps[l], amps[k], beta) for k in range(3)] for l in range(3)]


def _charlie_matrix(omega: float, delta: float):
    """2x2 rotated sigma-z flattened to (m00, m01, m10, m11)."""
    cw, sw = math.cos(omega), math.sin(omega)
    off = cmath.exp(-1j * delta) * sw
    return (complex(cw), off, off.conjugate(), complex(-cw))


def _dyad_correlator(w, q, om, ta, tb) -> float:
    total = 0j
    for k in range(3):
        for l in range(3):
            total += w[3 * k + l] * om[2 * q[l] + q[k]] * ta[l][k] * tb[l][k]
    return total.real


def _sv_coherent(w, q, amps, x) -> float:
    oc = _charlie_matrix(x[0], x[1])
    ocp = _charlie_matrix(x[2], x[3])
    osum = tuple(oc[i] + ocp[i] for i in range(4))
    odif = tuple(oc[i] - ocp[i] for i in range(4))
    ta = _parity_table(amps, complex(x[4], x[5]))
    tap = _parity_table(amps, complex(x[6], x[7]))
    tb = _parity_table(amps, complex(x[8], x[9]))
    tbp = _parity_table(amps, complex(x[10], x[11]))
    return (
        _dyad_correlator(w, q, osum, ta, tb)
        + _dyad_correlator(w, q, odif, ta, tbp)
        + _dyad_correlator(w, q, odif, tap, tb)
        - _dyad_correlator(w, q, osum, tap, tbp)
    )


def svetlichny_vsp(tensor, x) -> float:
    """Signed S_v from a 3x3x3 correlation tensor and 12 angle parameters."""
    t = [float(v) for v in np.asarray(tensor).ravel()]
    if len(t) != 27:
        raise ValueError("correlation tensor must have 27 entries")
    return _sv_vsp(t, [float(v) for v in x])


def svetlichny_coherent(weights, qubit, signs, gamma, x) -> float:
    """Signed S_v for the damped coherent dyad state; exact parity elements."""
    w = [float(v) for v in np.asarray(weights).ravel()]
    if len(w) != 9:
        raise ValueError("weights must be a 3x3 matrix")
    q = [int(v) for v in qubit]
    amps = [float(s) * float(gamma) for s in signs]
    return _sv_coherent(w, q, amps, [float(v) for v in x])


class _Tracker:
    """Best objective / raw |S_v| seen across every evaluation."""

    __slots__ = ("best_g", "best_raw", "best_x", "max_raw", "evals")

    def __init__(self):
        self.best_g = math.inf
        self.best_raw = 0.0
        self.best_x = None
        self.max_raw = 0.0
        self.evals = 0


def _box_penalty(x, beta_max: float) -> float:
    pen = 0.0
    for i in range(4, _N):
        excess = abs(x[i]) - beta_max
        if excess > 0.0:
            pen += excess * excess
    return 10.0 * pen


def _make_objective(kind, data, tracker, beta_max):
    def objective(x):
        if kind == 0:
            s = _sv_vsp(data, x)
            g = -abs(s)
        else:
            w, q, amps = data
            s = _sv_coherent(w, q, amps, x)
            g = -abs(s) + _box_penalty(x, beta_max)
        raw = abs(s)
        tracker.evals += 1
        if raw > tracker.max_raw:
            tracker.max_raw = raw
        if g < tracker.best_g:
            tracker.best_g = g
            tracker.best_raw = raw
            tracker.best_x = list(x)
        return g

    return objective


def _nelder_mead(objective, x0, steps, tol: float, max_evals: int, tracker) -> None:
    """Simplex descent with standard reflect/expand/contract/shrink moves."""
    n = _N
    simplex = [list(x0)]
    for i in range(n):
        vert = list(x0)
        vert[i] += steps[i]
        simplex.append(vert)
    fvals = [objective(v) for v in simplex]
    start_evals = tracker.evals

    while True:
        order = sorted(range(n + 1), key=lambda i: fvals[i])
        simplex = [simplex[i] for i in order]
        fvals = [fvals[i] for i in order]
        if fvals[n] - fvals[0] <= tol:
            break
        if tracker.evals - start_evals >= max_evals:
            break

        centroid = [0.0] * n
        for v in simplex[:n]:
            for i in range(n):
                centroid[i] += v[i]
        for i in range(n):
            centroid[i] /= n

        worst = simplex[n]
        xr = [centroid[i] + (centroid[i] - worst[i]) for i in range(n)]
        fr = objective(xr)
        if fr < fvals[0]:
            xe = [centroid[i] + 2.0 * (centroid[i] - worst[i]) for i in range(n)]
            fe = objective(xe)
            if fe < fr:
                simplex[n], fvals[n] = xe, fe
            else:
                simplex[n], fvals[n] = xr, fr
        elif fr < fvals[n - 1]:
            simplex[n], fvals[n] = xr, fr
        else:
            if fr < fvals[n]:
                xc = [centroid[i] + 0.5 * (centroid[i] - worst[i]) for i in range(n)]
                fc = objective(xc)
                if fc <= fr:
                    simplex[n], fvals[n] = xc, fc
                    continue
            else:
                xc = [centroid[i] - 0.5 * (centroid[i] - worst[i]) for i in range(n)]
                fc = objective(xc)
                if fc < fvals[n]:
                    simplex[n], fvals[n] = xc, fc
                    continue
            best = simplex[0]
            for j in range(1, n + 1):
                simplex[j] = [best[i] + 0.5 * (simplex[j][i] - best[i]) for i in range(n)]
                fvals[j] = objective(simplex[j])


def _multistart(kind, data, beta_max, starts, steps, tol, max_evals):
    starts = np.asarray(starts, dtype=float)
    if starts.ndim != 2 or starts.shape[1] != _N:
        raise ValueError(f"starts must have shape (n, {_N})")
    steps = [float(s) for s in np.asarray(steps).ravel()]
    tracker = _Tracker()
    objective = _make_objective(kind, data, tracker, beta_max)
    for row in starts:
        _nelder_mead(objective, [float(v) for v in row], steps, tol, max_evals, tracker)
    return tracker.best_raw, np.array(tracker.best_x), tracker.max_raw, tracker.evals


def maximize_vsp(tensor, starts, steps, tol, max_evals):
    """Multi-start simplex maximization of |S_v| for qubit observables.

    Returns (best |S_v|, best parameters, max |S_v| over every evaluation,
    total evaluations).
    """
    t = [float(v) for v in np.asarray(tensor).ravel()]
    if len(t) != 27:
        raise ValueError("correlation tensor must have 27 entries")
    return _multistart(0, t, 0.0, starts, steps, tol, max_evals)


def maximize_coherent(weights, qubit, signs, gamma, beta_max, starts, steps, tol, max_evals):
    """Multi-start maximization for the hybrid qubit/displaced-parity case."""
    w = [float(v) for v in np.asarray(weights).ravel()]
    if len(w) != 9:
        raise ValueError("weights must be a 3x3 matrix")
    q = [int(v) for v in qubit]
    amps = [float(s) * float(gamma) for s in signs]
    return _multistart(1, (w, q, amps), float(beta_max), starts, steps, tol, max_evals)
