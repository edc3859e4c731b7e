# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled Svetlichny hot kernels.

Same contract as ctsim._kernels_py: objective evaluation for both
encodings and the multi-start Nelder-Mead descent, with identical
arithmetic ordering so the two backends agree numerically.
"""

from libc.math cimport INFINITY, cos, exp, fabs, sin

import numpy as np

ctypedef double complex dc


cdef inline dc _cexp(dc z) noexcept nogil:
    cdef double m = exp(z.real)
    return m * cos(z.imag) + 1j * (m * sin(z.imag))


cdef inline void _bloch(double omega, double delta, double* out) noexcept nogil:
    cdef double s = sin(omega)
    out[0] = s * cos(delta)
    out[1] = s * sin(delta)
    out[2] = cos(omega)


cdef double _trilinear(const double* t, const double* a, const double* b,
                       const double* c) noexcept nogil:
    cdef double total = 0.0
    cdef int i, j, k
    for i in range(3):
        for j in range(3):
            for k in range(3):
                total += c[i] * a[j] * b[k] * t[9 * i + 3 * j + k]
    return total


cdef double _sv_vsp(const double* t, const double* x) noexcept nogil:
    cdef double c[3]
    cdef double cp[3]
    cdef double a[3]
    cdef double ap[3]
    cdef double b[3]
    cdef double bp[3]
    cdef double u[3]
    cdef double v[3]
    cdef int i
    _bloch(x[0], x[1], c)
    _bloch(x[2], x[3], cp)
    _bloch(x[4], x[5], a)
    _bloch(x[6], x[7], ap)
    _bloch(x[8], x[9], b)
    _bloch(x[10], x[11], bp)
    for i in range(3):
        u[i] = c[i] + cp[i]
        v[i] = c[i] - cp[i]
    return (_trilinear(t, a, b, u) + _trilinear(t, a, bp, v)
            + _trilinear(t, ap, b, v) - _trilinear(t, ap, bp, u))


cdef inline dc _parity_element(double a, double b, dc beta) noexcept nogil:
    cdef dc mu = a - beta
    cdef dc nu = beta - b
    cdef dc arg = (1j * ((a - b) * beta.imag)
                   - 0.5 * (mu.real * mu.real + mu.imag * mu.imag)
                   - 0.5 * (nu.real * nu.real + nu.imag * nu.imag)
                   + mu.conjugate() * nu)
    return _cexp(arg)


cdef void _parity_table(const double* amps, dc beta, dc* table) noexcept nogil:
    cdef int l, k
    for l in range(3):
        for k in range(3):
            table[3 * l + k] = _parity_element(amps[l], amps[k], beta)


cdef void _charlie(double omega, double delta, dc* om) noexcept nogil:
    cdef double cw = cos(omega)
    cdef double sw = sin(omega)
    cdef dc off = _cexp(-1j * delta) * sw
    om[0] = cw
    om[1] = off
    om[2] = off.conjugate()
    om[3] = -cw


cdef double _dyad_correlator(const double* w, const int* q, const dc* om,
                             const dc* ta, const dc* tb) noexcept nogil:
    cdef dc total = 0
    cdef int k, l
    for k in range(3):
        for l in range(3):
            total = total + w[3 * k + l] * om[2 * q[l] + q[k]] * ta[3 * l + k] * tb[3 * l + k]
    return total.real


cdef double _sv_coherent(const double* w, const int* q, const double* amps,
                         const double* x) noexcept nogil:
    cdef dc oc[4]
    cdef dc ocp[4]
    cdef dc osum[4]
    cdef dc odif[4]
    cdef dc ta[9]
    cdef dc tap[9]
    cdef dc tb[9]
    cdef dc tbp[9]
    cdef int i
    _charlie(x[0], x[1], oc)
    _charlie(x[2], x[3], ocp)
    for i in range(4):
        osum[i] = oc[i] + ocp[i]
        odif[i] = oc[i] - ocp[i]
    _parity_table(amps, x[4] + 1j * x[5], ta)
    _parity_table(amps, x[6] + 1j * x[7], tap)
    _parity_table(amps, x[8] + 1j * x[9], tb)
    _parity_table(amps, x[10] + 1j * x[11], tbp)
    return (_dyad_correlator(w, q, osum, ta, tb)
            + _dyad_correlator(w, q, odif, ta, tbp)
            + _dyad_correlator(w, q, odif, tap, tb)
            - _dyad_correlator(w, q, osum, tap, tbp))


cdef struct Problem:
    int kind
    double t[27]
    double w[9]
    int q[3]
    double amps[3]
    double beta_max


cdef struct Tracker:
    double best_g
    double best_raw
    double max_raw
    double best_x[12]
    long evals


cdef double _eval(Problem* p, const double* x, Tracker* tr) noexcept nogil:
    cdef double s, g, raw, excess, pen
    cdef int i
    if p.kind == 0:
        s = _sv_vsp(p.t, x)
        g = -fabs(s)
    else:
        s = _sv_coherent(p.w, p.q, p.amps, x)
        pen = 0.0
        for i in range(4, 12):
            excess = fabs(x[i]) - p.beta_max
            if excess > 0.0:
                pen += excess * excess
        g = -fabs(s) + 10.0 * pen
    raw = fabs(s)
    tr.evals += 1
    if raw > tr.max_raw:
        tr.max_raw = raw
    if g < tr.best_g:
        tr.best_g = g
        tr.best_raw = raw
        for i in range(12):
            tr.best_x[i] = x[i]
    return g


cdef void _nelder_mead(Problem* p, const double* x0, const double* steps,
                       double tol, long max_evals, Tracker* tr) noexcept nogil:
    cdef double simplex[13][12]
    cdef double fvals[13]
    cdef double tmpx[13][12]
    cdef double tmpf[13]
    cdef double centroid[12]
    cdef double xr[12]
    cdef double xe[12]
    cdef double xc[12]
    cdef int order[13]
    cdef int i, j, k, pos
    cdef long start_evals
    cdef double fr, fe, fc, key
    cdef bint shrink

    for i in range(12):
        simplex[0][i] = x0[i]
    for j in range(12):
        for i in range(12):
            simplex[j + 1][i] = x0[i]
        simplex[j + 1][j] = x0[j] + steps[j]
    for j in range(13):
        fvals[j] = _eval(p, simplex[j], tr)
    start_evals = tr.evals

    while True:
        # Stable insertion sort of vertex order by objective value.
        for j in range(13):
            order[j] = j
        for j in range(1, 13):
            pos = order[j]
            key = fvals[pos]
            k = j - 1
            while k >= 0 and fvals[order[k]] > key:
                order[k + 1] = order[k]
                k -= 1
            order[k + 1] = pos
        for j in range(13):
            tmpf[j] = fvals[order[j]]
            for i in range(12):
                tmpx[j][i] = simplex[order[j]][i]
        for j in range(13):
            fvals[j] = tmpf[j]
            for i in range(12):
                simplex[j][i] = tmpx[j][i]

        if fvals[12] - fvals[0] <= tol:
            break
        if tr.evals - start_evals >= max_evals:
            break

        for i in range(12):
            centroid[i] = 0.0
        for j in range(12):
            for i in range(12):
                centroid[i] += simplex[j][i]
        for i in range(12):
            centroid[i] /= 12.0

        for i in range(12):
            xr[i] = centroid[i] + (centroid[i] - simplex[12][i])
        fr = _eval(p, xr, tr)
        if fr < fvals[0]:
            for i in range(12):
                xe[i] = centroid[i] + 2.0 * (centroid[i] - simplex[12][i])
            fe = _eval(p, xe, tr)
            if fe < fr:
                for i in range(12):
                    simplex[12][i] = xe[i]
                fvals[12] = fe
            else:
                for i in range(12):
                    simplex[12][i] = xr[i]
                fvals[12] = fr
        elif fr < fvals[11]:
            for i in range(12):
                simplex[12][i] = xr[i]
            fvals[12] = fr
        else:
            shrink = True
            if fr < fvals[12]:
                for i in range(12):
                    xc[i] = centroid[i] + 0.5 * (centroid[i] - simplex[12][i])
                fc = _eval(p, xc, tr)
                if fc <= fr:
                    for i in range(12):
                        simplex[12][i] = xc[i]
                    fvals[12] = fc
                    shrink = False
            else:
                for i in range(12):
                    xc[i] = centroid[i] - 0.5 * (centroid[i] - simplex[12][i])
                fc = _eval(p, xc, tr)
                if fc < fvals[12]:
                    for i in range(12):
                        simplex[12][i] = xc[i]
                    fvals[12] = fc
                    shrink = False
            if shrink:
                for j in range(1, 13):
                    for i in range(12):
                        simplex[j][i] = simplex[0][i] + 0.5 * (simplex[j][i] - simplex[0][i])
                    fvals[j] = _eval(p, simplex[j], tr)


cdef _multistart(Problem* p, double[:, ::1] starts, double[::1] steps,
                 double tol, long max_evals):
    cdef Tracker tr
    cdef double x0[12]
    cdef double st[12]
    cdef int i
    cdef Py_ssize_t row
    tr.best_g = INFINITY
    tr.best_raw = 0.0
    tr.max_raw = 0.0
    tr.evals = 0
    for i in range(12):
        tr.best_x[i] = 0.0
        st[i] = steps[i]
    with nogil:
        for row in range(starts.shape[0]):
            for i in range(12):
                x0[i] = starts[row, i]
            _nelder_mead(p, x0, st, tol, max_evals, &tr)
    best_x = np.empty(12)
    for i in range(12):
        best_x[i] = tr.best_x[i]
    return tr.best_raw, best_x, tr.max_raw, tr.evals


cdef void _load_vsp(Problem* p, object tensor) except *:
    t = np.ascontiguousarray(np.asarray(tensor, dtype=np.float64).ravel())
    if t.shape[0] != 27:
        raise ValueError("correlation tensor must have 27 entries")
    cdef double[::1] tv = t
    cdef int i
    p.kind = 0
    for i in range(27):
        p.t[i] = tv[i]


cdef void _load_coherent(Problem* p, object weights, object qubit, object signs,
                         double gamma, double beta_max) except *:
    w = np.ascontiguousarray(np.asarray(weights, dtype=np.float64).ravel())
    if w.shape[0] != 9:
        raise ValueError("weights must be a 3x3 matrix")
    q = np.ascontiguousarray(np.asarray(qubit, dtype=np.int32).ravel())
    s = np.ascontiguousarray(np.asarray(signs, dtype=np.float64).ravel())
    if q.shape[0] != 3 or s.shape[0] != 3:
        raise ValueError("qubit and signs must have 3 entries")
    cdef double[::1] wv = w
    cdef int[::1] qv = q
    cdef double[::1] sv = s
    cdef int i
    p.kind = 1
    p.beta_max = beta_max
    for i in range(9):
        p.w[i] = wv[i]
    for i in range(3):
        p.q[i] = qv[i]
        p.amps[i] = sv[i] * gamma


def svetlichny_vsp(tensor, x):
    """Signed S_v from a 3x3x3 correlation tensor and 12 angle parameters."""
    cdef Problem p
    _load_vsp(&p, tensor)
    xa = np.ascontiguousarray(np.asarray(x, dtype=np.float64).ravel())
    if xa.shape[0] != 12:
        raise ValueError("expected 12 parameters")
    cdef double[::1] xv = xa
    return _sv_vsp(p.t, &xv[0])


def svetlichny_coherent(weights, qubit, signs, gamma, x):
    """Signed S_v for the damped coherent dyad state; exact parity elements."""
    cdef Problem p
    _load_coherent(&p, weights, qubit, signs, gamma, 0.0)
    xa = np.ascontiguousarray(np.asarray(x, dtype=np.float64).ravel())
    if xa.shape[0] != 12:
        raise ValueError("expected 12 parameters")
    cdef double[::1] xv = xa
    return _sv_coherent(p.w, p.q, p.amps, &xv[0])


def maximize_vsp(tensor, starts, steps, tol, max_evals):
    """Multi-start simplex maximization of |S_v| for qubit observables.

    Returns (best |S_v|, best parameters, max |S_v| over every evaluation,
    total evaluations).
    """
    cdef Problem p
    _load_vsp(&p, tensor)
    sa = np.ascontiguousarray(np.asarray(starts, dtype=np.float64))
    if sa.ndim != 2 or sa.shape[1] != 12:
        raise ValueError("starts must have shape (n, 12)")
    pa = np.ascontiguousarray(np.asarray(steps, dtype=np.float64).ravel())
    if pa.shape[0] != 12:
        raise ValueError("steps must have 12 entries")
    return _multistart(&p, sa, pa, float(tol), int(max_evals))


def maximize_coherent(weights, qubit, signs, gamma, beta_max, starts, steps, tol, max_evals):
    """Multi-start maximization for the hybrid qubit/displaced-parity case."""
    cdef Problem p
    _load_coherent(&p, weights, qubit, signs, float(gamma), float(beta_max))
    sa = np.ascontiguousarray(np.asarray(starts, dtype=np.float64))
    if sa.ndim != 2 or sa.shape[1] != 12:
        raise ValueError("starts must have shape (n, 12)")
    pa = np.ascontiguousarray(np.asarray(steps, dtype=np.float64).ravel())
    if pa.shape[0] != 12:
        raise ValueError("steps must have 12 entries")
    return _multistart(&p, sa, pa, float(tol), int(max_evals))
