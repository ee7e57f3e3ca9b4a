# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the power-allocation hot path.

Mirrors uavwpt._kernels._ref function for function; see that module for the
contracts.  The solver loop, objective, gradient and simplex projection are
plain C loops over small dense buffers, which is what makes large Monte-Carlo
sweeps practical.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, log, sqrt

from ..errors import ConsistencyError

cnp.import_array()

BACKEND = "cython"

cdef int _MAX_BACKTRACK = 60


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _chol_lower(double complex* a, double complex* l, int n) nogil:
    """Cholesky factor (lower) of a Hermitian matrix stored row-major.

    Only the lower triangles of ``a`` and ``l`` are referenced/written.
    Returns -1 when a pivot is nonpositive or NaN.
    """
    cdef int i, j, t
    cdef double s
    cdef double complex c
    for j in range(n):
        s = a[j * n + j].real
        for t in range(j):
            s -= _abs2(l[j * n + t])
        if not s > 0.0:
            return -1
        l[j * n + j] = sqrt(s)
        for i in range(j + 1, n):
            c = a[i * n + j]
            for t in range(j):
                c -= l[i * n + t] * l[j * n + t].conjugate()
            l[i * n + j] = c / l[j * n + j].real
    return 0


cdef inline double _quadform_inv(double complex* l, double complex* hrow,
                                 double complex* y, int n) nogil:
    """||L^{-1} h||^2 via forward substitution."""
    cdef int i, t
    cdef double complex c
    cdef double s = 0.0
    for i in range(n):
        c = hrow[i]
        for t in range(i):
            c -= l[i * n + t] * y[t]
        y[i] = c / l[i * n + i].real
        s += _abs2(y[i])
    return s


cdef double _eval(double complex* h, double* dw, double* p, double sigma2,
                  int k_ues, int n, bint want_grad, double* grad,
                  double complex* a, double complex* l, double complex* y,
                  int* status) nogil:
    """Objective (and optionally gradient) of sum_k dw_k logdet(A_k)."""
    cdef int i, j, k, m
    cdef double obj = 0.0, ld, scale
    cdef double complex* hk
    for i in range(n):
        for j in range(i + 1):
            a[i * n + j] = 1.0 if i == j else 0.0
    if want_grad:
        for m in range(k_ues):
            grad[m] = 0.0
    for k in range(k_ues):
        hk = h + k * n
        scale = p[k] / sigma2
        for i in range(n):
            for j in range(i + 1):
                a[i * n + j] = a[i * n + j] + scale * hk[i] * hk[j].conjugate()
        if _chol_lower(a, l, n) != 0:
            status[0] = -1
            return 0.0
        ld = 0.0
        for i in range(n):
            ld += log(l[i * n + i].real)
        obj += dw[k] * 2.0 * ld
        if want_grad and dw[k] != 0.0:
            for m in range(k + 1):
                grad[m] += dw[k] * _quadform_inv(l, h + m * n, y, n) / sigma2
    status[0] = 0
    return obj


cdef void _project_c(double* v, double* out, double* work, int k_ues,
                     double budget) nogil:
    cdef int i, j
    cdef double total = 0.0, key, css, theta
    for i in range(k_ues):
        out[i] = v[i] if v[i] > 0.0 else 0.0
        total += out[i]
    if total <= budget:
        return
    if budget == 0.0:
        for i in range(k_ues):
            out[i] = 0.0
        return
    # insertion sort descending; K is small
    for i in range(k_ues):
        work[i] = v[i]
    for i in range(1, k_ues):
        key = work[i]
        j = i - 1
        while j >= 0 and work[j] < key:
            work[j + 1] = work[j]
            j -= 1
        work[j + 1] = key
    css = 0.0
    theta = 0.0
    for j in range(k_ues):
        css += work[j]
        if work[j] - (css - budget) / (j + 1.0) > 0.0:
            theta = (css - budget) / (j + 1.0)
    for i in range(k_ues):
        out[i] = v[i] - theta
        if out[i] < 0.0:
            out[i] = 0.0


cdef double _kkt_c(double* p, double* g, int k_ues, double budget,
                   double eps_act) nogil:
    cdef int m
    cdef double mu = g[0], total = 0.0, r_grad = 0.0, r_budget, diff, worst
    cdef bint any_active = False
    for m in range(1, k_ues):
        if g[m] > mu:
            mu = g[m]
    for m in range(k_ues):
        total += p[m]
        if p[m] > eps_act:
            any_active = True
            diff = fabs(g[m] - mu)
            if diff > r_grad:
                r_grad = diff
    if mu > 0.0:
        r_grad = r_grad / mu if any_active else 0.0
        r_budget = fabs(total - budget) / (budget if budget > eps_act else eps_act)
        return r_grad if r_grad > r_budget else r_budget
    if not any_active:
        return 0.0
    worst = 0.0
    for m in range(k_ues):
        if p[m] > eps_act and fabs(g[m]) > worst:
            worst = fabs(g[m])
    return worst / (1.0 if fabs(mu) < 1.0 else fabs(mu))


def dual_objective(h, dw, p, sigma2):
    """sum_k dw[k] * logdet(I + sum_{n<=k} (p[n]/sigma2) h_n h_n^H)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] hc = \
        np.ascontiguousarray(h, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] dwc = \
        np.ascontiguousarray(dw, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] pc = \
        np.ascontiguousarray(p, dtype=np.float64)
    cdef int k_ues = hc.shape[0], n = hc.shape[1], status = 0
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] buf = \
        np.empty(2 * n * n + n, dtype=np.complex128)
    cdef double complex* b = <double complex*> buf.data
    cdef double obj = _eval(<double complex*> hc.data, <double*> dwc.data,
                            <double*> pc.data, sigma2, k_ues, n, False, NULL,
                            b, b + n * n, b + 2 * n * n, &status)
    if status != 0:
        raise ConsistencyError("accumulated interference matrix is not positive definite")
    return obj


def dual_objective_grad(h, dw, p, sigma2):
    """Objective and its gradient w.r.t. p (both in permuted order)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] hc = \
        np.ascontiguousarray(h, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] dwc = \
        np.ascontiguousarray(dw, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] pc = \
        np.ascontiguousarray(p, dtype=np.float64)
    cdef int k_ues = hc.shape[0], n = hc.shape[1], status = 0
    cdef cnp.ndarray[cnp.float64_t, ndim=1] grad = np.zeros(k_ues, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] buf = \
        np.empty(2 * n * n + n, dtype=np.complex128)
    cdef double complex* b = <double complex*> buf.data
    cdef double obj = _eval(<double complex*> hc.data, <double*> dwc.data,
                            <double*> pc.data, sigma2, k_ues, n, True,
                            <double*> grad.data,
                            b, b + n * n, b + 2 * n * n, &status)
    if status != 0:
        raise ConsistencyError("accumulated interference matrix is not positive definite")
    return obj, grad


def project_simplex(v, budget):
    """Euclidean projection onto {p >= 0, sum p <= budget}."""
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] vc = \
        np.ascontiguousarray(v, dtype=np.float64)
    cdef int k_ues = vc.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(k_ues, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] work = np.empty(k_ues, dtype=np.float64)
    if k_ues:
        _project_c(<double*> vc.data, <double*> out.data, <double*> work.data,
                   k_ues, budget)
    return out


def kkt_residual(p, grad, budget, eps_act):
    """First-order optimality residual on the budgeted simplex."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] pc = \
        np.ascontiguousarray(p, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] gc = \
        np.ascontiguousarray(grad, dtype=np.float64)
    if pc.shape[0] == 0:
        return 0.0
    return _kkt_c(<double*> pc.data, <double*> gc.data, pc.shape[0], budget, eps_act)


def solve_pga(h, dw, sigma2, budget, tol, kkt_tol, max_iter, armijo, shrink):
    """Projected gradient ascent with Armijo backtracking; see _ref.solve_pga."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] hc = \
        np.ascontiguousarray(h, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] dwc = \
        np.ascontiguousarray(dw, dtype=np.float64)
    cdef int k_ues = hc.shape[0], n = hc.shape[1]
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p_arr = np.zeros(k_ues, dtype=np.float64)
    if budget == 0.0 or k_ues == 0:
        return p_arr, 0.0, 0, 0.0, True

    cdef cnp.ndarray[cnp.float64_t, ndim=1] g_arr = np.empty(k_ues, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] scratch = np.empty(3 * k_ues, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] buf = \
        np.empty(2 * n * n + n, dtype=np.complex128)
    cdef double complex* hd = <double complex*> hc.data
    cdef double* dwd = <double*> dwc.data
    cdef double* p = <double*> p_arr.data
    cdef double* g = <double*> g_arr.data
    cdef double* trial = <double*> scratch.data
    cdef double* cand = trial + k_ues
    cdef double* work = cand + k_ues
    cdef double complex* b = <double complex*> buf.data
    cdef double complex* a = b
    cdef double complex* l = b + n * n
    cdef double complex* y = b + 2 * n * n

    cdef double s2 = sigma2, bud = budget, tol_c = tol, kkt_tol_c = kkt_tol
    cdef double armijo_c = armijo, shrink_c = shrink
    cdef int max_it = max_iter, status = 0
    cdef double eps_act = 1e-9 * bud
    cdef int m, iterations = 0, bt
    cdef double f, f_cand, kkt, t, step, ascent, rel_change
    cdef double curvature, s_norm2, s_m
    cdef bint converged = False, accepted

    for m in range(k_ues):
        p[m] = bud / k_ues
    f = _eval(hd, dwd, p, s2, k_ues, n, True, g, a, l, y, &status)
    if status != 0:
        raise ConsistencyError("accumulated interference matrix is not positive definite")
    kkt = _kkt_c(p, g, k_ues, bud, eps_act)
    if kkt <= kkt_tol_c:
        return p_arr, f, 0, kkt, True
    step = bud
    for iterations in range(1, max_it + 1):
        t = step
        accepted = False
        f_cand = f
        for bt in range(_MAX_BACKTRACK):
            for m in range(k_ues):
                trial[m] = p[m] + t * g[m]
            _project_c(trial, cand, work, k_ues, bud)
            ascent = 0.0
            for m in range(k_ues):
                ascent += g[m] * (cand[m] - p[m])
            if ascent <= 0.0:
                break
            f_cand = _eval(hd, dwd, cand, s2, k_ues, n, False, NULL, a, l, y, &status)
            if status != 0:
                raise ConsistencyError(
                    "accumulated interference matrix is not positive definite")
            if f_cand >= f + armijo_c * ascent:
                accepted = True
                break
            t *= shrink_c
        if not accepted:
            converged = kkt <= kkt_tol_c
            break
        rel_change = fabs(f_cand - f) / max(fabs(f_cand), 1e-300)
        # Stash s = cand - p (reusing the trial buffer) and s . g_old before
        # p and g are overwritten; the BB step needs both.
        s_norm2 = 0.0
        curvature = 0.0
        for m in range(k_ues):
            s_m = cand[m] - p[m]
            trial[m] = s_m
            s_norm2 += s_m * s_m
            curvature += s_m * g[m]
            p[m] = cand[m]
        f = _eval(hd, dwd, p, s2, k_ues, n, True, g, a, l, y, &status)
        if status != 0:
            raise ConsistencyError("accumulated interference matrix is not positive definite")
        kkt = _kkt_c(p, g, k_ues, bud, eps_act)
        if rel_change <= tol_c and kkt <= kkt_tol_c:
            converged = True
            break
        for m in range(k_ues):
            curvature -= trial[m] * g[m]
        if curvature > 0.0:
            step = min(max(s_norm2 / curvature, 1e-30), 1e30)
        else:
            step = min(2.0 * t, bud)
    return p_arr, f, iterations, kkt, converged
