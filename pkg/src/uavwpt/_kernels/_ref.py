"""Pure-NumPy kernels: reference implementation of the solver hot path.

These functions mirror uavwpt._kernels._fast exactly; the compiled module is
preferred at import time and this one is the fallback.  Everything works in
*permuted* coordinates on raw arrays: ``h`` is the (K, N) channel matrix with
rows ordered by the encoding permutation and ``dw`` the nonincreasing-weight
decrements, so the objective is sum_k dw[k] * logdet(A_k).
"""

import numpy as np

from ..errors import ConsistencyError

BACKEND = "python"

_MAX_BACKTRACK = 60  # 0.5**60 is far below any meaningful step


def _cholesky(acc):
    try:
        return np.linalg.cholesky(acc)
    except np.linalg.LinAlgError as exc:
        raise ConsistencyError(
            "accumulated interference matrix is not positive definite"
        ) from exc


def dual_objective(h, dw, p, sigma2):
    """sum_k dw[k] * logdet(I + sum_{n<=k} (p[n]/sigma2) h_n h_n^H)."""
    k_ues, n = h.shape
    acc = np.eye(n, dtype=complex)
    obj = 0.0
    for k in range(k_ues):
        acc = acc + (p[k] / sigma2) * np.outer(h[k], h[k].conj())
        diag = np.diagonal(_cholesky(acc)).real
        obj += dw[k] * 2.0 * float(np.sum(np.log(diag)))
    return obj


def dual_objective_grad(h, dw, p, sigma2):
    """Objective and its gradient w.r.t. p (both in permuted order)."""
    k_ues, n = h.shape
    acc = np.eye(n, dtype=complex)
    obj = 0.0
    grad = np.zeros(k_ues)
    for k in range(k_ues):
        acc = acc + (p[k] / sigma2) * np.outer(h[k], h[k].conj())
        chol = _cholesky(acc)
        diag = np.diagonal(chol).real
        obj += dw[k] * 2.0 * float(np.sum(np.log(diag)))
        if dw[k] != 0.0:
            # d logdet(A_k)/d p[m] = h_m^H A_k^{-1} h_m / sigma2 = ||L^{-1} h_m||^2 / sigma2
            sol = np.linalg.solve(chol, h[: k + 1].T)
            grad[: k + 1] += dw[k] * np.sum(np.abs(sol) ** 2, axis=0) / sigma2
    return obj, grad


def project_simplex(v, budget):
    """Euclidean projection onto {p >= 0, sum p <= budget}.

    Inside the budget it is plain clipping; otherwise the classic
    sort-and-threshold projection onto {p >= 0, sum p = budget}.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    v = np.asarray(v, dtype=float)
    clipped = np.maximum(v, 0.0)
    if float(np.sum(clipped)) <= budget:
        return clipped
    if budget == 0.0:
        return np.zeros_like(v)
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u)
    counts = np.arange(1, v.size + 1, dtype=float)
    support = np.nonzero(u - (cumulative - budget) / counts > 0.0)[0]
    rho = support[-1]
    theta = (cumulative[rho] - budget) / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def kkt_residual(p, grad, budget, eps_act):
    """First-order optimality residual on the budgeted simplex (see solver)."""
    mu = float(np.max(grad))
    active = p > eps_act
    if mu > 0.0:
        r_grad = float(np.max(np.abs(grad[active] - mu))) / mu if np.any(active) else 0.0
        r_budget = abs(float(np.sum(p)) - budget) / max(budget, eps_act)
        return max(r_grad, r_budget)
    if not np.any(active):
        return 0.0
    return float(np.max(np.abs(grad[active]))) / max(1.0, abs(mu))


def solve_pga(h, dw, sigma2, budget, tol, kkt_tol, max_iter, armijo, shrink):
    """Projected gradient ascent with Armijo backtracking.

    Returns (p, objective, iterations, kkt_residual, converged).  Every
    iterate is feasible and the objective never decreases across accepted
    steps.  The trial step is budget on the first iteration and the
    Barzilai-Borwein spectral step afterwards (clipped to [1e-30, 1e30]);
    when the curvature estimate is unusable it falls back to doubling the
    last accepted step.  Deterministic: fixed uniform start, no randomness.
    """
    k_ues = dw.shape[0]
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if budget == 0.0 or k_ues == 0:
        return np.zeros(k_ues), 0.0, 0, 0.0, True
    eps_act = 1e-9 * budget
    p = np.full(k_ues, budget / k_ues)
    f, g = dual_objective_grad(h, dw, p, sigma2)
    kkt = kkt_residual(p, g, budget, eps_act)
    if kkt <= kkt_tol:
        return p, f, 0, kkt, True
    step = budget
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        t = step
        accepted = False
        cand = p
        f_cand = f
        for _ in range(_MAX_BACKTRACK):
            cand = project_simplex(p + t * g, budget)
            ascent = float(g @ (cand - p))
            if ascent <= 0.0:
                break
            f_cand = dual_objective(h, dw, cand, sigma2)
            if f_cand >= f + armijo * ascent:
                accepted = True
                break
            t *= shrink
        if not accepted:
            # No ascent left at any step length: numerically stationary.
            converged = kkt <= kkt_tol
            break
        rel_change = abs(f_cand - f) / max(abs(f_cand), 1e-300)
        s = cand - p
        g_prev = g
        p = cand
        f, g = dual_objective_grad(h, dw, p, sigma2)
        kkt = kkt_residual(p, g, budget, eps_act)
        if rel_change <= tol and kkt <= kkt_tol:
            converged = True
            break
        curvature = float(s @ g_prev) - float(s @ g)
        if curvature > 0.0:
            step = min(max(float(s @ s) / curvature, 1e-30), 1e30)
        else:
            step = min(2.0 * t, budget)
    return p, f, iterations, kkt, converged
