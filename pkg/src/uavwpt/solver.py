"""Downlink power allocation on the budgeted simplex.

Maximizes the weight-decrement throughput form (see uavwpt.rate) over
{p >= 0, sum p <= budget} with projected gradient ascent and Armijo
backtracking.  The hot loop lives in uavwpt._kernels (compiled when
available); this module owns validation, the permute/unpermute bookkeeping
and the report type.

Design notes on the solver itself: the feasible set has a cheap exact
Euclidean projection, the objective is smooth, and it is concave whenever the
weight decrements are all nonnegative (weights sorted descending along the
encoding order), so gradient ascent with a nondecreasing-objective line
search converges to the global maximum in that case.  Defaults: stop when the
relative objective change is <= tol AND the KKT residual is <= kkt_tol;
uniform feasible start; initial step = budget, doubled after each accepted
iteration and capped at budget.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .rate import weight_decrements

_ARMIJO = 1e-4
_SHRINK = 0.5


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one power-allocation solve.

    ``p`` is in original UE order (mW).  ``converged`` is False when the
    iteration limit ran out before both stopping tests held; the best iterate
    is still returned so the caller can decide what to do with it.
    """

    p: np.ndarray
    objective: float
    iterations: int
    kkt_residual: float
    converged: bool


def project_budget_simplex(v, budget: float) -> np.ndarray:
    """Euclidean projection of v onto {p >= 0, sum p <= budget}."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    return np.asarray(_kernels.project_simplex(v, float(budget)), dtype=float)


def kkt_residual(p, grad, budget: float) -> float:
    """First-order optimality residual for the budgeted-simplex maximization.

    With mu = max_m grad_m: the active-coordinate gradient spread
    max_{p_m > eps} |grad_m - mu| / mu and the budget slack
    |sum p - budget| / max(budget, eps) are combined by max (eps = 1e-9 *
    budget).  Zero at an exact optimum when every weight is positive.  A
    zero budget (empty feasible set apart from p = 0) is trivially optimal.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    grad = np.atleast_1d(np.asarray(grad, dtype=float))
    if p.shape != grad.shape:
        raise ValueError("p and grad must have the same length")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if budget == 0.0 or p.size == 0:
        return 0.0
    return float(_kernels.kkt_residual(p, grad, float(budget), 1e-9 * float(budget)))


def solve_power_allocation(
    channels,
    weights,
    perm,
    sigma2: float,
    budget: float,
    tol: float = 1e-8,
    kkt_tol: float = 1e-6,
    max_iter: int = 10_000,
) -> SolveReport:
    """Maximize the weighted DPC throughput over the power budget.

    ``perm`` is the encoding order; the returned allocation is in original
    UE order.  Global optimality is guaranteed when the weights are sorted
    descending along ``perm`` (nonnegative decrements, concave objective);
    other orders are accepted so exhaustive-enumeration checks can reuse
    this routine, and then the result is only a stationary point.
    """
    w = np.asarray(weights, dtype=float)
    perm = np.asarray(perm, dtype=np.intp)
    k_ues = channels.n_ues
    if w.shape != (k_ues,):
        raise ValueError("weights must be a length-K vector")
    if sorted(perm.tolist()) != list(range(k_ues)):
        raise ValueError(f"perm must be a permutation of 0..{k_ues - 1}")
    if np.any(w < 0):
        raise ValueError("throughput weights must be nonnegative")
    if not sigma2 > 0:
        raise ValueError("noise power must be positive")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if not np.isfinite(budget):
        raise ValueError("budget must be finite")

    hp = np.ascontiguousarray(channels.h[perm])
    dw = weight_decrements(w, perm)
    q, objective, iterations, kkt, converged = _kernels.solve_pga(
        hp,
        dw,
        float(sigma2),
        float(budget),
        float(tol),
        float(kkt_tol),
        int(max_iter),
        _ARMIJO,
        _SHRINK,
    )
    p = np.zeros(k_ues)
    p[perm] = q
    return SolveReport(
        p=p,
        objective=float(objective),
        iterations=int(iterations),
        kkt_residual=float(kkt),
        converged=bool(converged),
    )
