"""Brute-force ground-truth references.

Everything here exists to check the analytic path from the outside: the
lattice search evaluates the same weight-decrement objective as the solver
but through batched LU-based slogdet instead of accumulated Cholesky
factors, and the permutation search simply tries all K! encoding orders.
Scale guards are hard errors so a stray call can't melt CI.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .rate import dpc_weighted_rate, weight_decrements
from .solver import solve_power_allocation

_GRID_MAX_UES = 3
_ENUM_MAX_UES = 5
_CHUNK = 20_000


@dataclass(frozen=True)
class GridSpec:
    """Lattice over the budgeted simplex: resolution points per axis."""

    resolution: int
    budget: float

    def __post_init__(self):
        if self.resolution < 2:
            raise ValueError("grid resolution must be at least 2")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")


def _lattice_points(n_ues: int, resolution: int) -> np.ndarray:
    """Integer lattice {i : 0 <= i_k, sum i_k <= resolution-1}, lex order."""
    steps = np.indices((resolution,) * n_ues).reshape(n_ues, -1).T
    keep = steps.sum(axis=1) <= resolution - 1
    return steps[keep]


def grid_search(channels, weights, perm, sigma2, grid: GridSpec):
    """Exhaustive lattice maximization of the weighted DPC throughput.

    Returns (best allocation in original UE order, best objective).  Ties go
    to the lexicographically smallest allocation.  Deliberately evaluated
    through np.linalg.slogdet on batches of lattice points rather than the
    solver's incremental Cholesky route, so the two implementations share no
    numerics.
    """
    k_ues = channels.n_ues
    if k_ues > _GRID_MAX_UES:
        raise ValueError(
            f"grid_search supports at most {_GRID_MAX_UES} UEs, got {k_ues}"
        )
    w = np.asarray(weights, dtype=float)
    perm = np.asarray(perm, dtype=np.intp)
    dw = weight_decrements(w, perm)
    hp = channels.h[perm]
    outer = np.einsum("ki,kj->kij", hp, hp.conj())
    n = channels.n_antennas

    delta = grid.budget / (grid.resolution - 1)
    steps = _lattice_points(k_ues, grid.resolution)

    best_obj = -np.inf
    best_p = None
    eye = np.eye(n, dtype=complex)
    for start in range(0, steps.shape[0], _CHUNK):
        block = steps[start : start + _CHUNK]
        p_block = block * delta  # original UE order
        q_block = p_block[:, perm]  # encoding order
        acc = np.broadcast_to(eye, (block.shape[0], n, n)).copy()
        obj = np.zeros(block.shape[0])
        for k in range(k_ues):
            acc += (q_block[:, k] / sigma2)[:, None, None] * outer[k]
            sign, logdet = np.linalg.slogdet(acc)
            if not np.all(sign.real > 0):
                raise RuntimeError("lattice point produced a non-PD matrix")
            obj += dw[k] * logdet
        idx = int(np.argmax(obj))
        if obj[idx] > best_obj:
            best_obj = float(obj[idx])
            best_p = p_block[idx].astype(float)
    return best_p, best_obj


def best_permutation_exhaustive(channels, weights, sigma2, budget):
    """Try every encoding order; return (best permutation, best objective).

    Each candidate order gets its own power-allocation solve, and the
    achieved value is re-scored through the direct per-user throughput form.
    Exact score ties keep the lexicographically smallest permutation; scores
    that differ only in rounding noise (equal weights, say) keep whichever
    candidate is numerically largest.  The point of this oracle is that
    sorting the weights descending should always win.
    """
    k_ues = channels.n_ues
    if k_ues > _ENUM_MAX_UES:
        raise ValueError(
            f"best_permutation_exhaustive supports at most {_ENUM_MAX_UES} UEs, "
            f"got {k_ues}"
        )
    best_perm = None
    best_obj = -np.inf
    for candidate in itertools.permutations(range(k_ues)):
        perm = np.array(candidate, dtype=np.intp)
        report = solve_power_allocation(channels, weights, perm, sigma2, budget)
        value = dpc_weighted_rate(report.p, channels, weights, perm, sigma2).value
        if value > best_obj:
            best_obj = float(value)
            best_perm = perm
    return best_perm, best_obj


def random_feasible_allocations(rng, budget, count, n_ues):
    """Uniform samples from the solid simplex {p >= 0, sum p <= budget}.

    Rows of the returned (count, n_ues) array are allocations.  Sampling
    draws a flat Dirichlet over n_ues + 1 coordinates and drops the last, so
    the total sum(p) follows budget * Beta(n_ues, 1); its mean is
    budget * n_ues / (n_ues + 1), which the tests pin down.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if count < 0:
        raise ValueError("count must be nonnegative")
    if n_ues < 1:
        raise ValueError("need at least one UE")
    full = rng.dirichlet(np.ones(n_ues + 1), size=count)
    return full[:, :n_ues] * budget
