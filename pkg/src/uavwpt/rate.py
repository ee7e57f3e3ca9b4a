"""Weighted downlink throughput under dirty-paper coding, and its dual form.

For an encoding permutation ``perm`` (perm[k] is the UE encoded k-th) and
downlink powers p (mW, original UE order), define the accumulated matrices

    A_k = I + sum_{n<=k} (p[perm[n]] / sigma2) * h_perm[n] h_perm[n]^H .

The direct form weights the per-user log-det increments,

    value = sum_k w[perm[k]] * (logdet A_k - logdet A_{k-1}),

and summation by parts turns it into the weight-decrement form

    value = sum_k (w[perm[k]] - w[perm[k+1]]) * logdet A_k,   w[perm[K+1]] := 0,

an identity that holds for every permutation and every p >= 0.  When the
permutation sorts the weights in descending order every decrement is
nonnegative, making the second form a concave function of p; that is the
objective the power-allocation solver maximizes.

Rates are in nats.  Determinants are evaluated through Cholesky factors of
the explicitly accumulated A_k.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError


@dataclass(frozen=True)
class WeightedRate:
    """Weighted throughput (nats) plus the per-UE rate increments.

    ``per_user[j]`` is the rate of UE j in original index order, so
    ``value == weights @ per_user`` up to rounding.
    """

    value: float
    per_user: np.ndarray


def optimal_permutation(weights) -> np.ndarray:
    """Encoding order that sorts weights descending, ties by ascending index.

    Encoding the heaviest-weighted UE first maximizes the weighted DPC
    throughput over all K! orders (see the enumeration oracle).
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise ValueError("throughput weights must be nonnegative")
    return np.argsort(-w, kind="stable")


def _check_inputs(p, channels, weights, perm, sigma2):
    p = np.asarray(p, dtype=float)
    w = np.asarray(weights, dtype=float)
    perm = np.asarray(perm, dtype=np.intp)
    k_ues = channels.n_ues
    if p.shape != (k_ues,) or w.shape != (k_ues,):
        raise ValueError("powers and weights must be length-K vectors")
    if sorted(perm.tolist()) != list(range(k_ues)):
        raise ValueError(f"perm must be a permutation of 0..{k_ues - 1}")
    if np.any(p < 0):
        raise ValueError("downlink powers must be nonnegative")
    if not sigma2 > 0:
        raise ValueError("noise power must be positive")
    return p, w, perm


def _cholesky(a: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise ConsistencyError(
            "accumulated interference matrix is not positive definite"
        ) from exc


def _logdet_sequence(p, channels, perm, sigma2) -> np.ndarray:
    """logdet(A_k) for k = 1..K along the given encoding order."""
    n = channels.n_antennas
    acc = np.eye(n, dtype=complex)
    out = np.empty(len(perm))
    for k, ue in enumerate(perm):
        hk = channels.h[ue]
        acc = acc + (p[ue] / sigma2) * np.outer(hk, hk.conj())
        diag = np.diagonal(_cholesky(acc)).real
        out[k] = 2.0 * float(np.sum(np.log(diag)))
    return out


def dpc_weighted_rate(p, channels, weights, perm, sigma2: float) -> WeightedRate:
    """Weighted DPC throughput, direct per-user form."""
    p, w, perm = _check_inputs(p, channels, weights, perm, sigma2)
    logdets = _logdet_sequence(p, channels, perm, sigma2)
    increments = np.diff(logdets, prepend=0.0)
    per_user = np.empty_like(increments)
    per_user[perm] = increments
    return WeightedRate(float(w[perm] @ increments), per_user)


def dual_weighted_rate(p, channels, weights, perm, sigma2: float) -> WeightedRate:
    """Weighted DPC throughput via the weight-decrement (dual uplink) form."""
    p, w, perm = _check_inputs(p, channels, weights, perm, sigma2)
    logdets = _logdet_sequence(p, channels, perm, sigma2)
    dw = weight_decrements(w, perm)
    increments = np.diff(logdets, prepend=0.0)
    per_user = np.empty_like(increments)
    per_user[perm] = increments
    return WeightedRate(float(dw @ logdets), per_user)


def weight_decrements(weights, perm) -> np.ndarray:
    """dw_k = w[perm[k]] - w[perm[k+1]], with w past the last position = 0."""
    wp = np.asarray(weights, dtype=float)[np.asarray(perm, dtype=np.intp)]
    dw = np.empty_like(wp)
    dw[:-1] = wp[:-1] - wp[1:]
    if wp.size:
        dw[-1] = wp[-1]
    return dw


def objective_gradient(p, channels, weights, perm, sigma2: float) -> np.ndarray:
    """Gradient of the weight-decrement form w.r.t. the powers, permuted order.

    Component m is d(value)/d p[perm[m]]:

        (1/sigma2) * sum_{k>=m} dw_k * h_perm[m]^H A_k^{-1} h_perm[m],

    strictly positive whenever the smallest weight is positive.  The inner
    quadratic forms are evaluated as squared norms of triangular solves
    against the Cholesky factor of each A_k.
    """
    p, w, perm = _check_inputs(p, channels, weights, perm, sigma2)
    k_ues = len(perm)
    n = channels.n_antennas
    dw = weight_decrements(w, perm)
    hp = channels.h[perm]
    grad = np.zeros(k_ues)
    acc = np.eye(n, dtype=complex)
    for k in range(k_ues):
        hk = hp[k]
        acc = acc + (p[perm[k]] / sigma2) * np.outer(hk, hk.conj())
        if dw[k] == 0.0:
            continue
        chol = _cholesky(acc)
        # h^H A^{-1} h = ||L^{-1} h||^2 for A = L L^H
        sol = np.linalg.solve(chol, hp[: k + 1].T)
        grad[: k + 1] += dw[k] * np.sum(np.abs(sol) ** 2, axis=0) / sigma2
    return grad
