"""Uplink energy beamforming: maximal ratio transmission at the UEs.

A beamformer set is a (K, N) complex array, one transmit vector per UE, in
sqrt(mW) amplitude units; feasibility means ||w_k||^2 <= p_max_k.  MRT aligns
each vector with its channel at full power, which maximizes the RF power
delivered to the single-antenna harvester (Cauchy-Schwarz), and the harvester
output is monotone in that input, so no other uplink design is needed.
"""

import numpy as np


class ZeroChannelError(ValueError):
    """MRT direction is undefined for an all-zero channel vector."""


def mrt(h: np.ndarray, p_max: float) -> np.ndarray:
    """Maximal-ratio transmit vector sqrt(p_max) * h / ||h||."""
    if p_max < 0:
        raise ValueError("power cap must be nonnegative")
    h = np.asarray(h, dtype=complex)
    norm = np.linalg.norm(h)
    if norm == 0:
        raise ZeroChannelError("cannot form an MRT beam on a zero channel vector")
    return np.sqrt(p_max) * h / norm


def mrt_set(channels, p_max) -> np.ndarray:
    """Full-power MRT beamformers for every UE, shape (K, N).

    A UE whose channel vector is exactly zero (impossible under the fading
    model, reachable in synthetic tests) gets a zero beam instead of an error.
    """
    caps = np.broadcast_to(np.asarray(p_max, dtype=float), (channels.n_ues,))
    beams = np.zeros_like(channels.h)
    for k in range(channels.n_ues):
        try:
            beams[k] = mrt(channels.h[k], caps[k])
        except ZeroChannelError:
            pass
    return beams


def input_power(channels, beams: np.ndarray) -> float:
    """Total RF power sum_k |h_k^H w_k|^2 (mW) arriving at the harvester."""
    w = np.asarray(beams, dtype=complex)
    if w.shape != channels.h.shape:
        raise ValueError(
            f"beamformer set shape {w.shape} does not match channels {channels.h.shape}"
        )
    inner = np.einsum("kn,kn->k", channels.h.conj(), w)
    return float(np.sum(np.abs(inner) ** 2))
