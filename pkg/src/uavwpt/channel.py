"""Rician fading channels for the UAV-to-UE links, with seeded randomness.

Geometry: the aerial base station hovers at a fixed height above the center
of a disc; UEs sit on the ground at uniformly drawn horizontal distances.
Pathloss uses the 3D link distance.  Each UE's channel vector combines a
deterministic line-of-sight component (all-ones phase profile) and an i.i.d.
circularly-symmetric Gaussian scattered component, split so the total mean
power is N * d^-alpha regardless of the Rician factor.

Random streams
--------------
All draws go through an explicit ``numpy.random.Generator``; there is no
hidden global state.  Monte-Carlo code derives one PCG64 stream per
(cell, trial) pair via :func:`trial_rng`, so trials are reproducible and
order-independent.
"""

from dataclasses import dataclass

import numpy as np

# Spawn key reserved for the frozen-topology stream; cell indices are tiny,
# so this never collides with a (cell, trial) key.
_TOPOLOGY_STREAM_KEY = (0xFFFFFFFF, 0xFFFFFFFF)


def trial_rng(seed: int, cell: int = 0, trial: int = 0) -> np.random.Generator:
    """Independent PCG64 stream for one Monte-Carlo trial.

    Streams are derived as ``SeedSequence(seed, spawn_key=(cell, trial))``,
    numpy's documented mechanism for reproducible parallel streams: distinct
    (cell, trial) pairs give statistically independent generators, and the
    same triple always reproduces the same draws.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(cell, trial))
    return np.random.Generator(np.random.PCG64(ss))


def topology_rng(seed: int) -> np.random.Generator:
    """Dedicated stream for a topology frozen across trials."""
    ss = np.random.SeedSequence(seed, spawn_key=_TOPOLOGY_STREAM_KEY)
    return np.random.Generator(np.random.PCG64(ss))


def link_distance(height: float, horizontal: float) -> float:
    """3D distance (m) between the hovering base station and a ground UE."""
    if height <= 0:
        raise ValueError("height must be positive")
    if horizontal < 0:
        raise ValueError("horizontal distance must be nonnegative")
    return float(np.hypot(height, horizontal))


def pathloss_gain(d: float, alpha: float) -> float:
    """Linear power gain d^-alpha of a link of length d meters."""
    if d <= 0:
        raise ValueError("link distance must be positive")
    return float(d**-alpha)


@dataclass(frozen=True)
class Topology:
    """Placement of the UEs relative to the hovering base station."""

    uav_height: float                      # m
    ue_horizontal_distances: np.ndarray    # (K,) m
    pathloss_exponent: float
    rician_kappa: float

    def __post_init__(self):
        r = np.array(self.ue_horizontal_distances, dtype=float, copy=True)
        r.flags.writeable = False
        object.__setattr__(self, "ue_horizontal_distances", r)
        if self.uav_height <= 0:
            raise ValueError("uav_height must be positive")
        if np.any(r < 0):
            raise ValueError("horizontal distances must be nonnegative")
        if self.pathloss_exponent <= 0:
            raise ValueError("pathloss exponent must be positive")
        if self.rician_kappa < 0:
            raise ValueError("Rician factor must be nonnegative")

    @property
    def n_ues(self) -> int:
        return self.ue_horizontal_distances.size

    @property
    def link_distances(self) -> np.ndarray:
        """3D UAV-to-UE distances (m)."""
        return np.hypot(self.uav_height, self.ue_horizontal_distances)


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the K channel vectors, shape (K, N) complex.

    Entries carry sqrt(mW)-normalized amplitudes: ||h_k||^2 is the linear
    power gain seen across the N antennas of UE k.  Uplink and downlink use
    the same realization (TDD reciprocity); sensitivity studies draw a second
    realization for the downlink instead.
    """

    h: np.ndarray

    def __post_init__(self):
        h = np.array(self.h, dtype=complex, copy=True, order="C")
        if h.ndim != 2:
            raise ValueError(f"channel matrix must be (K, N), got shape {h.shape}")
        h.flags.writeable = False
        object.__setattr__(self, "h", h)

    @property
    def n_ues(self) -> int:
        return self.h.shape[0]

    @property
    def n_antennas(self) -> int:
        return self.h.shape[1]

    @property
    def outer_products(self) -> np.ndarray:
        """Rank-one Hermitian PSD matrices h_k h_k^H, shape (K, N, N)."""
        return np.einsum("ki,kj->kij", self.h, self.h.conj())


def draw_topology(
    rng: np.random.Generator,
    n_ues: int,
    r_min: float,
    r_max: float,
    height: float,
    alpha: float,
    kappa: float,
) -> Topology:
    """Draw UE horizontal distances i.i.d. uniform on [r_min, r_max]."""
    if not 0 <= r_min <= r_max:
        raise ValueError(f"need 0 <= r_min <= r_max, got [{r_min}, {r_max}]")
    distances = rng.uniform(r_min, r_max, size=n_ues)
    return Topology(height, distances, alpha, kappa)


def draw_channel(
    rng: np.random.Generator,
    topology: Topology,
    n_antennas: int,
) -> ChannelRealization:
    """Draw one Rician channel realization for every UE.

    h_k = d_k^(-alpha/2) * ( sqrt(kappa/(kappa+1)) * 1 + sqrt(1/(kappa+1)) * g_k )

    with g_k standard circularly-symmetric complex Gaussian, so the LoS and
    scattered powers per antenna are kappa/(kappa+1)*d^-alpha and
    1/(kappa+1)*d^-alpha.
    """
    if n_antennas < 1:
        raise ValueError("need at least one antenna")
    k_ues = topology.n_ues
    kappa = topology.rician_kappa
    amp = topology.link_distances ** (-topology.pathloss_exponent / 2.0)
    re = rng.standard_normal((k_ues, n_antennas))
    im = rng.standard_normal((k_ues, n_antennas))
    scatter = (re + 1j * im) / np.sqrt(2.0)
    los = np.ones((k_ues, n_antennas))
    h = amp[:, None] * (
        np.sqrt(kappa / (kappa + 1.0)) * los + np.sqrt(1.0 / (kappa + 1.0)) * scatter
    )
    return ChannelRealization(h)
