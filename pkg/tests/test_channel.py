"""Geometry, Rician statistics, and the seeded stream-splitting rule."""

import math

import numpy as np
import pytest

from uavwpt.channel import (
    ChannelRealization,
    Topology,
    draw_channel,
    draw_topology,
    link_distance,
    pathloss_gain,
    topology_rng,
    trial_rng,
)

LINK_50_15 = 52.20153254455275  # sqrt(50^2 + 15^2) via stdlib math
GAIN_50_15 = 5.079159682610416e-05  # LINK_50_15 ** -2.5


def test_link_distance_values():
    assert link_distance(50.0, 0.0) == 50.0
    assert link_distance(3.0, 4.0) == pytest.approx(5.0, rel=1e-15)
    assert link_distance(50.0, 15.0) == pytest.approx(LINK_50_15, rel=1e-15)


def test_link_distance_validation():
    with pytest.raises(ValueError):
        link_distance(0.0, 5.0)
    with pytest.raises(ValueError):
        link_distance(50.0, -1.0)


def test_pathloss_gain_values():
    assert pathloss_gain(1.0, 2.5) == 1.0
    assert pathloss_gain(LINK_50_15, 2.5) == pytest.approx(GAIN_50_15, rel=1e-14)
    assert pathloss_gain(7.3, 0.0) == 1.0
    with pytest.raises(ValueError):
        pathloss_gain(0.0, 2.5)


def test_topology_validation_and_distances():
    topo = Topology(50.0, np.array([0.0, 15.0]), 2.5, 2.0)
    assert topo.n_ues == 2
    assert topo.link_distances[0] == 50.0
    assert topo.link_distances[1] == pytest.approx(LINK_50_15, rel=1e-15)
    with pytest.raises(ValueError):
        Topology(0.0, np.array([10.0]), 2.5, 2.0)
    with pytest.raises(ValueError):
        Topology(50.0, np.array([-1.0]), 2.5, 2.0)
    with pytest.raises(ValueError):
        Topology(50.0, np.array([10.0]), 0.0, 2.0)
    with pytest.raises(ValueError):
        Topology(50.0, np.array([10.0]), 2.5, -0.5)


def test_topology_is_immutable_and_copies():
    src = np.array([10.0, 12.0])
    topo = Topology(50.0, src, 2.5, 2.0)
    src[0] = 99.0
    assert topo.ue_horizontal_distances[0] == 10.0
    with pytest.raises(ValueError):
        topo.ue_horizontal_distances[0] = 1.0


def test_empty_topology_is_valid():
    topo = draw_topology(trial_rng(1), 0, 10.0, 20.0, 50.0, 2.5, 2.0)
    assert topo.n_ues == 0
    assert topo.link_distances.size == 0


def test_draw_topology_degenerate_interval():
    topo = draw_topology(trial_rng(3), 4, 15.0, 15.0, 50.0, 2.5, 2.0)
    assert np.all(topo.ue_horizontal_distances == 15.0)


def test_draw_topology_uniform_mean():
    rng = trial_rng(99)
    topo = draw_topology(rng, 100_000, 10.0, 20.0, 50.0, 2.5, 2.0)
    mean = float(np.mean(topo.ue_horizontal_distances))
    assert abs(mean - 15.0) < 0.15  # 1% of the true mean
    assert np.all(topo.ue_horizontal_distances >= 10.0)
    assert np.all(topo.ue_horizontal_distances <= 20.0)


def test_draw_topology_validates_interval():
    with pytest.raises(ValueError):
        draw_topology(trial_rng(1), 3, -1.0, 20.0, 50.0, 2.5, 2.0)
    with pytest.raises(ValueError):
        draw_topology(trial_rng(1), 3, 21.0, 20.0, 50.0, 2.5, 2.0)


def test_channel_realization_invariants():
    rng = trial_rng(17)
    topo = draw_topology(rng, 4, 10.0, 20.0, 50.0, 2.5, 2.0)
    ch = draw_channel(rng, topo, 3)
    assert ch.h.shape == (4, 3)
    outer = ch.outer_products
    for k in range(4):
        hk = ch.h[k]
        assert np.allclose(outer[k], outer[k].conj().T)  # Hermitian
        eig = np.linalg.eigvalsh(outer[k])
        assert eig.min() >= -1e-12  # PSD
        assert np.sum(eig > 1e-12 * eig.max()) <= 1  # rank one
        assert np.trace(outer[k]).real == pytest.approx(
            float(np.sum(np.abs(hk) ** 2)), rel=1e-12
        )


def test_channel_matrix_read_only():
    ch = ChannelRealization(np.ones((2, 2), dtype=complex))
    with pytest.raises(ValueError):
        ch.h[0, 0] = 0.0


def test_channel_requires_2d():
    with pytest.raises(ValueError):
        ChannelRealization(np.ones(3, dtype=complex))


@pytest.mark.parametrize("kappa", [0.0, 2.0, 50.0])
def test_mean_channel_power(kappa):
    # E||h_k||^2 = N * d^-alpha for every Rician factor
    n_antennas = 3
    topo = Topology(50.0, np.full(2000, 15.0), 2.5, kappa)
    rng = trial_rng(2024, cell=int(kappa))
    total = np.zeros(2000)
    draws = 50
    for _ in range(draws):
        ch = draw_channel(rng, topo, n_antennas)
        total += np.sum(np.abs(ch.h) ** 2, axis=1)
    sample_mean = float(np.mean(total)) / draws
    expect = n_antennas * LINK_50_15**-2.5
    assert sample_mean == pytest.approx(expect, rel=0.02)


def test_los_only_limit():
    # enormous Rician factor: essentially deterministic with power N d^-alpha
    topo = Topology(50.0, np.array([15.0]), 2.5, 1e12)
    ch = draw_channel(trial_rng(5), topo, 4)
    power = float(np.sum(np.abs(ch.h) ** 2))
    assert power == pytest.approx(4 * LINK_50_15**-2.5, rel=1e-4)


def test_identical_seeds_reproduce():
    topo_a = draw_topology(trial_rng(7, 3, 11), 5, 10.0, 20.0, 50.0, 2.5, 2.0)
    topo_b = draw_topology(trial_rng(7, 3, 11), 5, 10.0, 20.0, 50.0, 2.5, 2.0)
    assert np.array_equal(topo_a.ue_horizontal_distances, topo_b.ue_horizontal_distances)
    ch_a = draw_channel(trial_rng(7, 3, 11), topo_a, 3)
    ch_b = draw_channel(trial_rng(7, 3, 11), topo_b, 3)
    assert np.array_equal(ch_a.h, ch_b.h)


def test_distinct_streams_differ():
    topo = Topology(50.0, np.array([15.0, 15.0]), 2.5, 2.0)
    base = draw_channel(trial_rng(7, 0, 0), topo, 3).h
    assert not np.array_equal(base, draw_channel(trial_rng(7, 0, 1), topo, 3).h)
    assert not np.array_equal(base, draw_channel(trial_rng(7, 1, 0), topo, 3).h)
    assert not np.array_equal(base, draw_channel(trial_rng(8, 0, 0), topo, 3).h)
    assert not np.array_equal(base, draw_channel(topology_rng(7), topo, 3).h)


def test_scatter_power_split():
    # variance of the fluctuating part matches 1/(kappa+1) * d^-alpha per antenna
    kappa = 2.0
    topo = Topology(50.0, np.full(5000, 15.0), 2.5, kappa)
    ch = draw_channel(trial_rng(31), topo, 2)
    gain = LINK_50_15**-2.5
    los = math.sqrt(kappa / (kappa + 1.0) * gain)
    fluct = ch.h - los
    var = float(np.mean(np.abs(fluct) ** 2))
    assert var == pytest.approx(gain / (kappa + 1.0), rel=0.05)
