import numpy as np
import pytest

from rsma import ChannelMatrix, DownlinkDesign, sample_rayleigh
from rsma.rng import generator


def random_channel(seed, n_tx=2, n_users=2, noise_var=1.0) -> ChannelMatrix:
    return sample_rayleigh(n_tx, n_users, noise_var, seed)


def random_design(channel, power_budget, seed, common_power=True) -> DownlinkDesign:
    """A random feasible design using the full budget, zero shares."""
    rng = generator(seed)
    M, K = channel.n_tx, channel.n_users
    p_c = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    if not common_power:
        p_c = np.zeros(M, dtype=complex)
    p_priv = rng.standard_normal((K, M)) + 1j * rng.standard_normal((K, M))
    total = np.sum(np.abs(p_c) ** 2) + np.sum(np.abs(p_priv) ** 2)
    scale = np.sqrt(power_budget / total)
    return DownlinkDesign(p_c * scale, p_priv * scale, np.zeros(K), power_budget)


@pytest.fixture
def orthogonal_2x2():
    from rsma import deterministic_channel

    return deterministic_channel([[1.0, 0.0], [0.0, 1.0]], 1.0)


@pytest.fixture
def aligned_2x2():
    from rsma import deterministic_channel

    return deterministic_channel([[1.0, 0.0], [1.0, 0.0]], 1.0)


@pytest.fixture
def siso_mac():
    from rsma import deterministic_channel

    return deterministic_channel([[1.0], [1.0]], 1.0)
