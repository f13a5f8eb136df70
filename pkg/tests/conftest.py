import numpy as np
import pytest

from sagsense.channel import PropagationParams, ScenarioGeometry, build_channels, sample_aircraft_positions
from sagsense.harness.config import KM
from sagsense.sensing import NoiseModel


def default_geometry(seed, num_aircraft=4, tx=8, rx=8):
    rng = np.random.default_rng(seed)
    aircraft = sample_aircraft_positions([20 * KM, 20 * KM, 10 * KM], 10 * KM, num_aircraft, rng)
    return ScenarioGeometry(
        satellite=[-10 * KM, 20 * KM, 300 * KM],
        bs=[0.0, 0.0, 0.0],
        aircraft=aircraft,
        tx_antennas=tx,
        rx_antennas=rx,
    )


def default_channels(seed, num_aircraft=4, tx=8, rx=8, beta0=1e4):
    geom = default_geometry(seed, num_aircraft, tx, rx)
    return build_channels(geom, PropagationParams(beta0_s2a=beta0, beta0_a2g=beta0), seed)


def random_channels(rng, num_aircraft=4, tx=8, rx=8, scale=1e-3):
    """Unstructured complex channels, for checks that must hold for any geometry."""

    def cn(*shape):
        return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)

    from sagsense.channel import ChannelSet

    return ChannelSet(h_s=cn(num_aircraft, tx), h_b=cn(num_aircraft, rx))


@pytest.fixture
def noise():
    return NoiseModel(1e-12)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
