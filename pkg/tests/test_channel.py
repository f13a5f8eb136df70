import math

import numpy as np
import pytest
from conftest import default_channels, default_geometry
from hypothesis import given, settings
from hypothesis import strategies as st

from sagsense.channel import (
    ChannelSet,
    PropagationParams,
    ScenarioGeometry,
    a2g_channel,
    build_channels,
    direction_cosine,
    path_gain,
    s2a_channel,
    sample_aircraft_positions,
    steering_vector,
)
from sagsense.errors import DegenerateGeometry, InvalidInput
from sagsense.harness.config import KM


def single_link_geometry(aircraft, m=4, bs=(0.0, 0.0, 0.0)):
    return ScenarioGeometry(satellite=[0.0, 0.0, 300 * KM], bs=bs, aircraft=[aircraft], tx_antennas=m, rx_antennas=m)


class TestGeometry:
    def test_three_four_five(self):
        assert direction_cosine([0, 0, 0], [3000, 0, 4000]) == (5000.0, 0.6)

    def test_broadside(self):
        _, s = direction_cosine([5, 5, 0], [5, 5, 1000])
        assert s == 0.0

    def test_default_satellite_distance(self):
        d, _ = direction_cosine([-10 * KM, 20 * KM, 300 * KM], [20 * KM, 20 * KM, 10 * KM])
        assert d == pytest.approx(math.hypot(30, 290) * KM, rel=1e-15)
        assert d / KM == pytest.approx(291.548, abs=5e-4)

    def test_coincident_points(self):
        with pytest.raises(DegenerateGeometry):
            direction_cosine([1, 2, 3], [1, 2, 3])

    def test_invalid_scenarios(self):
        with pytest.raises(InvalidInput):
            ScenarioGeometry([0, 0, 1e5], [0, 0, -1], [[0, 0, 1e4]])
        with pytest.raises(InvalidInput):
            ScenarioGeometry([0, 0, 1e5], [0, 0, 0], [[0, 0, 1e4]], target_index=1)
        with pytest.raises(InvalidInput):
            ScenarioGeometry([0, 0, 1e5], [0, 0, 0], [[0, 0, 1e4]], tx_antennas=0)
        with pytest.raises(InvalidInput):
            ScenarioGeometry([0, 0, np.nan], [0, 0, 0], [[0, 0, 1e4]])
        with pytest.raises(DegenerateGeometry):
            ScenarioGeometry([0, 0, 1e5], [0, 0, 0], [[0, 0, 0]])

    def test_invalid_propagation(self):
        with pytest.raises(InvalidInput):
            PropagationParams(alpha_s2a=0)
        with pytest.raises(InvalidInput):
            PropagationParams(beta0_a2g=-1)
        with pytest.raises(InvalidInput):
            PropagationParams(rician_k=-0.5)


class TestS2A:
    def test_zero_phase(self):
        np.testing.assert_allclose(steering_vector(4, 0.0), np.ones(4))

    def test_endfire_alternates(self):
        np.testing.assert_allclose(steering_vector(4, 1.0, 0.5), [1, -1, 1, -1], atol=1e-15)

    def test_magnitude_at_300_km(self):
        geom = ScenarioGeometry([0, 0, 300 * KM], [5 * KM, 0, 0], [[0, 0, 0.0]], tx_antennas=4)
        h = s2a_channel(geom, PropagationParams(), 0)
        expected = math.sqrt(1.0 / (300 * KM) ** 2)
        np.testing.assert_allclose(np.abs(h), expected, rtol=1e-14)
        assert expected == pytest.approx(3.333e-6, abs=5e-10)

    def test_linear_phase_and_common_magnitude(self):
        geom = default_geometry(5)
        h = s2a_channel(geom, PropagationParams(), 2)
        assert np.ptp(np.abs(h)) < 1e-12 * np.abs(h[0])
        step = h[1:] / h[:-1]
        np.testing.assert_allclose(step, step[0], rtol=1e-12)

    @given(d1=st.floats(1.0, 1e7), d2=st.floats(1.0, 1e7), alpha=st.floats(0.5, 5.0))
    def test_path_loss_decreasing(self, d1, d2, alpha):
        lo, hi = sorted((d1, d2))
        assert path_gain(1.0, hi, alpha) <= path_gain(1.0, lo, alpha)


class TestA2G:
    def test_los_only_magnitude(self):
        geom = single_link_geometry([3 * KM, 4 * KM, 10 * KM])
        prop = PropagationParams(rician_k=math.inf)
        h = a2g_channel(geom, prop, 0, np.random.default_rng(0))
        d = math.dist((0, 0, 0), (3 * KM, 4 * KM, 10 * KM))
        np.testing.assert_allclose(np.abs(h), math.sqrt(d**-2.2), rtol=1e-12)

    def test_pure_scatter_power(self):
        geom = single_link_geometry([3 * KM, 4 * KM, 10 * KM], m=4)
        prop = PropagationParams(rician_k=0.0)
        rng = np.random.default_rng(11)
        draws = np.array([a2g_channel(geom, prop, 0, rng) for _ in range(25_000)])  # 10^5 entries
        beta = path_gain(1.0, math.dist((0, 0, 0), geom.aircraft[0]), 2.2)
        assert np.mean(np.abs(draws) ** 2) == pytest.approx(beta, rel=0.02)

    def test_rician_mixture_power(self):
        geom = single_link_geometry([3 * KM, 4 * KM, 10 * KM], m=4)
        rng = np.random.default_rng(12)
        draws = np.array([a2g_channel(geom, PropagationParams(rician_k=10.0), 0, rng) for _ in range(25_000)])
        beta = path_gain(1.0, math.dist((0, 0, 0), geom.aircraft[0]), 2.2)
        assert np.mean(np.abs(draws) ** 2) == pytest.approx(beta, rel=0.02)

    def test_deterministic(self):
        geom = default_geometry(1)
        prop = PropagationParams(rician_k=10.0)
        a = build_channels(geom, prop, 99)
        b = build_channels(geom, prop, 99)
        assert a.h_b.tobytes() == b.h_b.tobytes()
        assert a.h_s.tobytes() == b.h_s.tobytes()
        c = build_channels(geom, prop, 100)
        assert not np.array_equal(a.h_b, c.h_b)

    def test_per_aircraft_streams(self):
        # Aircraft k's fading does not depend on how many aircraft follow it.
        geom4 = default_geometry(1)
        geom2 = ScenarioGeometry(geom4.satellite, geom4.bs, geom4.aircraft[:2])
        prop = PropagationParams()
        np.testing.assert_array_equal(build_channels(geom4, prop, 5).h_b[:2], build_channels(geom2, prop, 5).h_b)


class TestAircraftPositions:
    def test_zero_radius(self):
        pts = sample_aircraft_positions([1.0, 2.0, 3.0], 0.0, 5, np.random.default_rng(0))
        np.testing.assert_array_equal(pts, np.tile([1.0, 2.0, 3.0], (5, 1)))

    def test_mean_radius(self):
        center = np.array([20 * KM, 20 * KM, 10 * KM])
        pts = sample_aircraft_positions(center, 10 * KM, 100_000, np.random.default_rng(3))
        r = np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1])
        assert r.mean() == pytest.approx(2 / 3 * 10 * KM, rel=0.01)
        assert np.all(r <= 10 * KM * (1 + 1e-12))
        assert np.all(pts[:, 2] == 10 * KM)

    def test_invalid(self):
        with pytest.raises(InvalidInput):
            sample_aircraft_positions([0, 0, 0], -1.0, 3, np.random.default_rng(0))
        with pytest.raises(InvalidInput):
            sample_aircraft_positions([0, 0, 0], 1.0, 0, np.random.default_rng(0))


class TestChannelSet:
    def test_scalar_cascade(self):
        ch = ChannelSet(h_s=[[2.0 + 1j]], h_b=[[3.0 - 1j]])
        assert ch.cascaded.shape == (1, 1, 1)
        assert ch.cascaded[0, 0, 0] == (2.0 + 1j) * (3.0 - 1j)

    def test_rank_one_and_frobenius(self):
        ch = default_channels(4)
        for k in range(ch.num_aircraft):
            s = np.linalg.svd(ch.cascaded[k], compute_uv=False)
            assert s[1] <= 1e-12 * s[0]
            fro = np.linalg.norm(ch.cascaded[k])
            assert fro == pytest.approx(np.linalg.norm(ch.h_b[k]) * np.linalg.norm(ch.h_s[k]), rel=1e-12)

    def test_monostatic(self):
        ch = default_channels(4)
        mono = ch.monostatic()
        assert mono.rx_antennas == ch.tx_antennas
        np.testing.assert_allclose(mono.cascaded[1], np.outer(ch.h_s[1], ch.h_s[1]))

    def test_mismatched_counts(self):
        with pytest.raises(InvalidInput):
            ChannelSet(h_s=np.ones((2, 3)), h_b=np.ones((3, 3)))

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), k=st.floats(0.0, 100.0))
    def test_shapes(self, seed, k):
        geom = default_geometry(seed, num_aircraft=3, tx=5, rx=6)
        ch = build_channels(geom, PropagationParams(rician_k=k), seed)
        assert ch.h_s.shape == (3, 5) and ch.h_b.shape == (3, 6) and ch.cascaded.shape == (3, 6, 5)
        assert np.all(np.isfinite(ch.cascaded))
