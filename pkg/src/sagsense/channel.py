"""Satellite-to-aircraft and aircraft-to-ground channel synthesis.

Both antenna arrays are uniform linear arrays laid along the global x-axis,
so the angle that enters a steering vector is the direction cosine of the
link along x. Positions are in meters.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import seeding
from .errors import DegenerateGeometry, InvalidInput


def _position(p, name):
    p = np.asarray(p, dtype=float)
    if p.shape != (3,) or not np.all(np.isfinite(p)):
        raise InvalidInput(f"{name} must be a finite 3-vector, got {p!r}")
    return p


@dataclass
class ScenarioGeometry:
    """Node positions (meters) and array sizes for one channel realization."""

    satellite: np.ndarray
    bs: np.ndarray
    aircraft: np.ndarray  # (K, 3)
    target_index: int = 0
    tx_antennas: int = 8
    rx_antennas: int = 8
    spacing_ratio: float = 0.5  # d / wavelength

    def __post_init__(self):
        self.satellite = _position(self.satellite, "satellite")
        self.bs = _position(self.bs, "bs")
        self.aircraft = np.atleast_2d(np.asarray(self.aircraft, dtype=float))
        if self.aircraft.ndim != 2 or self.aircraft.shape[1] != 3 or len(self.aircraft) < 1:
            raise InvalidInput(f"aircraft must have shape (K, 3), got {self.aircraft.shape}")
        if not np.all(np.isfinite(self.aircraft)):
            raise InvalidInput("aircraft positions must be finite")
        if self.bs[2] < 0 or np.any(self.aircraft[:, 2] < 0):
            raise InvalidInput("ground and air nodes need z >= 0")
        if not 0 <= self.target_index < len(self.aircraft):
            raise InvalidInput(f"target_index {self.target_index} out of range for K={len(self.aircraft)}")
        if self.tx_antennas < 1 or self.rx_antennas < 1:
            raise InvalidInput("antenna counts must be >= 1")
        if self.spacing_ratio <= 0:
            raise InvalidInput("spacing_ratio must be positive")
        for k, p in enumerate(self.aircraft):
            if np.array_equal(p, self.satellite) or np.array_equal(p, self.bs):
                raise DegenerateGeometry(f"aircraft {k} coincides with satellite or BS")

    @property
    def num_aircraft(self):
        return len(self.aircraft)


@dataclass(frozen=True)
class PropagationParams:
    """Large-scale path-loss and Rician parameters.

    ``rician_k = math.inf`` selects a pure line-of-sight A2G channel.
    """

    beta0_s2a: float = 1.0
    alpha_s2a: float = 2.0
    beta0_a2g: float = 1.0
    alpha_a2g: float = 2.2
    rician_k: float = 10.0
    reference_distance: float = 1.0

    def __post_init__(self):
        if min(self.beta0_s2a, self.beta0_a2g) <= 0:
            raise InvalidInput("reference gains must be positive")
        if min(self.alpha_s2a, self.alpha_a2g) <= 0:
            raise InvalidInput("path-loss exponents must be positive")
        if not self.rician_k >= 0:
            raise InvalidInput("rician_k must be >= 0")
        if self.reference_distance <= 0:
            raise InvalidInput("reference_distance must be positive")

    @property
    def los_only(self):
        return math.isinf(self.rician_k)


@dataclass
class ChannelSet:
    """Per-aircraft links and their rank-one cascades.

    Attributes
    ----------
    h_s : ndarray, shape (K, M_t)
        Row ``k`` is the satellite-to-aircraft row vector.
    h_b : ndarray, shape (K, M_r)
        Row ``k`` holds the aircraft-to-receiver column vector.
    cascaded : ndarray, shape (K, M_r, M_t)
        ``cascaded[k] = outer(h_b[k], h_s[k])``.
    """

    h_s: np.ndarray
    h_b: np.ndarray
    cascaded: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.h_s = np.atleast_2d(np.asarray(self.h_s, dtype=complex))
        self.h_b = np.atleast_2d(np.asarray(self.h_b, dtype=complex))
        if self.h_s.shape[0] != self.h_b.shape[0]:
            raise InvalidInput("h_s and h_b must hold the same number of aircraft")
        self.cascaded = self.h_b[:, :, None] * self.h_s[:, None, :]

    @property
    def num_aircraft(self):
        return self.h_s.shape[0]

    @property
    def tx_antennas(self):
        return self.h_s.shape[1]

    @property
    def rx_antennas(self):
        return self.h_b.shape[1]

    def monostatic(self):
        """Round-trip channels for a satellite that also receives its own echo.

        The receive array is the transmit array, so the return link is
        ``h_s[k]^T`` and both hops carry the satellite path loss.
        """
        return ChannelSet(h_s=self.h_s, h_b=self.h_s)


def direction_cosine(source, dest):
    """Distance and direction cosine along x from ``source`` to ``dest``.

    >>> direction_cosine([0, 0, 0], [3000, 0, 4000])
    (5000.0, 0.6)
    """
    source = _position(source, "source")
    dest = _position(dest, "dest")
    delta = dest - source
    distance = float(np.linalg.norm(delta))
    if distance == 0.0:
        raise DegenerateGeometry(f"coincident points {source.tolist()}")
    return distance, float(delta[0] / distance)


def steering_vector(m, sin_theta, spacing_ratio=0.5):
    """ULA response ``exp(-j (n-1) 2 pi (d/lambda) sin(theta))``, n = 1..m."""
    return np.exp(-2j * np.pi * spacing_ratio * sin_theta * np.arange(m))


def path_gain(beta0, distance, alpha, reference_distance=1.0):
    return beta0 * (distance / reference_distance) ** (-alpha)


def s2a_channel(geom, prop, k):
    """Deterministic satellite-to-aircraft row vector (length M_t)."""
    distance, sin_theta = direction_cosine(geom.satellite, geom.aircraft[k])
    gain = path_gain(prop.beta0_s2a, distance, prop.alpha_s2a, prop.reference_distance)
    return np.sqrt(gain) * steering_vector(geom.tx_antennas, sin_theta, geom.spacing_ratio)


def a2g_channel(geom, prop, k, rng):
    """Rician aircraft-to-ground column vector (length M_r).

    The line-of-sight part is the BS array response towards aircraft ``k``;
    the scattered part is CN(0, I). Pure line of sight draws nothing from
    ``rng``.
    """
    distance, sin_theta = direction_cosine(geom.bs, geom.aircraft[k])
    gain = path_gain(prop.beta0_a2g, distance, prop.alpha_a2g, prop.reference_distance)
    m = geom.rx_antennas
    los = steering_vector(m, sin_theta, geom.spacing_ratio)
    if prop.los_only:
        return np.sqrt(gain) * los
    kf = prop.rician_k
    nlos = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2.0)
    return np.sqrt(gain) * (los * np.sqrt(kf / (kf + 1.0)) + nlos * np.sqrt(1.0 / (kf + 1.0)))


def sample_aircraft_positions(center, radius, count, rng):
    """``count`` points uniform (by area) on a horizontal disc around ``center``."""
    center = _position(center, "center")
    if radius < 0:
        raise InvalidInput("radius must be >= 0")
    if count < 1:
        raise InvalidInput("count must be >= 1")
    r = radius * np.sqrt(rng.random(count))
    phi = 2.0 * np.pi * rng.random(count)
    pts = np.tile(center, (count, 1))
    pts[:, 0] += r * np.cos(phi)
    pts[:, 1] += r * np.sin(phi)
    return pts


def build_channels(geom, prop, rng):
    """Assemble the channel set for a geometry.

    ``rng`` is either an integer seed, in which case aircraft ``k`` draws its
    fading from its own stream ``(seed, A2G_FADING, k)``, or a
    ``numpy.random.Generator`` consumed in aircraft order.
    """
    if isinstance(rng, np.random.Generator):
        gens = [rng] * geom.num_aircraft
    else:
        gens = [seeding.stream(rng, seeding.A2G_FADING, k) for k in range(geom.num_aircraft)]
    h_s = np.array([s2a_channel(geom, prop, k) for k in range(geom.num_aircraft)])
    h_b = np.array([a2g_channel(geom, prop, k, gens[k]) for k in range(geom.num_aircraft)])
    return ChannelSet(h_s=h_s, h_b=h_b)
