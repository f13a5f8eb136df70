"""Echo model, target SINR, and the quadratic-transform surrogate.

Receiver noise enters through its covariance ``sigma2 * I``; the unit-power
information symbol cancels from every ratio and is not modelled.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput


@dataclass(frozen=True)
class NoiseModel:
    sigma2: float = 1e-12  # watts per receive antenna

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise InvalidInput("sigma2 must be positive")


@dataclass(frozen=True)
class BeamformerPair:
    t: np.ndarray  # transmit beamformer, length M_t
    u: np.ndarray  # receive filter, length M_r, unit norm


@dataclass(frozen=True)
class SinrParts:
    """Numerator ``N = a a^H`` and interference-plus-noise ``D`` of the SINR."""

    N: np.ndarray
    D: np.ndarray


def _vector(x, n, name):
    x = np.asarray(x, dtype=complex)
    if x.shape != (n,):
        raise InvalidInput(f"{name} must have shape ({n},), got {x.shape}")
    return x


def signal_vectors(ch, t):
    """Echo contribution ``a_k = cascaded[k] @ t`` of every aircraft, shape (K, M_r)."""
    t = _vector(t, ch.tx_antennas, "t")
    return ch.cascaded @ t


def signal_vector(ch, t, k):
    """Echo contribution of aircraft ``k`` at the receive array."""
    t = _vector(t, ch.tx_antennas, "t")
    return ch.cascaded[k] @ t


def build_sinr_parts(ch, t, noise, k0):
    a = signal_vectors(ch, t)
    target = a[k0]
    interferers = np.delete(a, k0, axis=0)
    n_mat = np.outer(target, target.conj())
    d_mat = interferers.T @ interferers.conj() + noise.sigma2 * np.eye(ch.rx_antennas)
    return SinrParts(N=n_mat, D=d_mat)


def sinr(parts, u):
    """Generalized Rayleigh quotient ``(u^H N u) / (u^H D u)``; scale-invariant in ``u``."""
    u = _vector(u, parts.N.shape[0], "u")
    if not np.any(u):
        raise InvalidInput("u must be non-zero")
    num = np.vdot(u, parts.N @ u).real
    den = np.vdot(u, parts.D @ u).real
    return max(num, 0.0) / den


def target_sinr(ch, t, u, noise, k0):
    """SINR of aircraft ``k0`` for the beamformer pair ``(t, u)``."""
    return sinr(build_sinr_parts(ch, t, noise, k0), u)


def effective_rows(ch, u):
    """``u^H cascaded[k]`` for every aircraft, shape (K, M_t)."""
    u = _vector(u, ch.rx_antennas, "u")
    return np.einsum("r,krt->kt", u.conj(), ch.cascaded)


def surrogate_f2(ch, t, u, varpi, noise, k0):
    """Quadratic-transform objective for fixed ``u``.

    ``2 Re{conj(varpi) q t} - |varpi|^2 (sum_{k != k0} |r_k t|^2 + sigma2)``
    with ``q = u^H cascaded[k0]`` and ``r_k = u^H cascaded[k]``. For a unit
    ``u`` and ``varpi`` from :func:`sagsense.optimizer.update_auxiliary` this
    equals the SINR.
    """
    t = _vector(t, ch.tx_antennas, "t")
    rows = effective_rows(ch, u)
    qt = rows[k0] @ t
    leak = np.sum(np.abs(np.delete(rows, k0, axis=0) @ t) ** 2)
    return 2.0 * (np.conj(varpi) * qt).real - abs(varpi) ** 2 * (leak + noise.sigma2)
