"""Exhaustive grid search over small arrays, used to certify the alternation."""

import numpy as np

from ..errors import InvalidInput


def unit_sphere_grid(m, resolution):
    """Unit vectors in C^m (m <= 2) up to a global phase.

    For m = 2 the points are ``(cos a, sin a e^{j b})`` with
    ``a = (pi/2) i / n`` (i = 0..n) and ``b = 2 pi j / n``. A grid of
    resolution ``n`` contains every grid of resolution dividing ``n``.
    """
    if m == 1:
        return np.ones((1, 1), dtype=complex)
    n = int(resolution)
    a = 0.5 * np.pi * np.arange(n + 1) / n
    b = 2.0 * np.pi * np.arange(n) / n
    aa, bb = np.meshgrid(a, b, indexing="ij")
    return np.stack([np.cos(aa).ravel() + 0j, (np.sin(aa) * np.exp(1j * bb)).ravel()], axis=1)


def brute_force_oracle(ch, noise, cfg, k0, grid_resolution=64, chunk=512):
    """Best SINR over a grid of full-power ``t`` and unit ``u``.

    Only defined for ``M_t, M_r <= 2``. The value is attained by a feasible
    pair, so it is a lower bound on the true optimum.
    """
    if ch.tx_antennas > 2 or ch.rx_antennas > 2:
        raise InvalidInput("grid oracle needs M_t <= 2 and M_r <= 2")
    if grid_resolution < 1:
        raise InvalidInput("grid_resolution must be >= 1")
    t_grid = np.sqrt(cfg.tx_power) * unit_sphere_grid(ch.tx_antennas, grid_resolution)
    u_conj = unit_sphere_grid(ch.rx_antennas, grid_resolution).conj()
    others = [k for k in range(ch.num_aircraft) if k != k0]

    best = 0.0
    for start in range(0, len(t_grid), chunk):
        t = t_grid[start : start + chunk]
        # Rows index the u grid, columns the t chunk.
        num = np.abs(u_conj @ (ch.cascaded[k0] @ t.T)) ** 2
        den = np.full_like(num, noise.sigma2)
        for k in others:
            den += np.abs(u_conj @ (ch.cascaded[k] @ t.T)) ** 2
        best = max(best, float(np.max(num / den)))
    return best
