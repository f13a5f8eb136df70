"""Alternating transmit/receive design that maximizes the target's echo SINR.

One outer iteration performs three closed-form steps:

1. auxiliary scalar ``varpi = q t / (sum_k |r_k t|^2 + sigma2)``, which makes
   the quadratic-transform surrogate tight at the current ``t``;
2. transmit beamformer ``t = varpi (Xi + lam I)^{-1} q^H`` with the dual
   variable ``lam`` chosen by bisection so that ``||t||^2 = P_t``;
3. receive filter from the generalized Rayleigh quotient, computed through
   the Hermitian square root of ``D``.

Each step can only increase the SINR, so the trace is non-decreasing.
Per outer iteration the cost is ``O(I_lam M_t^3)`` for the transmit step
(one dense shifted solve per bisection step) plus ``O(M_r^3)`` per Jacobi
sweep for the receive step.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketError, InvalidInput, SingularSystem
from .numerics import bisection, hermitian_eigendecompose, psd_sqrt_and_inverse, solve_shifted
from .sensing import BeamformerPair, build_sinr_parts, effective_rows, sinr, target_sinr

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class OptimizerConfig:
    """Power budget and stopping rules.

    ``eps1`` is the bisection bracket width relative to the initial upper
    bound, ``eps2`` the tolerated relative error of ``||t||^2`` against
    ``tx_power`` and ``eps3`` the relative SINR change that ends the
    alternation. ``lambda_max=None`` uses the bound ``|varpi| ||q|| / sqrt(P_t)``,
    which always brackets the root; an explicit value is doubled until it does.
    """

    tx_power: float = 1.0
    eps1: float = 1e-13
    eps2: float = 1e-12
    eps3: float = 1e-6
    lambda_min: float = 0.0
    lambda_max: float | None = None
    max_outer_iters: int = 50
    max_bisection_iters: int = 200
    pd_floor: float = 1e-18

    def __post_init__(self):
        if not self.tx_power > 0:
            raise InvalidInput("tx_power must be positive")
        if min(self.eps1, self.eps2, self.eps3) <= 0:
            raise InvalidInput("tolerances must be positive")
        if self.lambda_min < 0:
            raise InvalidInput("lambda_min must be >= 0")
        if self.lambda_max is not None and not self.lambda_max > self.lambda_min:
            raise InvalidInput("lambda_max must exceed lambda_min")
        if self.max_outer_iters < 1 or self.max_bisection_iters < 1:
            raise InvalidInput("iteration caps must be >= 1")


class Termination(enum.Enum):
    TOLERANCE_MET = "tolerance_met"
    MAX_ITERS = "max_iters"


@dataclass
class ConvergenceTrace:
    """SINR after every outer iteration, plus the dual variable used in it."""

    sinr_per_iteration: list = field(default_factory=list)
    dual_values: list = field(default_factory=list)
    termination: Termination = Termination.MAX_ITERS
    initial_sinr: float = 0.0

    @property
    def final_sinr(self):
        return self.sinr_per_iteration[-1] if self.sinr_per_iteration else self.initial_sinr

    @property
    def iterations(self):
        return len(self.sinr_per_iteration)


class Strategy(enum.Enum):
    JOINT = "joint"
    RECEIVE_ONLY = "receive_only"
    TRANSMIT_ONLY = "transmit_only"
    RANDOM = "random"
    TRANSCEIVING = "transceiving"


@dataclass
class StrategyOutcome:
    pair: BeamformerPair
    sinr: float
    iterations: int
    trace: ConvergenceTrace | None = None


def _converged(new, old, eps):
    return abs(new - old) < eps * max(abs(new), np.finfo(float).tiny)


def random_unit(rng, m):
    """Unit vector with isotropically distributed direction in C^m."""
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return v / np.linalg.norm(v)


def initial_pair(tx_antennas, rx_antennas, tx_power, rng=None):
    """Default start: uniform full-power ``t`` and ``u = e_1``; random when ``rng`` is given."""
    if rng is not None:
        return BeamformerPair(t=np.sqrt(tx_power) * random_unit(rng, tx_antennas), u=random_unit(rng, rx_antennas))
    t = np.full(tx_antennas, np.sqrt(tx_power / tx_antennas), dtype=complex)
    u = np.zeros(rx_antennas, dtype=complex)
    u[0] = 1.0
    return BeamformerPair(t=t, u=u)


def update_auxiliary(ch, t, u, noise, k0):
    """Auxiliary scalar that makes the quadratic transform tight at ``t``."""
    rows = effective_rows(ch, u)
    qt = rows[k0] @ np.asarray(t, dtype=complex)
    leak = np.sum(np.abs(np.delete(rows, k0, axis=0) @ t) ** 2)
    return complex(qt / (leak + noise.sigma2 * np.vdot(u, u).real))


def transmit_system(ch, u, varpi, k0):
    """``Xi = |varpi|^2 sum_{k != k0} r_k^H r_k`` and right-hand side ``varpi q^H``."""
    rows = effective_rows(ch, u)
    others = np.delete(rows, k0, axis=0)
    xi = abs(varpi) ** 2 * (others.conj().T @ others)
    return xi, varpi * rows[k0].conj()


def update_transmit(ch, u, varpi, cfg, k0):
    """Maximize the surrogate over ``t`` subject to ``||t||^2 <= P_t``.

    Returns
    -------
    t : ndarray
    lam : float
        Dual variable of the power constraint; 0 when it is inactive.

    Raises
    ------
    BracketError
        ``lambda_min`` already gives ``||t||^2 < P_t`` while the
        constraint is active, or doubling ``lambda_max`` never brackets.
    """
    xi, rhs = transmit_system(ch, u, varpi, k0)
    m = ch.tx_antennas
    rhs_norm = np.linalg.norm(rhs)
    if rhs_norm == 0.0:
        return np.zeros(m, dtype=complex), 0.0
    power = cfg.tx_power

    # Unconstrained maximizer exists only for nonsingular Xi, which needs
    # at least M_t interferers.
    if ch.num_aircraft - 1 >= m and cfg.lambda_min == 0.0:
        w = hermitian_eigendecompose(xi).eigenvalues
        if w[0] > max(cfg.pd_floor, m * _EPS * w[-1]):
            t0 = solve_shifted(xi, 0.0, rhs, floor=cfg.pd_floor)
            if np.vdot(t0, t0).real <= power:
                return t0, 0.0

    def excess_power(lam):
        try:
            t = solve_shifted(xi, lam, rhs, floor=cfg.pd_floor)
        except SingularSystem:
            return math.inf
        return np.vdot(t, t).real - power

    lo = cfg.lambda_min
    if cfg.lambda_max is None:
        # ||(Xi + lam I)^{-1} rhs|| <= ||rhs|| / lam for PSD Xi.
        hi = max(rhs_norm / np.sqrt(power), lo * 2.0 + np.finfo(float).tiny)
    else:
        hi = cfg.lambda_max
        for _ in range(200):
            if excess_power(hi) <= 0.0:
                break
            hi *= 2.0
        else:
            raise BracketError("lambda_max could not be doubled into a valid bracket")

    lam = bisection(
        excess_power,
        lo,
        hi,
        eps_x=cfg.eps1 * hi,
        eps_f=cfg.eps2 * power,
        max_iter=cfg.max_bisection_iters,
    )
    return solve_shifted(xi, lam, rhs, floor=cfg.pd_floor), lam


def _phase_normalize(v):
    i = int(np.argmax(np.abs(v)))
    if v[i] == 0:
        return v
    out = v * (abs(v[i]) / v[i])
    out[i] = abs(v[i])
    return out


def update_receive(parts, floor=1e-18):
    """Unit ``u`` maximizing ``(u^H N u) / (u^H D u)``.

    Whitens with ``D = L L``, takes the top eigenvector ``p`` of
    ``L^{-1} N L^{-1}`` and returns ``L^{-1} p`` normalized. Ties among top
    eigenvalues go to the lowest index. The result is phase-normalized so its
    largest-magnitude entry is real and positive. ``N = 0`` gives ``e_1``.
    """
    m = parts.D.shape[0]
    if not np.any(parts.N):
        u = np.zeros(m, dtype=complex)
        u[0] = 1.0
        return u
    _, l_inv = psd_sqrt_and_inverse(parts.D, floor=floor)
    whitened = l_inv @ parts.N @ l_inv
    eig = hermitian_eigendecompose(0.5 * (whitened + whitened.conj().T))
    top = int(np.flatnonzero(eig.eigenvalues == eig.eigenvalues[-1])[0])
    u = l_inv @ eig.eigenvectors[:, top]
    return _phase_normalize(u / np.linalg.norm(u))


def _check_feasible(pair, m_t, m_r, power):
    t = np.asarray(pair.t, dtype=complex)
    u = np.asarray(pair.u, dtype=complex)
    if t.shape != (m_t,) or u.shape != (m_r,):
        raise InvalidInput(f"initial pair has shapes {t.shape}, {u.shape}; expected ({m_t},), ({m_r},)")
    if np.vdot(t, t).real > power * (1.0 + 1e-8):
        raise InvalidInput("initial t exceeds the power budget")
    if abs(np.linalg.norm(u) - 1.0) > 1e-10:
        raise InvalidInput("initial u must have unit norm")
    return t, u


def alternate(ch, noise, cfg, k0, init=None):
    """Alternating optimization of ``(t, u)`` for target ``k0``.

    Stops when the relative SINR change between consecutive iterations
    drops below ``cfg.eps3``; the first iteration is compared with the SINR
    of ``init``.

    Returns
    -------
    pair : BeamformerPair
    trace : ConvergenceTrace
    """
    if init is None:
        init = initial_pair(ch.tx_antennas, ch.rx_antennas, cfg.tx_power)
    t, u = _check_feasible(init, ch.tx_antennas, ch.rx_antennas, cfg.tx_power)
    prev = target_sinr(ch, t, u, noise, k0)
    trace = ConvergenceTrace(initial_sinr=prev)

    for _ in range(cfg.max_outer_iters):
        varpi = update_auxiliary(ch, t, u, noise, k0)
        t, lam = update_transmit(ch, u, varpi, cfg, k0)
        parts = build_sinr_parts(ch, t, noise, k0)
        u = update_receive(parts, cfg.pd_floor)
        current = sinr(parts, u)
        trace.sinr_per_iteration.append(current)
        trace.dual_values.append(lam)
        if _converged(current, prev, cfg.eps3):
            trace.termination = Termination.TOLERANCE_MET
            break
        prev = current
    return BeamformerPair(t=t, u=u), trace


def optimize_transmit(ch, u, noise, cfg, k0, t=None):
    """Alternate auxiliary and transmit updates with the receive filter held fixed."""
    if t is None:
        t = initial_pair(ch.tx_antennas, ch.rx_antennas, cfg.tx_power).t
    u = np.asarray(u, dtype=complex)
    prev = target_sinr(ch, t, u, noise, k0)
    trace = ConvergenceTrace(initial_sinr=prev)
    for _ in range(cfg.max_outer_iters):
        varpi = update_auxiliary(ch, t, u, noise, k0)
        t, lam = update_transmit(ch, u, varpi, cfg, k0)
        current = target_sinr(ch, t, u, noise, k0)
        trace.sinr_per_iteration.append(current)
        trace.dual_values.append(lam)
        if _converged(current, prev, cfg.eps3):
            trace.termination = Termination.TOLERANCE_MET
            break
        prev = current
    return t, trace


def run_strategy(strategy, ch, noise, cfg, k0, rng):
    """Run one design strategy on a channel realization.

    ``receive_only`` keeps the transmit beamformer at the alternation's
    starting point (uniform, full power) and designs only ``u``;
    ``transmit_only`` draws a random unit ``u`` and designs only ``t``;
    ``random`` draws both; ``transceiving`` runs the full alternation on the
    satellite's own round-trip channel.
    """
    strategy = Strategy(strategy)
    m_t, m_r, power = ch.tx_antennas, ch.rx_antennas, cfg.tx_power

    if strategy is Strategy.JOINT:
        pair, trace = alternate(ch, noise, cfg, k0)
        return StrategyOutcome(pair, trace.final_sinr, trace.iterations, trace)

    if strategy is Strategy.TRANSCEIVING:
        pair, trace = alternate(ch.monostatic(), noise, cfg, k0)
        return StrategyOutcome(pair, trace.final_sinr, trace.iterations, trace)

    if strategy is Strategy.RECEIVE_ONLY:
        t = initial_pair(m_t, m_r, power).t
        parts = build_sinr_parts(ch, t, noise, k0)
        u = update_receive(parts, cfg.pd_floor)
        return StrategyOutcome(BeamformerPair(t, u), sinr(parts, u), 1)

    if strategy is Strategy.TRANSMIT_ONLY:
        u = random_unit(rng, m_r)
        t, trace = optimize_transmit(ch, u, noise, cfg, k0)
        return StrategyOutcome(BeamformerPair(t, u), trace.final_sinr, trace.iterations, trace)

    t = np.sqrt(power) * random_unit(rng, m_t)
    u = random_unit(rng, m_r)
    return StrategyOutcome(BeamformerPair(t, u), target_sinr(ch, t, u, noise, k0), 1)
