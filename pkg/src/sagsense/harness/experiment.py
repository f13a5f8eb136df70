"""Monte-Carlo sweeps over altitude, antenna count and transmit power."""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .. import seeding
from ..channel import ScenarioGeometry, build_channels, sample_aircraft_positions
from ..errors import SagsenseError
from ..optimizer import Strategy, run_strategy
from .config import KM

log = logging.getLogger(__name__)

# Strategy streams are keyed by enum position so that filtering the
# strategy list never changes another strategy's random draws.
_STRATEGY_KEY = {s: i for i, s in enumerate(Strategy)}


@dataclass(frozen=True)
class ResultRecord:
    sweep_value: float
    strategy: str
    trial: int
    seed: int
    final_sinr_db: float
    iterations: int
    wall_time_ms: float
    error: str = ""

    @property
    def ok(self):
        return not self.error


def to_db(x):
    return 10.0 * math.log10(x) if x > 0 else -math.inf


def trial_aircraft(spec, seed):
    sc = spec.scenario
    rng = seeding.stream(seed, seeding.AIRCRAFT_POSITIONS)
    return sample_aircraft_positions(sc.center, sc.radius, sc.num_aircraft, rng)


def geometry_at(spec, aircraft, sweep_value):
    """Scenario geometry with the sweep variable applied.

    An altitude sweep moves only the satellite's z coordinate (km); an
    antenna sweep sets the satellite array size.
    """
    sc = spec.scenario
    satellite = np.array(sc.satellite, dtype=float)
    tx_antennas = sc.tx_antennas
    if spec.sweep.kind == "altitude":
        satellite[2] = sweep_value * KM
    elif spec.sweep.kind == "antennas":
        tx_antennas = int(sweep_value)
    return ScenarioGeometry(
        satellite=satellite,
        bs=np.array(sc.bs, dtype=float),
        aircraft=aircraft,
        target_index=sc.target_index,
        tx_antennas=tx_antennas,
        rx_antennas=sc.rx_antennas,
        spacing_ratio=sc.spacing_ratio,
    )


def optimizer_at(spec, sweep_value):
    if spec.sweep.kind == "power":
        return replace(spec.opt, tx_power=float(sweep_value))
    return spec.opt


def trial_channels(spec, trial, sweep_value):
    """Channel set and trial seed for one (trial, sweep value) cell."""
    seed = seeding.trial_seed(spec.base_seed, trial)
    geom = geometry_at(spec, trial_aircraft(spec, seed), sweep_value)
    return build_channels(geom, spec.prop, seed), seed


def run_trial(spec, trial):
    """All sweep values x strategies for one trial. Failures become error records."""
    records = []
    seed = seeding.trial_seed(spec.base_seed, trial)
    k0 = spec.scenario.target_index
    for value in spec.sweep.points():
        try:
            ch, _ = trial_channels(spec, trial, value)
        except SagsenseError as exc:
            for strategy in spec.strategies:
                records.append(ResultRecord(value, strategy.value, trial, seed, math.nan, 0, 0.0, f"channel: {exc}"))
            continue
        cfg = optimizer_at(spec, value)
        for strategy in spec.strategies:
            rng = seeding.stream(seed, seeding.STRATEGY, _STRATEGY_KEY[strategy])
            start = time.perf_counter()
            try:
                outcome = run_strategy(strategy, ch, spec.noise, cfg, k0, rng)
            except (SagsenseError, np.linalg.LinAlgError) as exc:
                log.warning("trial %d, %s at %s failed: %s", trial, strategy.value, value, exc)
                records.append(ResultRecord(value, strategy.value, trial, seed, math.nan, 0, 0.0, str(exc)))
                continue
            elapsed = 1e3 * (time.perf_counter() - start)
            records.append(
                ResultRecord(value, strategy.value, trial, seed, to_db(outcome.sinr), outcome.iterations, elapsed)
            )
    return records


def _sort_key(rec):
    value = -math.inf if math.isnan(rec.sweep_value) else rec.sweep_value
    return (value, rec.strategy, rec.trial)


def run_experiment(spec, jobs=1):
    """Run every sweep value x strategy x trial and return records in canonical order.

    The output does not depend on ``jobs``: each trial draws from its own
    keyed random streams and records are sorted before returning.
    """
    trials = range(spec.trials)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(run_trial, [spec] * spec.trials, trials))
    else:
        chunks = [run_trial(spec, t) for t in trials]
    records = [r for chunk in chunks for r in chunk]
    return sorted(records, key=_sort_key)


def summarize(records):
    """Mean final SINR (dB) per (sweep value, strategy) over successful trials."""
    groups = {}
    for rec in records:
        if rec.ok:
            groups.setdefault((rec.sweep_value, rec.strategy), []).append(rec.final_sinr_db)
    return {key: float(np.mean(vals)) for key, vals in groups.items()}
