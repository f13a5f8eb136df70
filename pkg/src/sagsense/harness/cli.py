"""Command-line front end.

    sagsense run    CONFIG   Monte-Carlo experiment, one CSV row per trial
    sagsense trace  CONFIG   convergence trace of a single joint run
    sagsense oracle CONFIG   grid-search certificate on a small instance

Output goes to ``--out``, else ``$SAGSENSE_OUT``, else ``./results``.
Exit codes: 0 success, 1 runtime failure, 2 bad config or arguments,
3 some trials failed, 4 oracle certificate failed.
"""

import argparse
import csv
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from ..errors import ConfigError, SagsenseError
from ..optimizer import alternate
from .config import parse_config
from .experiment import optimizer_at, run_experiment, summarize, to_db, trial_channels
from .io import emit_trace, write_csv, write_failures
from .oracle import brute_force_oracle

log = logging.getLogger("sagsense")

OUT_ENV = "SAGSENSE_OUT"
ORACLE_MIN_RATIO = 0.98


class StageError(Exception):
    def __init__(self, stage, message, code=1):
        super().__init__(f"{stage}: {message}")
        self.code = code


def _out_dir(args):
    out = Path(args.out or os.environ.get(OUT_ENV) or "results")
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise StageError("output", str(exc)) from None
    return out


def _load(args):
    try:
        spec = parse_config(args.config)
        strategies = args.strategies.split(",") if getattr(args, "strategies", None) else None
        spec = spec.with_overrides(seed=args.seed, strategies=strategies)
    except ConfigError as exc:
        raise StageError("config", str(exc), code=2) from None
    except OSError as exc:
        raise StageError("config", str(exc), code=2) from None
    if getattr(args, "trials", None) is not None:
        if args.trials < 1:
            raise StageError("config", "--trials must be >= 1", code=2)
        spec = replace(spec, trials=args.trials)
    return spec


def _stem(args):
    return Path(args.config).stem


def cmd_run(args):
    spec = _load(args)
    out = _out_dir(args)
    try:
        records = run_experiment(spec, jobs=args.jobs)
    except SagsenseError as exc:
        raise StageError("run", str(exc)) from None
    path = out / f"{_stem(args)}.csv"
    try:
        write_csv(records, path)
    except OSError as exc:
        raise StageError("write", str(exc)) from None

    print(f"{'sweep':>10}  {'strategy':<14} {'mean SINR [dB]':>14}")
    for (value, strategy), mean in sorted(summarize(records).items()):
        print(f"{value:>10g}  {strategy:<14} {mean:>14.3f}")
    print(f"wrote {len(records)} records to {path}")

    failed = [r for r in records if not r.ok]
    if failed:
        fail_path = out / f"{_stem(args)}_failures.csv"
        write_failures(records, fail_path)
        print(f"run: {len(failed)} trial(s) failed, see {fail_path}", file=sys.stderr)
        return 3
    return 0


def cmd_trace(args):
    spec = _load(args)
    out = _out_dir(args)
    value = spec.sweep.points()[0]
    try:
        ch, seed = trial_channels(spec, args.trial, value)
        _, trace = alternate(ch, spec.noise, optimizer_at(spec, value), spec.scenario.target_index)
    except SagsenseError as exc:
        raise StageError("trace", str(exc)) from None
    path = out / f"{_stem(args)}_trace.csv"
    try:
        emit_trace(trace, path)
    except OSError as exc:
        raise StageError("write", str(exc)) from None
    for i, s in enumerate(trace.sinr_per_iteration, start=1):
        print(f"iter {i:3d}  SINR {to_db(s):10.4f} dB")
    print(f"{trace.termination.value} after {trace.iterations} iteration(s), seed {seed}; wrote {path}")
    return 0


def cmd_oracle(args):
    spec = _load(args)
    sc = spec.scenario
    if spec.sweep.kind == "antennas" or sc.tx_antennas > 2 or sc.rx_antennas > 2:
        raise StageError("config", "oracle needs tx_antennas <= 2 and rx_antennas <= 2", code=2)
    out = _out_dir(args)
    rows = []
    value = spec.sweep.points()[0]
    try:
        cfg = optimizer_at(spec, value)
        for trial in range(spec.trials):
            ch, seed = trial_channels(spec, trial, value)
            _, trace = alternate(ch, spec.noise, cfg, sc.target_index)
            best = brute_force_oracle(ch, spec.noise, cfg, sc.target_index, args.resolution)
            rows.append((trial, seed, trace.final_sinr, best))
    except SagsenseError as exc:
        raise StageError("oracle", str(exc)) from None

    path = out / f"{_stem(args)}_oracle.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("trial", "seed", "alternating_sinr_db", "oracle_sinr_db", "ratio"))
        for trial, seed, alt, best in rows:
            writer.writerow([trial, seed, repr(to_db(alt)), repr(to_db(best)), repr(alt / best)])
    worst = min(alt / best for _, _, alt, best in rows)
    print(f"{len(rows)} instances, worst alternating/oracle ratio {worst:.6f}; wrote {path}")
    if worst < ORACLE_MIN_RATIO:
        print(f"oracle: ratio below {ORACLE_MIN_RATIO}", file=sys.stderr)
        return 4
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="sagsense", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="experiment config (YAML/JSON); bundled names such as paper_default.cfg work too")
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./results)")
        p.add_argument("--seed", type=int, help="override base_seed")
        p.add_argument("--trials", type=int, help="override the number of trials")

    p = sub.add_parser("run", help="full Monte-Carlo experiment")
    common(p)
    p.add_argument("--strategies", help="comma-separated subset, e.g. joint,receive_only")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("trace", help="convergence trace of one joint optimization")
    common(p)
    p.add_argument("--trial", type=int, default=0)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("oracle", help="brute-force check on a small instance")
    common(p)
    p.add_argument("--resolution", type=int, default=64, help="grid points per angle")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
