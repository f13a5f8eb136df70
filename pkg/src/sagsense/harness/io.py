"""CSV outputs: experiment records and convergence traces."""

import csv

from .experiment import ResultRecord, to_db

RECORD_COLUMNS = ("sweep_value", "strategy", "trial", "seed", "final_sinr_db", "iterations", "wall_time_ms")
TRACE_COLUMNS = ("iteration", "sinr_db")


def _fmt(x):
    # repr is the shortest string that parses back to the same double.
    return repr(float(x))


def write_csv(records, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RECORD_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    _fmt(r.sweep_value),
                    r.strategy,
                    r.trial,
                    r.seed,
                    _fmt(r.final_sinr_db),
                    r.iterations,
                    f"{r.wall_time_ms:.3f}",
                ]
            )


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RECORD_COLUMNS:
            raise ValueError(f"unexpected header {reader.fieldnames}")
        return [
            ResultRecord(
                sweep_value=float(row["sweep_value"]),
                strategy=row["strategy"],
                trial=int(row["trial"]),
                seed=int(row["seed"]),
                final_sinr_db=float(row["final_sinr_db"]),
                iterations=int(row["iterations"]),
                wall_time_ms=float(row["wall_time_ms"]),
            )
            for row in reader
        ]


def write_failures(records, path):
    """Side file listing failed trials; the main CSV keeps its fixed columns."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("sweep_value", "strategy", "trial", "seed", "error"))
        for r in records:
            if not r.ok:
                writer.writerow([_fmt(r.sweep_value), r.strategy, r.trial, r.seed, r.error])


def emit_trace(trace, path):
    """Write ``iteration,sinr_db`` for every outer iteration (1-based)."""
    if not trace.sinr_per_iteration:
        raise ValueError("trace is empty")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for i, s in enumerate(trace.sinr_per_iteration, start=1):
            writer.writerow([i, _fmt(to_db(s))])


def read_trace(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [(int(row["iteration"]), float(row["sinr_db"])) for row in reader]


def strip_column(path, column="wall_time_ms"):
    """File contents with one column removed, for byte-level determinism checks."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    idx = rows[0].index(column)
    return "\n".join(",".join(c for i, c in enumerate(row) if i != idx) for row in rows) + "\n"
