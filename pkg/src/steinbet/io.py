"""Reading observation streams and writing per-round records as CSV.

Streams are one point per row: either numeric CSV (optionally with a header
row, which is skipped if non-numeric) or JSON lines where each line is an
array of coordinates.  Trajectory CSVs use UTF-8, a header row, and '.' as
the decimal separator; floats are written with ``repr`` so they round-trip
exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .betting import TrajectoryRecord

__all__ = ["load_points", "write_trajectory", "read_trajectory"]

TRAJECTORY_FIELDS = ("t", "payoff", "bet", "wealth", "log_wealth", "rejected")


def load_points(path) -> np.ndarray:
    """Load an observation stream as an (n, d) float array."""
    path = Path(path)
    if path.suffix.lower() in (".jsonl", ".ndjson"):
        rows = [json.loads(line) for line in path.read_text().splitlines() if line.strip()]
    else:
        with path.open(newline="") as fh:
            raw = [row for row in csv.reader(fh) if row]
        if not raw:
            raise ValueError(f"{path}: empty stream")
        try:
            float(raw[0][0])
        except ValueError:
            raw = raw[1:]  # header row
        rows = [[float(v) for v in row] for row in raw]
    if not rows:
        raise ValueError(f"{path}: empty stream")
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{path}: rows have inconsistent lengths")
    if not np.isfinite(arr).all():
        raise ValueError(f"{path}: stream contains non-finite values")
    return arr


def _fmt(v) -> str:
    return repr(float(v))


def write_trajectory(path, records: list[TrajectoryRecord], extra: dict | None = None):
    """Write per-round records to CSV; ``extra`` adds constant columns."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    extra = extra or {}
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(extra) + list(TRAJECTORY_FIELDS))
        prefix = [str(v) for v in extra.values()]
        for r in records:
            writer.writerow(
                prefix
                + [
                    str(r.t),
                    _fmt(r.payoff),
                    _fmt(r.bet),
                    _fmt(r.wealth),
                    _fmt(r.log_wealth),
                    str(int(r.rejected)),
                ]
            )


def read_trajectory(path) -> list[dict]:
    """Read a trajectory CSV back into a list of per-row dicts."""
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return [dict(row) for row in csv.DictReader(fh)]
