"""Render experiment CSV bundles as publication-style figures.

These scripts draw exactly the columns the simulation harness wrote; no
statistic is ever recomputed here.  Output is deterministic: identical
inputs produce byte-identical SVG (fixed hash salt, no date metadata).

Figure kinds and their expected CSV schemas:

    wealth_bands      summary.csv with columns
                      t, mean_log_wealth, lo_log_wealth, hi_log_wealth,
                      rejection_proportion
    strategy_compare  several summary.csv files, one line per label
    rejection_curve   curve file with columns theta, x, method,
                      rejection_rate (x = sample size or round)
    stopping_bound    stopping_bound.csv with columns theta, r_star, bound,
                      strategy, mean_tau, lo_tau, hi_tau, n_rejected
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from matplotlib import rc_context
from matplotlib.figure import Figure

__all__ = ["FigureSpec", "SchemaError", "render", "FIGURE_KINDS"]

FIGURE_KINDS = ("wealth_bands", "rejection_curve", "stopping_bound", "strategy_compare")

_DETERMINISTIC_RC = {
    "svg.hashsalt": "steinbet-figures",
    "figure.figsize": (7.0, 4.5),
    "axes.grid": True,
    "grid.alpha": 0.3,
}


class SchemaError(ValueError):
    """An input CSV is missing, empty, or lacks the expected columns."""


_KIND_FILES = {
    "wealth_bands": ("summary.csv",),
    "strategy_compare": ("summary.csv",),
    "stopping_bound": ("stopping_bound.csv",),
    "rejection_curve": ("batch_curve.csv", "sequential_curve.csv"),
}


def _expand_inputs(inputs: list[Path], kind: str) -> list[Path]:
    """Directory inputs resolve to the bundle file(s) the kind expects."""
    out: list[Path] = []
    for p in inputs:
        if p.is_dir():
            found = [p / name for name in _KIND_FILES[kind] if (p / name).exists()]
            if not found:
                raise SchemaError(
                    f"{p}: directory contains none of {list(_KIND_FILES[kind])}"
                )
            out.extend(found)
        else:
            out.append(p)
    return out


@dataclass
class FigureSpec:
    """What to draw: input CSVs, figure kind, output path, line labels.

    ``labels`` pairs with ``inputs`` for multi-file kinds; ``threshold``
    draws a horizontal reference line (e.g. log(1/alpha)) on wealth plots.
    """

    inputs: list[Path]
    kind: str
    output: Path
    labels: list[str] = field(default_factory=list)
    title: str = ""
    threshold: float | None = None

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(
                f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}"
            )
        self.inputs = [Path(p) for p in self.inputs]
        self.output = Path(self.output)
        if not self.inputs:
            raise SchemaError("no input CSVs given")
        if self.labels and len(self.labels) != len(self.inputs):
            raise SchemaError(
                f"{len(self.labels)} labels for {len(self.inputs)} inputs"
            )


def _read_columns(path: Path, required: tuple[str, ...]) -> dict[str, list]:
    if not path.exists():
        raise SchemaError(f"{path}: no such file")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        missing = [c for c in required if c not in names]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing} (has {names})")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    out: dict[str, list] = {c: [] for c in names}
    for row in rows:
        for c in names:
            out[c].append(row[c])
    return out


def _floats(col: list) -> list[float]:
    return [float(v) for v in col]


def _label_for(spec: FigureSpec, i: int) -> str:
    if spec.labels:
        return spec.labels[i]
    return spec.inputs[i].parent.name or spec.inputs[i].stem


def _draw_wealth(ax, spec: FigureSpec):
    for i, path in enumerate(spec.inputs):
        cols = _read_columns(
            path, ("t", "mean_log_wealth", "lo_log_wealth", "hi_log_wealth")
        )
        t = _floats(cols["t"])
        mean = _floats(cols["mean_log_wealth"])
        lo = _floats(cols["lo_log_wealth"])
        hi = _floats(cols["hi_log_wealth"])
        (line,) = ax.plot(t, mean, label=_label_for(spec, i))
        if spec.kind == "wealth_bands":
            ax.fill_between(t, lo, hi, alpha=0.2, color=line.get_color())
    if spec.threshold is not None:
        ax.axhline(spec.threshold, linestyle="--", color="black", linewidth=1)
    ax.set_xlabel("round")
    ax.set_ylabel("log wealth")
    ax.legend()


def _draw_rejection_curve(ax, spec: FigureSpec):
    for i, path in enumerate(spec.inputs):
        cols = _read_columns(path, ("theta", "x", "method", "rejection_rate"))
        series: dict[tuple[str, str], list[tuple[float, float]]] = {}
        for theta, x, method, rate in zip(
            cols["theta"], cols["x"], cols["method"], cols["rejection_rate"]
        ):
            series.setdefault((method, theta), []).append((float(x), float(rate)))
        for (method, theta), pts in sorted(series.items()):
            pts.sort()
            ax.plot(
                [p[0] for p in pts],
                [p[1] for p in pts],
                label=f"{method} theta={theta}",
            )
    ax.set_xlabel("observations")
    ax.set_ylabel("rejection proportion")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize="x-small")


def _draw_stopping_bound(ax, spec: FigureSpec):
    (path,) = spec.inputs
    cols = _read_columns(
        path, ("r_star", "bound", "strategy", "mean_tau", "lo_tau", "hi_tau")
    )
    series: dict[str, list[tuple[float, float, float, float]]] = {}
    bound_pts = []
    for r, b, strat, mt, lo, hi in zip(
        cols["r_star"], cols["bound"], cols["strategy"],
        cols["mean_tau"], cols["lo_tau"], cols["hi_tau"],
    ):
        series.setdefault(strat, []).append(
            (float(r), float(mt), float(lo), float(hi))
        )
        bound_pts.append((float(r), float(b)))
    for strat, pts in sorted(series.items()):
        pts.sort()
        r = [p[0] for p in pts]
        (line,) = ax.plot(r, [p[1] for p in pts], marker="o", label=strat)
        ax.fill_between(
            r, [p[2] for p in pts], [p[3] for p in pts],
            alpha=0.2, color=line.get_color(),
        )
    bound_pts = sorted(set(bound_pts))
    ax.plot(
        [p[0] for p in bound_pts],
        [p[1] for p in bound_pts],
        linestyle="--",
        color="black",
        label="log(1/alpha) / r*",
    )
    ax.set_xlabel("growth rate r*")
    ax.set_ylabel("stopping time")
    ax.legend()


def render(spec: FigureSpec) -> Path:
    """Draw the figure described by ``spec``; returns the output path.

    SVG output is byte-stable across runs on identical inputs.  Directory
    inputs are resolved to the bundle file(s) the figure kind expects.
    """
    spec.inputs = _expand_inputs(spec.inputs, spec.kind)
    with rc_context(_DETERMINISTIC_RC):
        fig = Figure()
        ax = fig.add_subplot(111)
        if spec.kind in ("wealth_bands", "strategy_compare"):
            _draw_wealth(ax, spec)
        elif spec.kind == "rejection_curve":
            _draw_rejection_curve(ax, spec)
        else:
            _draw_stopping_bound(ax, spec)
        if spec.title:
            ax.set_title(spec.title)
        spec.output.parent.mkdir(parents=True, exist_ok=True)
        fmt = spec.output.suffix.lstrip(".").lower() or "svg"
        fig.savefig(spec.output, format=fmt, metadata=_no_date_metadata(fmt))
    return spec.output


def _no_date_metadata(fmt: str):
    if fmt == "svg":
        return {"Date": None}
    if fmt == "png":
        return {"Software": None}
    return None
