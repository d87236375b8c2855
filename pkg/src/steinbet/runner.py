"""Scenario runner: replicated streams, summaries, and CSV persistence.

One scenario = R independently seeded streams of length T pushed through a
freshly constructed test.  Replication r uses the generator derived from
(seed, r) for both data generation and nothing else (the test itself is
deterministic given the data), so strategies can be compared on shared
streams by reusing the base seed.

Output bundle (written when ``out_dir`` is given):

    config.json        resolved configuration plus its hash
    trajectories.csv   rep, t, payoff, bet, wealth, log_wealth, rejected
    summary.csv        per-round mean/percentiles of log wealth and the
                       cumulative rejection proportion
    stopping.csv       rep, seed, seed_index, tau (-1 if never rejected)

Every summary column is recomputable from trajectories.csv; nothing is
summary-only state.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from .betting import CompositeTest, SequentialTest
from .config import ScenarioConfig, build_model, replication_rng, scenario_hash
from .models import sample

__all__ = ["ScenarioResult", "run_scenario", "run_replication", "summarize"]


@dataclass
class ScenarioResult:
    """In-memory view of a finished scenario."""

    config: ScenarioConfig
    hash: str
    payoffs: np.ndarray  # (R, T)
    bets: np.ndarray  # (R, T)
    log_wealth: np.ndarray  # (R, T)
    taus: np.ndarray  # (R,) stopping rounds, -1 where never rejected

    @property
    def rejection_proportion(self) -> np.ndarray:
        """Cumulative fraction of replications rejected by each round."""
        t = np.arange(1, self.log_wealth.shape[1] + 1)
        rejected = self.taus[:, None] > 0
        return (rejected & (self.taus[:, None] <= t[None, :])).mean(axis=0)


def _make_test(cfg: ScenarioConfig):
    if cfg.composite is not None:
        models = [build_model(s, f"composite[{i}]") for i, s in enumerate(cfg.composite)]
        return CompositeTest(
            models,
            strategy=cfg.strategy,
            alpha=cfg.alpha,
            bound_scale=cfg.bound_scale,
            const_bet=cfg.const_bet,
        )
    return SequentialTest(
        build_model(cfg.null_model, "null_model"),
        strategy=cfg.strategy,
        alpha=cfg.alpha,
        bound_scale=cfg.bound_scale,
        const_bet=cfg.const_bet,
    )


def run_replication(cfg: ScenarioConfig, rep: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """One stream end to end; returns (payoffs, bets, log_wealth, tau).

    Reproducible from the ledger: the stream depends only on (seed, rep).
    """
    rng = replication_rng(cfg.seed, rep)
    data_model = build_model(cfg.data_model, "data_model")
    xs = sample(data_model, rng, cfg.horizon, burn_in=cfg.burn_in, thin=cfg.thin)
    test = _make_test(cfg)
    records = test.run(xs)
    payoffs = np.array([r.payoff for r in records])
    bets = np.array([r.bet for r in records])
    log_wealth = np.array([r.log_wealth for r in records])
    tau = test.rejected_at if test.rejected_at is not None else -1
    return payoffs, bets, log_wealth, tau


def run_scenario(
    cfg: ScenarioConfig, out_dir=None, n_jobs: int = 1
) -> ScenarioResult:
    """Run all replications of a scenario; optionally persist the bundle.

    ``n_jobs`` > 1 distributes replications over processes; results are
    identical to a serial run because seeding is per-replication.
    """
    cfg.validate()
    reps = range(cfg.replications)
    if n_jobs == 1:
        rows = [run_replication(cfg, r) for r in reps]
    else:
        rows = Parallel(n_jobs=n_jobs)(delayed(run_replication)(cfg, r) for r in reps)
    result = ScenarioResult(
        config=cfg,
        hash=scenario_hash(cfg),
        payoffs=np.stack([r[0] for r in rows]),
        bets=np.stack([r[1] for r in rows]),
        log_wealth=np.stack([r[2] for r in rows]),
        taus=np.array([r[3] for r in rows]),
    )
    if out_dir is not None:
        write_bundle(result, out_dir)
    return result


def summarize(result: ScenarioResult) -> dict[str, np.ndarray]:
    """Per-round aggregates over replications (plain arrays, keyed by column)."""
    lw = result.log_wealth
    return {
        "t": np.arange(1, lw.shape[1] + 1),
        "mean_log_wealth": lw.mean(axis=0),
        "lo_log_wealth": np.percentile(lw, 2.5, axis=0),
        "hi_log_wealth": np.percentile(lw, 97.5, axis=0),
        "rejection_proportion": result.rejection_proportion,
    }


def _fmt(v) -> str:
    return repr(float(v))


def write_bundle(result: ScenarioResult, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = result.config

    with (out / "config.json").open("w", encoding="utf-8") as fh:
        json.dump({"hash": result.hash, **cfg.to_dict()}, fh, indent=2)
        fh.write("\n")

    with (out / "trajectories.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["rep", "t", "payoff", "bet", "wealth", "log_wealth", "rejected"])
        for rep in range(cfg.replications):
            tau = result.taus[rep]
            for i in range(cfg.horizon):
                lw = result.log_wealth[rep, i]
                w.writerow(
                    [
                        rep,
                        i + 1,
                        _fmt(result.payoffs[rep, i]),
                        _fmt(result.bets[rep, i]),
                        _fmt(math.exp(lw) if lw < 700 else math.inf),
                        _fmt(lw),
                        int(tau > 0 and i + 1 >= tau),
                    ]
                )

    with (out / "summary.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        cols = summarize(result)
        w.writerow(cols.keys())
        for i in range(cfg.horizon):
            w.writerow(
                [int(cols["t"][i])]
                + [_fmt(cols[k][i]) for k in list(cols)[1:]]
            )

    with (out / "stopping.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["rep", "seed", "seed_index", "tau"])
        for rep in range(cfg.replications):
            w.writerow([rep, cfg.seed, rep, int(result.taus[rep])])

    return out
