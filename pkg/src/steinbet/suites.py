"""Named experiment bundles producing the CSV datasets behind the figures.

Each suite writes a directory of scenario bundles (see :mod:`.runner`) plus
any suite-specific curve files.  Defaults reproduce the reference
experiments: alpha = 0.05, horizon 100, 1000 replications, Gaussian shift 1,
tanh-tilt (1, 1), and the sparse RBM with weights shifted by 0.5 or visible
bias 1 as alternatives.  The RBM runs default to a reduced size (d=20,
d_h=5) so the whole suite stays desk-scale; ``full=True`` restores d=50,
d_h=10.  Burn-in for Gibbs streams is 1000 sweeps throughout.

Batch-test settings the reference leaves open are pinned here: 300 wild
bootstrap draws and the sample-size grid (20, 50, 100, 200, 400).
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .batch import batch_ksd_test, sequentialized_batch
from .config import ScenarioConfig, build_model, replication_rng
from .diagnostics import estimate_r_star, stopping_bound_check
from .runner import run_scenario, summarize

__all__ = ["SUITES", "run_suite"]

BATCH_N_GRID = (20, 50, 100, 200, 400)
BATCH_THETA_GRID = (0.40, 0.42, 0.44, 0.46, 0.48, 0.50)
BATCH_BOOT = 300


def _gauss(theta: float) -> dict:
    return {"kind": "gaussian", "mean": [theta]}


def _intractable(t1: float, t2: float) -> dict:
    return {"kind": "intractable", "theta": [t1, t2]}


def _rbm(full: bool, weight_shift: float = 0.0, visible_bias: float = 0.0) -> dict:
    d, d_h = (50, 10) if full else (20, 5)
    return {
        "kind": "structured_rbm",
        "d": d,
        "d_h": d_h,
        "per_hidden": 5,
        "weight_shift": weight_shift,
        "visible_bias": visible_bias,
    }


def _write_rows(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _alternative_pairs(full: bool):
    return [
        ("gaussian", _gauss(0.0), _gauss(1.0)),
        ("intractable", _intractable(0.0, 0.0), _intractable(1.0, 1.0)),
        ("rbm_shiftB", _rbm(full), _rbm(full, weight_shift=0.5)),
        ("rbm_bias", _rbm(full), _rbm(full, visible_bias=1.0)),
    ]


def _wealth_suite(pairs, out, reps, horizon, seed, strategies, n_jobs):
    out = Path(out)
    for name, null_spec, data_spec in pairs:
        for strategy in strategies:
            cfg = ScenarioConfig(
                name=f"{name}_{strategy}",
                null_model=null_spec,
                data_model=data_spec,
                strategy=strategy,
                horizon=horizon,
                replications=reps,
                seed=seed,
            )
            run_scenario(cfg, out / name / strategy, n_jobs=n_jobs)


def suite_gaussian_alt(out, reps=1000, horizon=100, seed=0, full=False, n_jobs=1):
    _wealth_suite(
        [_alternative_pairs(full)[0]], out, reps, horizon, seed,
        ("agrapa", "lbow"), n_jobs,
    )


def suite_intractable_alt(out, reps=1000, horizon=100, seed=0, full=False, n_jobs=1):
    _wealth_suite(
        [_alternative_pairs(full)[1]], out, reps, horizon, seed,
        ("agrapa", "lbow"), n_jobs,
    )


def suite_rbm_shiftB(out, reps=1000, horizon=100, seed=0, full=False, n_jobs=1):
    _wealth_suite(
        [_alternative_pairs(full)[2]], out, reps, horizon, seed,
        ("agrapa", "lbow"), n_jobs,
    )


def suite_rbm_bias(out, reps=1000, horizon=100, seed=0, full=False, n_jobs=1):
    _wealth_suite(
        [_alternative_pairs(full)[3]], out, reps, horizon, seed,
        ("agrapa", "lbow"), n_jobs,
    )


def suite_type1(out, reps=1000, horizon=100, seed=0, full=False, n_jobs=1):
    """Wealth under the null for all three families; nothing should reject."""
    pairs = [
        ("gaussian", _gauss(0.0), _gauss(0.0)),
        ("intractable", _intractable(0.0, 0.0), _intractable(0.0, 0.0)),
        ("rbm", _rbm(full), _rbm(full)),
    ]
    _wealth_suite(pairs, out, reps, horizon, seed, ("agrapa", "lbow"), n_jobs)


def suite_batch_vs_seq(out, reps=500, horizon=400, seed=0, full=False, n_jobs=1):
    """Rejection-rate curves: fixed-n batch test vs the sequential test,
    plus the type-I inflation of the batch test when rerun after every
    observation under the null."""
    out = Path(out)
    null_model = build_model(_gauss(0.0))

    rows = []
    for theta in BATCH_THETA_GRID:
        data_model = build_model(_gauss(theta))
        for n in BATCH_N_GRID:
            hits = 0
            for rep in range(reps):
                rng = replication_rng(seed, rep)
                xs = data_model.sample(rng, n)
                res = batch_ksd_test(null_model, xs, alpha=0.05, n_boot=BATCH_BOOT, rng=rng)
                hits += res.reject
            rows.append([theta, n, "batch", hits / reps])
    _write_rows(out / "batch_curve.csv", ["theta", "x", "method", "rejection_rate"], rows)

    rows = []
    for theta in BATCH_THETA_GRID:
        cfg = ScenarioConfig(
            name=f"seq_theta_{theta}",
            null_model=_gauss(0.0),
            data_model=_gauss(theta),
            strategy="agrapa",
            horizon=horizon,
            replications=reps,
            seed=seed,
        )
        result = run_scenario(cfg, n_jobs=n_jobs)
        prop = result.rejection_proportion
        rows.extend([theta, t + 1, "sequential", prop[t]] for t in range(horizon))
    _write_rows(
        out / "sequential_curve.csv", ["theta", "x", "method", "rejection_rate"], rows
    )

    # Null-stream comparison: valid sequential test vs rerun-every-round batch.
    null_reps = min(reps, 100)
    null_horizon = min(horizon, 100)
    taus = []
    for rep in range(null_reps):
        rng = replication_rng(seed + 1, rep)
        xs = null_model.sample(rng, null_horizon)
        tau = sequentialized_batch(
            null_model, xs, alpha=0.05, n_boot=BATCH_BOOT, rng=rng
        )
        taus.append(-1 if tau is None else tau)
    taus = np.asarray(taus)
    cfg = ScenarioConfig(
        name="seq_null",
        null_model=_gauss(0.0),
        data_model=_gauss(0.0),
        strategy="agrapa",
        horizon=null_horizon,
        replications=null_reps,
        seed=seed + 1,
    )
    seq_prop = run_scenario(cfg, n_jobs=n_jobs).rejection_proportion
    t_axis = np.arange(1, null_horizon + 1)
    batch_prop = ((taus[:, None] > 0) & (taus[:, None] <= t_axis[None, :])).mean(axis=0)
    rows = [
        [t_axis[i], float(batch_prop[i]), float(seq_prop[i])]
        for i in range(null_horizon)
    ]
    _write_rows(
        out / "non_validity.csv",
        ["t", "sequentialized_batch", "sequential"],
        rows,
    )


def suite_composite(out, reps=1000, horizon=100, seed=0, full=False, n_jobs=1):
    """Minimum-wealth tests over two RBM families, data from the base RBM:
    a family containing the truth (must not reject) and one that does not."""
    out = Path(out)
    base = _rbm(full)
    shifted = _rbm(full, weight_shift=0.5)
    biased = _rbm(full, visible_bias=1.0)
    cases = [
        ("contains_truth", [base, shifted]),
        ("excludes_truth", [shifted, biased]),
    ]
    for name, family in cases:
        cfg = ScenarioConfig(
            name=f"composite_{name}",
            data_model=base,
            composite=family,
            strategy="agrapa",
            horizon=horizon,
            replications=reps,
            seed=seed,
        )
        run_scenario(cfg, out / name, n_jobs=n_jobs)


def suite_bound_tightness(out, reps=1000, horizon=100, seed=0, full=False, n_jobs=1):
    """Growth under floors loosened by k in {1, 2, 3, 4}; slopes shrink in k."""
    out = Path(out)
    slope_rows = []
    for theta in (0.5, 0.75, 1.0):
        for k in (1.0, 2.0, 3.0, 4.0):
            cfg = ScenarioConfig(
                name=f"theta_{theta}_k_{int(k)}",
                null_model=_gauss(0.0),
                data_model=_gauss(theta),
                strategy="agrapa",
                horizon=horizon,
                replications=reps,
                seed=seed,
                bound_scale=k,
            )
            result = run_scenario(cfg, out / f"theta_{theta}" / f"k_{int(k)}", n_jobs=n_jobs)
            mean_lw = summarize(result)["mean_log_wealth"]
            burn = min(20, horizon - 2)
            t = np.arange(burn + 1, horizon + 1)
            slope = float(np.polyfit(t, mean_lw[burn:], 1)[0])
            slope_rows.append([theta, int(k), slope])
    _write_rows(out / "slopes.csv", ["theta", "k", "slope"], slope_rows)


def suite_ons_compare(out, reps=1000, horizon=100, seed=0, full=False, n_jobs=1):
    """aGRAPA vs the online-Newton-step baseline on all four alternatives."""
    _wealth_suite(
        _alternative_pairs(full), out, reps, horizon, seed, ("agrapa", "ons"), n_jobs
    )


def suite_stopping_bound(
    out, reps=500, horizon=2000, seed=0, full=False, n_jobs=1
):
    """Empirical stopping times against log(1/alpha)/r* over a shift grid."""
    out = Path(out)
    rows = []
    for theta in (0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0):
        null_model = build_model(_gauss(0.0))
        data_model = build_model(_gauss(theta))
        est = estimate_r_star(
            null_model,
            data_model,
            n_outer=20_000,
            n_inner=5_000,
            rng=replication_rng(seed, 10_000),
        )
        for strategy in ("lbow", "agrapa"):
            summary = stopping_bound_check(
                null_model,
                data_model,
                est.r_star,
                strategy=strategy,
                alpha=0.05,
                reps=reps,
                max_horizon=horizon,
                rng=replication_rng(seed, 20_000),
            )
            rows.append(
                [
                    theta,
                    est.r_star,
                    summary.bound,
                    strategy,
                    summary.mean_tau,
                    summary.lo_tau,
                    summary.hi_tau,
                    summary.n_rejected,
                ]
            )
    _write_rows(
        out / "stopping_bound.csv",
        ["theta", "r_star", "bound", "strategy", "mean_tau", "lo_tau", "hi_tau", "n_rejected"],
        rows,
    )


SUITES = {
    "gaussian_alt": suite_gaussian_alt,
    "intractable_alt": suite_intractable_alt,
    "rbm_shiftB": suite_rbm_shiftB,
    "rbm_bias": suite_rbm_bias,
    "type1": suite_type1,
    "batch_vs_seq": suite_batch_vs_seq,
    "composite": suite_composite,
    "bound_tightness": suite_bound_tightness,
    "ons_compare": suite_ons_compare,
    "stopping_bound": suite_stopping_bound,
}


def run_suite(
    name: str,
    out_dir,
    reps: int | None = None,
    horizon: int | None = None,
    seed: int = 0,
    full: bool = False,
    n_jobs: int = 1,
) -> Path:
    """Run one named suite into ``out_dir/name``; returns the bundle path."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    out = Path(out_dir) / name
    kwargs = {"seed": seed, "full": full, "n_jobs": n_jobs}
    if reps is not None:
        kwargs["reps"] = reps
    if horizon is not None:
        kwargs["horizon"] = horizon
    SUITES[name](out, **kwargs)
    return out
