"""Experiment suites at toy replication counts: files, schemas, behaviors."""

import csv

import numpy as np
import pytest

from steinbet.io import read_trajectory
from steinbet.suites import SUITES, run_suite


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_unknown_suite_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("nope", tmp_path)


def test_suite_registry_complete():
    assert set(SUITES) == {
        "gaussian_alt",
        "intractable_alt",
        "rbm_shiftB",
        "rbm_bias",
        "type1",
        "batch_vs_seq",
        "composite",
        "bound_tightness",
        "ons_compare",
        "stopping_bound",
    }


def test_gaussian_alt_bundle_and_monotone_growth(tmp_path):
    out = run_suite("gaussian_alt", tmp_path, reps=40, horizon=60, seed=0)
    for strategy in ("agrapa", "lbow"):
        rows = _read_csv(out / "gaussian" / strategy / "summary.csv")
        assert len(rows) == 60
        mean_lw = np.array([float(r["mean_log_wealth"]) for r in rows])
        # growth: increasing in the large, final level clearly positive
        assert mean_lw[-1] > 2.0
        assert np.mean(np.diff(mean_lw) > 0) > 0.8


def test_type1_suite_keeps_wealth_flat(tmp_path):
    out = run_suite("type1", tmp_path, reps=30, horizon=40, seed=0)
    rows = _read_csv(out / "gaussian" / "agrapa" / "summary.csv")
    assert float(rows[-1]["rejection_proportion"]) <= 0.05
    stopping = _read_csv(out / "rbm" / "lbow" / "stopping.csv")
    assert all(int(r["tau"]) == -1 for r in stopping)


def test_bound_tightness_slopes_decrease(tmp_path):
    out = run_suite("bound_tightness", tmp_path, reps=60, horizon=80, seed=0)
    rows = _read_csv(out / "slopes.csv")
    by_theta = {}
    for r in rows:
        by_theta.setdefault(float(r["theta"]), []).append(
            (int(r["k"]), float(r["slope"]))
        )
    for theta, pairs in by_theta.items():
        slopes = [s for _, s in sorted(pairs)]
        assert all(a > b for a, b in zip(slopes, slopes[1:])), (theta, slopes)


def test_stopping_bound_suite_schema(tmp_path):
    out = run_suite("stopping_bound", tmp_path, reps=20, seed=0)
    rows = _read_csv(out / "stopping_bound.csv")
    assert {r["strategy"] for r in rows} == {"agrapa", "lbow"}
    for r in rows:
        if int(r["n_rejected"]) > 0:
            assert float(r["mean_tau"]) <= float(r["bound"]) * 1.5


def test_batch_vs_seq_files(tmp_path):
    out = run_suite("batch_vs_seq", tmp_path, reps=8, horizon=40, seed=0)
    batch = _read_csv(out / "batch_curve.csv")
    seq = _read_csv(out / "sequential_curve.csv")
    nv = _read_csv(out / "non_validity.csv")
    assert {r["method"] for r in batch} == {"batch"}
    assert {r["method"] for r in seq} == {"sequential"}
    assert len(nv) == 40
    for r in batch:
        assert 0.0 <= float(r["rejection_rate"]) <= 1.0


def test_composite_suite_cases(tmp_path):
    out = run_suite("composite", tmp_path, reps=10, horizon=30, seed=0)
    contains = _read_csv(out / "contains_truth" / "summary.csv")
    assert float(contains[-1]["rejection_proportion"]) <= 0.1
    rows = read_trajectory(out / "excludes_truth" / "trajectories.csv")
    assert len(rows) == 10 * 30


def test_ons_compare_agrapa_dominates(tmp_path):
    out = run_suite(
        "ons_compare", tmp_path, reps=30, horizon=60, seed=0
    )
    final = {}
    for strategy in ("agrapa", "ons"):
        rows = _read_csv(out / "gaussian" / strategy / "summary.csv")
        final[strategy] = float(rows[-1]["mean_log_wealth"])
    assert final["agrapa"] > final["ons"]
