"""Command-line entry points.

Subcommands:
    test      stream a data file through a sequential test, print verdict
    simulate  run a scenario config file, write a CSV bundle
    suite     run a named experiment suite
    rstar     Monte-Carlo growth-rate estimate for a model pair
    type1-is  importance-sampling estimate of the rejection probability
    batch     fixed-sample-size test on a data file
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .batch import batch_ksd_test
from .betting import STRATEGIES, SequentialTest
from .config import ScenarioConfig, load_model_file, load_scenario
from .diagnostics import estimate_r_star, importance_type1
from .errors import ConfigError
from .io import load_points, write_trajectory
from .runner import run_scenario
from .suites import SUITES, run_suite


def _resolve_scale(args, opts) -> float:
    """Explicit --bound-scale wins; else the model file's; else 1."""
    if args.bound_scale is not None:
        return args.bound_scale
    if opts["bound_scale"] is not None:
        return float(opts["bound_scale"])
    return 1.0


def _add_common(p):
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--bound-scale",
        type=float,
        default=None,
        help="floor multiplier >= 1 (default: model file's bound_scale, else 1)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinbet",
        description="Sequential goodness-of-fit testing for unnormalized densities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run a sequential test over a stream file")
    p.add_argument("--model", required=True, help="model spec JSON file")
    p.add_argument("--data", required=True, help="CSV or JSONL stream, one point per row")
    p.add_argument("--strategy", choices=STRATEGIES, default="agrapa")
    p.add_argument("--const-bet", type=float, default=0.5)
    p.add_argument("--out", default=None, help="write per-round records to this CSV")
    _add_common(p)

    p = sub.add_parser("simulate", help="run a scenario config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--n-jobs", type=int, default=1)

    p = sub.add_parser("suite", help="run a named experiment suite")
    p.add_argument("name", choices=sorted(SUITES))
    p.add_argument("--out", required=True)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--full", action="store_true", help="full-size RBM experiments")
    p.add_argument("--n-jobs", type=int, default=1)

    p = sub.add_parser("rstar", help="estimate the wealth growth rate")
    p.add_argument("--null", required=True, dest="null_spec")
    p.add_argument("--data", required=True, dest="data_spec")
    p.add_argument("--n-outer", type=int, default=100_000)
    p.add_argument("--n-inner", type=int, default=10_000)
    _add_common(p)

    p = sub.add_parser("type1-is", help="importance-sampling type-I estimate")
    p.add_argument("--null", required=True, dest="null_spec")
    p.add_argument("--proposal", required=True, dest="proposal_spec")
    p.add_argument("--strategy", choices=STRATEGIES, default="agrapa")
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--horizon", type=int, default=1000)
    _add_common(p)
    p.set_defaults(alpha=0.1)

    p = sub.add_parser("batch", help="fixed-sample-size test on a data file")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--boot", type=int, default=300)
    _add_common(p)

    return parser


def cmd_test(args) -> int:
    model, opts = load_model_file(args.model)
    xs = load_points(args.data)
    test = SequentialTest(
        model,
        strategy=args.strategy,
        alpha=args.alpha,
        bound_scale=_resolve_scale(args, opts),
        const_bet=args.const_bet,
    )
    records = test.run(xs)
    if args.out:
        write_trajectory(args.out, records)
    if test.rejected:
        print(f"reject at round {test.rejected_at} (wealth {test.wealth:.4g} >= {1/args.alpha:.4g})")
    else:
        print(f"no rejection in {test.t} rounds (wealth {test.wealth:.4g} < {1/args.alpha:.4g})")
    return 0


def cmd_simulate(args) -> int:
    cfg = load_scenario(args.config)
    if args.reps is not None:
        cfg = ScenarioConfig.from_dict({**cfg.to_dict(), "replications": args.reps})
    result = run_scenario(cfg, out_dir=args.out, n_jobs=args.n_jobs)
    rejected = int((result.taus > 0).sum())
    print(f"{cfg.name}: {rejected}/{cfg.replications} replications rejected; bundle at {args.out}")
    return 0


def cmd_suite(args) -> int:
    out = run_suite(
        args.name,
        args.out,
        reps=args.reps,
        horizon=args.horizon,
        seed=args.seed,
        full=args.full,
        n_jobs=args.n_jobs,
    )
    print(f"suite {args.name} written to {out}")
    return 0


def cmd_rstar(args) -> int:
    null_model, null_opts = load_model_file(args.null_spec, "null")
    data_model, data_opts = load_model_file(args.data_spec, "data")
    est = estimate_r_star(
        null_model,
        data_model,
        n_outer=args.n_outer,
        n_inner=args.n_inner,
        rng=np.random.default_rng(args.seed),
        bound_scale=_resolve_scale(args, null_opts),
        burn_in=data_opts["burn_in"] if data_opts["burn_in"] is not None else 1000,
        thin=data_opts["thin"] if data_opts["thin"] is not None else 1,
    )
    print(
        f"mean_g={est.mean_g:.6g} (se {est.se_mean_g:.2g})  "
        f"mean_g2={est.mean_g2:.6g} (se {est.se_mean_g2:.2g})  "
        f"r_star={est.r_star:.6g}"
    )
    if not est.positive_drift:
        print("warning: nonpositive payoff mean; no growth predicted")
    return 0


def cmd_type1_is(args) -> int:
    null_model, null_opts = load_model_file(args.null_spec, "null")
    proposal_model, _ = load_model_file(args.proposal_spec, "proposal")
    est = importance_type1(
        null_model,
        proposal_model,
        alpha=args.alpha,
        reps=args.reps,
        horizon=args.horizon,
        rng=np.random.default_rng(args.seed),
        strategy=args.strategy,
        bound_scale=_resolve_scale(args, null_opts),
    )
    print(
        f"P(reject) estimate {est.estimate:.6g} (se {est.se:.2g}) "
        f"from {est.n_rejected}/{est.reps} rejecting proposal streams"
    )
    return 0


def cmd_batch(args) -> int:
    model, _ = load_model_file(args.model)
    xs = load_points(args.data)
    res = batch_ksd_test(
        model, xs, alpha=args.alpha, n_boot=args.boot,
        rng=np.random.default_rng(args.seed),
    )
    verdict = "reject" if res.reject else "no rejection"
    print(f"n={res.n} statistic={res.statistic:.6g} p={res.p_value:.4g} -> {verdict}")
    return 0


_COMMANDS = {
    "test": cmd_test,
    "simulate": cmd_simulate,
    "suite": cmd_suite,
    "rstar": cmd_rstar,
    "type1-is": cmd_type1_is,
    "batch": cmd_batch,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
