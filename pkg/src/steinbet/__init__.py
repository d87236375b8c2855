"""Anytime-valid goodness-of-fit tests for unnormalized densities.

The package pairs a score-based reproducing kernel with a betting-style
wealth process: payoffs are history-averaged kernel evaluations normalized
by per-model floor functions, so the wealth is a nonnegative martingale
under the null and the test may be monitored and stopped at any time while
controlling the type-I error.  Gaussian, tanh-perturbed Gaussian, and
Gaussian-Bernoulli RBM targets ship with closed-form scores and floors,
alongside a fixed-sample-size baseline, growth-rate diagnostics, and a
replicated simulation harness.
"""

from .batch import BatchResult, batch_ksd_test, sequentialized_batch
from .betting import (
    BettingAccumulators,
    CompositeTest,
    OnsState,
    SequentialTest,
    TrajectoryRecord,
    next_bet,
    ons_bet,
)
from .config import (
    ScenarioConfig,
    build_model,
    load_scenario,
    model_spec,
    replication_rng,
    scenario_hash,
)
from .diagnostics import (
    ImportanceEstimate,
    RStarEstimate,
    StoppingSummary,
    estimate_r_star,
    importance_type1,
    stopping_bound_check,
    stopping_time_bound,
)
from .errors import ConfigError, EngineError, ModelError, SamplerError
from .io import load_points, read_trajectory, write_trajectory
from .kernels import SteinKernel, imq_cross_divergence, imq_eval, imq_grad_x
from .models import (
    GaussianBernoulliRbm,
    GaussianModel,
    IntractableModel,
    sample,
    structured_rbm,
)
from .runner import ScenarioResult, run_replication, run_scenario, summarize
from .suites import SUITES, run_suite

__version__ = "0.1.0"

__all__ = [
    "BatchResult",
    "BettingAccumulators",
    "CompositeTest",
    "ConfigError",
    "EngineError",
    "GaussianBernoulliRbm",
    "GaussianModel",
    "ImportanceEstimate",
    "IntractableModel",
    "ModelError",
    "OnsState",
    "RStarEstimate",
    "SUITES",
    "SamplerError",
    "ScenarioConfig",
    "ScenarioResult",
    "SequentialTest",
    "SteinKernel",
    "StoppingSummary",
    "TrajectoryRecord",
    "batch_ksd_test",
    "build_model",
    "estimate_r_star",
    "imq_cross_divergence",
    "imq_eval",
    "imq_grad_x",
    "importance_type1",
    "load_points",
    "load_scenario",
    "model_spec",
    "next_bet",
    "ons_bet",
    "read_trajectory",
    "replication_rng",
    "run_suite",
    "run_replication",
    "run_scenario",
    "sample",
    "scenario_hash",
    "sequentialized_batch",
    "stopping_bound_check",
    "stopping_time_bound",
    "structured_rbm",
    "summarize",
    "write_trajectory",
]
