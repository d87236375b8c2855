"""Estimators for the growth rate, stopping-time bound, and type-I error.

Under an alternative Q, the long-run slope of the log wealth under the LBOW
strategy is at least

    r* = (E[g*(X)])^2 / 2 / (E[g*(X)] + E[(g*(X))^2]),
    g*(x) = E[h(X, x)] / E[M(X)],        X ~ Q,

and the stopping time is roughly log(1/alpha) / r*.  Both moments are
estimated by nested Monte Carlo: an inner pool from Q approximates the
conditional mean payoff g*, an outer sample from Q averages it.

``importance_type1`` estimates the probability that the sequential test ever
rejects under the null P by sampling streams from a different distribution Q
and reweighting by the likelihood-ratio prefix at the stopping time; direct
simulation under P would essentially never reject, making the plain Monte
Carlo estimate uninformative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .betting import SequentialTest
from .kernels import SteinKernel
from .models import GaussianModel, sample

__all__ = [
    "RStarEstimate",
    "estimate_r_star",
    "stopping_time_bound",
    "StoppingSummary",
    "stopping_bound_check",
    "ImportanceEstimate",
    "importance_type1",
]


@dataclass
class RStarEstimate:
    """Monte-Carlo estimate of the wealth growth rate and its ingredients."""

    mean_g: float
    mean_g2: float
    r_star: float
    n_outer: int
    n_inner: int
    se_mean_g: float
    se_mean_g2: float
    positive_drift: bool  # False forces r_star = 0: no growth predicted


def estimate_r_star(
    null_model,
    data_model,
    n_outer: int = 100_000,
    n_inner: int = 10_000,
    rng: np.random.Generator | None = None,
    bound_scale: float = 1.0,
    burn_in: int = 1000,
    thin: int = 1,
    chunk: int = 512,
) -> RStarEstimate:
    """Nested Monte-Carlo estimate of the growth rate r*.

    Draws an inner pool and an outer sample from ``data_model``; the inner
    pool supplies both the mean payoff floor and, per outer point x, the
    conditional mean kernel value approximating g*(x).  A nonpositive
    estimated payoff mean yields r_star = 0 with ``positive_drift=False``.
    """
    if n_outer < 1000 or n_inner < 1000:
        raise ValueError("Monte-Carlo sizes must be at least 1000")
    if rng is None:
        rng = np.random.default_rng()
    kernel = SteinKernel(null_model)
    pool = sample(data_model, rng, n_inner, burn_in=burn_in, thin=thin)
    pool_scores = null_model.score(pool)
    m_hat = float(np.mean(null_model.payoff_bound(pool)))
    outer = sample(data_model, rng, n_outer, burn_in=burn_in, thin=thin)

    g = np.empty(n_outer)
    for lo in range(0, n_outer, chunk):
        hi = min(lo + chunk, n_outer)
        block = kernel.cross(outer[lo:hi], pool, score_y=pool_scores)
        g[lo:hi] = block.mean(axis=1) / m_hat
    g /= bound_scale

    mean_g = float(g.mean())
    g2 = g * g
    mean_g2 = float(g2.mean())
    se_mean_g = float(g.std(ddof=1)) / math.sqrt(n_outer)
    se_mean_g2 = float(g2.std(ddof=1)) / math.sqrt(n_outer)
    positive = mean_g > 0.0
    r_star = 0.5 * mean_g * mean_g / (mean_g + mean_g2) if positive else 0.0
    return RStarEstimate(
        mean_g=mean_g,
        mean_g2=mean_g2,
        r_star=r_star,
        n_outer=n_outer,
        n_inner=n_inner,
        se_mean_g=se_mean_g,
        se_mean_g2=se_mean_g2,
        positive_drift=positive,
    )


def stopping_time_bound(alpha: float, r_star: float) -> float:
    """Leading-order stopping time log(1/alpha) / r*; 0 rounds as alpha -> 1."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if r_star <= 0.0:
        raise ValueError(f"r_star must be positive, got {r_star}")
    return math.log(1.0 / alpha) / r_star


@dataclass
class StoppingSummary:
    """Empirical stopping times of the test against the analytic bound."""

    mean_tau: float
    lo_tau: float
    hi_tau: float
    bound: float
    n_rejected: int
    reps: int
    max_horizon: int


def stopping_bound_check(
    null_model,
    data_model,
    r_star: float,
    strategy: str = "lbow",
    alpha: float = 0.05,
    reps: int = 500,
    max_horizon: int | None = None,
    rng: np.random.Generator | None = None,
    bound_scale: float = 1.0,
    burn_in: int = 1000,
    thin: int = 1,
) -> StoppingSummary:
    """Run replications to rejection and compare stopping times to the bound.

    Streams are capped at ``max_horizon`` (default: ten times the bound);
    capped replications are excluded from the stopping-time statistics but
    counted in ``reps - n_rejected``.
    """
    bound = stopping_time_bound(alpha, r_star)
    if max_horizon is None:
        max_horizon = max(100, int(10 * bound))
    if rng is None:
        rng = np.random.default_rng()
    taus = []
    for _ in range(reps):
        xs = sample(data_model, rng, max_horizon, burn_in=burn_in, thin=thin)
        test = SequentialTest(
            null_model, strategy=strategy, alpha=alpha, bound_scale=bound_scale
        )
        test.run(xs, stop_on_rejection=True)
        if test.rejected:
            taus.append(test.rejected_at)
    taus = np.asarray(taus, dtype=float)
    if taus.size == 0:
        return StoppingSummary(
            math.nan, math.nan, math.nan, bound, 0, reps, max_horizon
        )
    return StoppingSummary(
        mean_tau=float(taus.mean()),
        lo_tau=float(np.percentile(taus, 2.5)),
        hi_tau=float(np.percentile(taus, 97.5)),
        bound=bound,
        n_rejected=int(taus.size),
        reps=reps,
        max_horizon=max_horizon,
    )


@dataclass
class ImportanceEstimate:
    """Importance-sampling estimate of the rejection probability under P."""

    estimate: float
    se: float
    n_rejected: int
    reps: int
    horizon: int


def _gaussian_log_ratio(null_model, proposal_model, x: np.ndarray) -> np.ndarray:
    """log dP/dQ per row for two unit-covariance Gaussians."""
    dp = x - null_model.mean
    dq = x - proposal_model.mean
    return 0.5 * (
        np.einsum("ij,ij->i", dq, dq) - np.einsum("ij,ij->i", dp, dp)
    )


def importance_type1(
    null_model,
    proposal_model,
    alpha: float = 0.1,
    reps: int = 1000,
    horizon: int = 1000,
    rng: np.random.Generator | None = None,
    strategy: str = "agrapa",
    bound_scale: float = 1.0,
) -> ImportanceEstimate:
    """Estimate P(reject within ``horizon``) under the null by sampling from Q.

    Each stream is drawn from the proposal Q, run through the test against
    the null P, and contributes the likelihood-ratio product over the prefix
    observed up to its rejection round (zero if it never rejects).  Requires
    a closed-form density ratio; unit-covariance Gaussian pairs are shipped.
    """
    if not (
        isinstance(null_model, GaussianModel)
        and isinstance(proposal_model, GaussianModel)
    ):
        raise ValueError(
            "density ratio unavailable: importance sampling is shipped for "
            "Gaussian model pairs only"
        )
    if null_model.dim != proposal_model.dim:
        raise ValueError("null and proposal dimensions differ")
    if rng is None:
        rng = np.random.default_rng()
    weights = np.zeros(reps)
    n_rejected = 0
    for r in range(reps):
        xs = proposal_model.sample(rng, horizon)
        test = SequentialTest(
            null_model, strategy=strategy, alpha=alpha, bound_scale=bound_scale
        )
        test.run(xs, stop_on_rejection=True)
        if test.rejected:
            n_rejected += 1
            log_w = _gaussian_log_ratio(
                null_model, proposal_model, xs[: test.rejected_at]
            ).sum()
            weights[r] = math.exp(log_w)
    estimate = float(weights.mean())
    se = float(weights.std(ddof=1)) / math.sqrt(reps) if reps > 1 else math.nan
    return ImportanceEstimate(
        estimate=estimate,
        se=se,
        n_rejected=n_rejected,
        reps=reps,
        horizon=horizon,
    )
