"""Wealth-process tests driven by score-kernel payoffs.

A :class:`SequentialTest` observes a stream X_1, X_2, ... and maintains the
wealth

    K_t = K_{t-1} * (1 + lam_t * g_t(X_t)),     K_0 = 1,

where the payoff at round t >= 2 averages the score kernel against the
history and normalizes by the running average of the payoff floors,

    g_t(x) = sum_{i<t} h(X_i, x) / sum_{i<t} M(X_i),

so g_t >= -1 whenever the floor is valid.  The betting fraction lam_t is
predictable: it is computed from payoffs of earlier rounds only, before the
round-t payoff enters the accumulators.  The null is rejected the first time
K_t reaches 1/alpha; rejection is decided on the log scale so long winning
streaks cannot overflow.

Round 1 has no history, so its payoff is recorded as 0 and no bet is placed
(both shipped strategies start at lam = 0 anyway); real betting begins at
round 2.

A :class:`CompositeTest` runs one member test per candidate model on the
shared stream and rejects when the *minimum* member wealth reaches 1/alpha,
which is conservative for the composite null.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EngineError
from .kernels import SteinKernel

__all__ = [
    "STRATEGIES",
    "BettingAccumulators",
    "next_bet",
    "OnsState",
    "ons_bet",
    "TrajectoryRecord",
    "SequentialTest",
    "CompositeTest",
]

STRATEGIES = ("agrapa", "lbow", "ons", "const")

# Online-Newton-step tuning: gradient z_t = g_t / (1 + lam_t g_t), curvature
# A_t = 1 + sum z_i^2, update lam <- clip(lam + (2 / (2 - ln 3)) z_t / A_t)
# projected onto [0, 1/2].
ONS_STEP = 2.0 / (2.0 - math.log(3.0))
ONS_MAX_BET = 0.5


@dataclass
class BettingAccumulators:
    """Running first and second moments of observed payoffs."""

    g_sum: float = 0.0
    g2_sum: float = 0.0
    count: int = 0

    def update(self, g: float) -> None:
        self.g_sum += g
        self.g2_sum += g * g
        self.count += 1


def next_bet(strategy: str, acc: BettingAccumulators) -> float:
    """Betting fraction entering the next round, from past payoffs only.

    ``agrapa`` plays mean(g) / mean(g^2) clipped to [0, 1]; ``lbow`` plays
    mean(g) / (mean(g) + mean(g^2)), floored at 0, which stays below 1 and
    admits a growth-rate guarantee.  With no payoffs yet, or a nonpositive
    payoff mean, both sit out (bet 0).
    """
    if strategy not in ("agrapa", "lbow"):
        raise ValueError(f"unknown moment-based strategy {strategy!r}")
    if acc.count == 0:
        return 0.0
    mean = acc.g_sum / acc.count
    mean2 = acc.g2_sum / acc.count
    if mean <= 0.0 or mean2 <= 0.0:
        return 0.0
    if strategy == "agrapa":
        return min(1.0, mean / mean2)
    return mean / (mean + mean2)


@dataclass
class OnsState:
    """State of the online-Newton-step baseline: current bet and curvature."""

    bet: float = 0.0
    curvature: float = 1.0


def ons_bet(state: OnsState, payoff: float) -> OnsState:
    """One ONS update; the returned bet is always within [0, 1/2]."""
    z = payoff / (1.0 + state.bet * payoff)
    curvature = state.curvature + z * z
    lam = state.bet + ONS_STEP * z / curvature
    return OnsState(min(ONS_MAX_BET, max(0.0, lam)), curvature)


@dataclass
class TrajectoryRecord:
    """Per-round log entry: what was bet, what paid, where the wealth stands."""

    t: int
    payoff: float
    bet: float
    wealth: float
    log_wealth: float
    rejected: bool


def _safe_exp(v: float) -> float:
    try:
        return math.exp(v)
    except OverflowError:
        return math.inf


def _stream_rows(xs, dim: int) -> np.ndarray:
    """Coerce a stream to (n, d); a flat vector is n points when d == 1."""
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 1:
        xs = xs.reshape(-1, 1) if dim == 1 else xs.reshape(1, -1)
    return xs


class _Better:
    """Predictable bet selection; payoffs are fed in only after betting."""

    def __init__(self, strategy: str, const_bet: float):
        if strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
        if strategy == "const" and not 0.0 <= const_bet <= 1.0:
            raise ValueError(f"constant bet must lie in [0, 1], got {const_bet}")
        self.strategy = strategy
        self.const_bet = const_bet
        self.acc = BettingAccumulators()
        self._ons = OnsState()

    def bet(self) -> float:
        if self.strategy == "const":
            return self.const_bet
        if self.strategy == "ons":
            return self._ons.bet
        return next_bet(self.strategy, self.acc)

    def update(self, payoff: float) -> None:
        self.acc.update(payoff)
        if self.strategy == "ons":
            self._ons = ons_bet(self._ons, payoff)


class SequentialTest:
    """Anytime-valid goodness-of-fit test for one target model.

    Parameters
    ----------
    model:
        Score model for the null density (see :mod:`steinbet.models`).
    strategy:
        ``"agrapa"`` (default), ``"lbow"``, ``"ons"``, or ``"const"``.
    alpha:
        Rejection level in (0, 1); the wealth target is 1/alpha.
    bound_scale:
        Multiplier >= 1 applied to the payoff floor M; looser floors shrink
        every payoff by exactly that factor.
    const_bet:
        Fixed fraction used by the ``"const"`` strategy.

    State is single-writer mutable; run independent replications on separate
    instances.
    """

    def __init__(
        self,
        model,
        strategy: str = "agrapa",
        alpha: float = 0.05,
        bound_scale: float = 1.0,
        const_bet: float = 0.5,
    ):
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {alpha}")
        if not np.isfinite(bound_scale) or bound_scale < 1.0:
            raise ValueError(f"bound_scale must be >= 1, got {bound_scale}")
        self.model = model
        self.kernel = SteinKernel(model)
        self.alpha = float(alpha)
        self.bound_scale = float(bound_scale)
        self.better = _Better(strategy, const_bet)
        self.log_threshold = -math.log(alpha)
        self.t = 0
        self.bet = 0.0
        self.log_wealth = 0.0
        self.rejected_at: int | None = None
        self._xs: list[np.ndarray] = []
        self._scores: list[np.ndarray] = []
        self._m_sum = 0.0  # unscaled floor sum; the scale divides the payoff

    @property
    def strategy(self) -> str:
        return self.better.strategy

    @property
    def wealth(self) -> float:
        return _safe_exp(self.log_wealth)

    @property
    def rejected(self) -> bool:
        return self.rejected_at is not None

    @property
    def m_sum(self) -> float:
        """Running sum of (unscaled) payoff floors over the history."""
        return self._m_sum

    def payoff(self, x) -> float:
        """g_t evaluated at a candidate point, without touching state.

        Requires at least one observed point; round 1 must be special-cased
        by the caller (``step`` does this).
        """
        if self.t < 1:
            raise EngineError("payoff is undefined before any point is observed")
        x = np.asarray(x, dtype=float).reshape(1, -1)
        row = self.kernel.cross(
            np.asarray(self._xs),
            x,
            score_x=np.asarray(self._scores),
            score_y=self.model.score(x),
        )
        return float(row.sum()) / self._m_sum / self.bound_scale

    def step(self, x) -> TrajectoryRecord:
        """Process one observation; returns the round's record.

        The bet for the round is fixed from past payoffs before the new
        point is used in any way.
        """
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.model.dim:
            raise ValueError(
                f"point dimension {x.size} != model dimension {self.model.dim}"
            )
        if not np.isfinite(x).all():
            raise ValueError("observation has non-finite coordinates")
        self.t += 1
        if self.t == 1:
            g = 0.0
            self.bet = 0.0
        else:
            self.bet = self.better.bet()
            g = self.payoff(x)
            if not math.isfinite(g):
                raise EngineError(f"non-finite payoff at round {self.t}")
            factor = 1.0 + self.bet * g
            if factor <= 0.0:
                self.log_wealth = -math.inf  # wealth absorbed at zero
            else:
                self.log_wealth += math.log(factor)
            self.better.update(g)
        self._xs.append(x)
        self._scores.append(np.asarray(self.model.score(x), dtype=float))
        self._m_sum += float(self.model.payoff_bound(x))
        if self.rejected_at is None and self.log_wealth >= self.log_threshold:
            self.rejected_at = self.t
        return TrajectoryRecord(
            t=self.t,
            payoff=g,
            bet=self.bet,
            wealth=self.wealth,
            log_wealth=self.log_wealth,
            rejected=self.rejected,
        )

    def run(self, xs, stop_on_rejection: bool = False) -> list[TrajectoryRecord]:
        """Step through a whole stream; optionally stop once rejected."""
        records = []
        for x in _stream_rows(xs, self.model.dim):
            records.append(self.step(x))
            if stop_on_rejection and self.rejected:
                break
        return records


class CompositeTest:
    """Minimum-wealth test over a finite family of candidate models.

    Every member sees every observation; the reported wealth is the minimum
    across members, and the composite rejects when that minimum reaches
    1/alpha.  Records carry the payoff and bet of the member attaining the
    minimum.
    """

    def __init__(
        self,
        models,
        strategy: str = "agrapa",
        alpha: float = 0.05,
        bound_scale: float = 1.0,
        const_bet: float = 0.5,
    ):
        models = list(models)
        if not models:
            raise ValueError("candidate family must not be empty")
        self.members = [
            SequentialTest(m, strategy, alpha, bound_scale, const_bet) for m in models
        ]
        self.alpha = float(alpha)
        self.log_threshold = -math.log(alpha)
        self.t = 0
        self.rejected_at: int | None = None

    @property
    def log_wealth(self) -> float:
        return min(m.log_wealth for m in self.members)

    @property
    def wealth(self) -> float:
        return _safe_exp(self.log_wealth)

    @property
    def rejected(self) -> bool:
        return self.rejected_at is not None

    def step(self, x) -> TrajectoryRecord:
        recs = [m.step(x) for m in self.members]
        self.t += 1
        low = min(range(len(recs)), key=lambda i: recs[i].log_wealth)
        if self.rejected_at is None and recs[low].log_wealth >= self.log_threshold:
            self.rejected_at = self.t
        return TrajectoryRecord(
            t=self.t,
            payoff=recs[low].payoff,
            bet=recs[low].bet,
            wealth=recs[low].wealth,
            log_wealth=recs[low].log_wealth,
            rejected=self.rejected,
        )

    def run(self, xs, stop_on_rejection: bool = False) -> list[TrajectoryRecord]:
        records = []
        for x in _stream_rows(xs, self.members[0].model.dim):
            records.append(self.step(x))
            if stop_on_rejection and self.rejected:
                break
        return records
