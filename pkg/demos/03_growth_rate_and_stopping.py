#!/usr/bin/env python3
"""Predicting how long the test needs: the growth rate r*.

Under an alternative, log wealth grows linearly at (at least) the rate r*
computable from the first two moments of the limiting payoff, so rejection
arrives around log(1/alpha) / r* rounds.  We estimate r* by nested Monte
Carlo for a few mean shifts and compare the predicted ceiling with the
stopping times actually realized by the LBOW and aGRAPA strategies.
"""

import numpy as np

from steinbet import GaussianModel, estimate_r_star, stopping_bound_check

alpha = 0.05
null_model = GaussianModel(mean=[0.0])
rng = np.random.default_rng(3)

print(f"{'shift':>6} {'r*':>8} {'bound':>7} | {'lbow tau':>9} {'agrapa tau':>11}")
for shift in (0.5, 0.75, 1.0):
    data_model = GaussianModel(mean=[shift])
    est = estimate_r_star(
        null_model, data_model, n_outer=20_000, n_inner=5_000, rng=rng
    )
    taus = {}
    for strategy in ("lbow", "agrapa"):
        summary = stopping_bound_check(
            null_model,
            data_model,
            est.r_star,
            strategy=strategy,
            alpha=alpha,
            reps=200,
            rng=np.random.default_rng(4),
        )
        taus[strategy] = summary.mean_tau
    bound = np.log(1 / alpha) / est.r_star
    print(
        f"{shift:>6.2f} {est.r_star:>8.4f} {bound:>7.1f} | "
        f"{taus['lbow']:>9.1f} {taus['agrapa']:>11.1f}"
    )

print("\nmean stopping times sit below the log(1/alpha)/r* ceiling, and the")
print("more aggressive aGRAPA strategy stops earlier than LBOW.")
