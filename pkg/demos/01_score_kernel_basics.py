#!/usr/bin/env python3
"""A first look at the score-based kernel and its payoff floor.

The kernel h(x, y) combines the IMQ base kernel with the score of a target
density; its expectation under the target is zero, yet for a unit Gaussian
the diagonal h(x, x) = x^2 + 1 is unbounded.  What makes sequential betting
possible anyway is that for a FIXED y the map x -> h(x, y) is bounded below
by a computable floor -M(y).
"""

import numpy as np

from steinbet import GaussianModel, SteinKernel

model = GaussianModel(mean=[0.0])
kernel = SteinKernel(model)

print("diagonal h(x, x) vs x^2 + 1 (unbounded in x):")
for x in (0.0, 1.0, 2.0, 4.0):
    print(f"  x = {x:4.1f}: h = {kernel([x], [x]):8.3f}   x^2 + 1 = {x * x + 1:8.3f}")

print("\nzero mean under the target (Monte Carlo, 100k draws):")
rng = np.random.default_rng(0)
draws = model.sample(rng, 100_000)
for y in (0.0, 1.5, 3.0):
    vals = kernel.cross(draws, np.array([[y]]))[:, 0]
    print(f"  y = {y:3.1f}: mean h(X, y) = {vals.mean():+.5f} "
          f"(se {vals.std() / np.sqrt(len(vals)):.5f})")

print("\nper-point floors M(y) with the worst kernel value found by probing:")
probes = np.linspace(-60.0, 60.0, 200_001)[:, None]
for y in (0.0, 1.0, 3.0):
    floor = model.payoff_bound([y])
    worst = kernel.cross(probes, np.array([[y]])).min()
    print(f"  y = {y:3.1f}: inf_x h(x, y) ~ {worst:8.4f}  >=  -M(y) = {-floor:8.4f}")
