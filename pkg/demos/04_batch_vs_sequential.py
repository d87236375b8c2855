#!/usr/bin/env python3
"""Why commit to a sample size?  Batch vs sequential on the same problem.

The fixed-n test is sharp when n is chosen well and useless when it is not,
and rerunning it as data trickles in silently destroys its error guarantee.
The betting test spends observations adaptively: it stops early on easy
problems and keeps going on hard ones, with the type-I guarantee intact at
every round.
"""

import numpy as np

from steinbet import (
    GaussianModel,
    SequentialTest,
    batch_ksd_test,
    replication_rng,
    sequentialized_batch,
)

alpha = 0.05
null_model = GaussianModel(mean=[0.0])
data_model = GaussianModel(mean=[0.45])
reps = 100

print("fixed-n batch test, rejection rate over 100 replications:")
for n in (20, 100, 400):
    hits = 0
    for rep in range(reps):
        rng = replication_rng(0, rep)
        hits += batch_ksd_test(
            null_model, data_model.sample(rng, n), alpha=alpha, rng=rng
        ).reject
    print(f"  n = {n:>3}: {hits / reps:.2f}")

print("\nsequential test on the same streams, stopping when it is sure:")
taus = []
for rep in range(reps):
    rng = replication_rng(0, rep)
    test = SequentialTest(null_model, alpha=alpha)
    test.run(data_model.sample(rng, 600), stop_on_rejection=True)
    taus.append(test.rejected_at if test.rejected else -1)
taus = np.array(taus)
print(f"  rejected {np.mean(taus > 0):.2f} of streams within 600 rounds;")
print(f"  stopping times: median {np.median(taus[taus > 0]):.0f}, "
      f"90th percentile {np.percentile(taus[taus > 0], 90):.0f}")

print("\nnaively rerunning the batch test after every observation (null data):")
hits = 0
for rep in range(reps):
    rng = replication_rng(1, rep)
    stream = null_model.sample(rng, 100)
    hits += sequentialized_batch(null_model, stream, alpha=alpha, rng=rng) is not None
print(f"  false rejection rate by round 100: {hits / reps:.2f} "
      f"(nominal level {alpha})")
