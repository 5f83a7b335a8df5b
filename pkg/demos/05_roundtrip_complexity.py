#!/usr/bin/env python3
"""Round-trip complexity: d*log^2(d) for standard spacing, d for quanta.

A round trip runs from the sampling temperature up to the leap point and
back.  Its mean step count, normalised by the predicted growth rate,
should be flat across dimensions -- which normalisation is flat is the
complexity statement.
"""

import math

import alpslab as al
from alpslab import Spacing, harness

target = al.MixtureTarget(
    modes=(al.ModeSpec(lam=1.0, r=1.0, weight=0.5),
           al.ModeSpec(lam=1.0, r=2.0, weight=0.5)),
    dimension=64)

dims = (16, 64, 256, 1024)

print("standard spacing (exact energy-statistic acceptance):")
rows = harness.complexity_scan(target, dims, Spacing.standard(),
                               replicas=48, seed=5, trips_per_lane=8)
print(f"{'d':>6} {'k':>4} {'trips':>6} {'mean steps':>11} "
      f"{'T/(d log^2 d)':>14} {'T/d':>8}")
for r in rows:
    print(f"{r.d:>6} {r.k:>4} {r.n_trips:>6} {r.mean_steps:>11.0f} "
          f"{r.ratio_dlog2:>14.3f} {r.ratio_d:>8.2f}")
print(f"spread of T/(d log^2 d): "
      f"{harness.ratio_spread(rows, 'ratio_dlog2'):.3f}  (flat <= 2)")

print("\nquanta spacing, exponent 3 (limiting acceptance probabilities):")
rows_q = harness.complexity_scan(target, dims, Spacing.quanta(3.0),
                                 replicas=48, seed=5, trips_per_lane=8)
for r in rows_q:
    print(f"{r.d:>6} {r.k:>4} {r.n_trips:>6} {r.mean_steps:>11.0f} "
          f"{r.ratio_dlog2:>14.3f} {r.ratio_d:>8.2f}")
print(f"spread of T/d: {harness.ratio_spread(rows_q, 'ratio_d'):.3f}  "
      "(flat <= 2, while T/(d log^2 d) keeps falling)")

# the h(betamax)^2 scaling behind the rates, at fixed d
d, bmax = 256, 64.0
r1 = harness.complexity_scan(target, (d, d), Spacing.standard(), replicas=32,
                             seed=6, trips_per_lane=8,
                             betamax_factor=bmax / d)[0]
r2 = harness.complexity_scan(target, (d, d), Spacing.standard(), replicas=32,
                             seed=7, trips_per_lane=8,
                             betamax_factor=2 * bmax / d)[0]
predicted = (math.log(2 * bmax) / math.log(bmax)) ** 2
print(f"\ndoubling betamax at d={d}: trip-length factor "
      f"{r2.mean_steps / r1.mean_steps:.3f}, "
      f"(h(2b)/h(b))^2 predicts {predicted:.3f}")
