#!/usr/bin/env python3
"""The limiting reference process: reflecting skew Brownian motion.

Simulated as a lattice random walk: steps of +-sqrt(dt) with a skewed
coin only at the origin and folding reflection at the two boundaries.
The excursion-sign law and the positive-occupation identity are checked
against their closed forms.
"""

import numpy as np

import alpslab as al
from alpslab.harness import excursion_statistics
from alpslab.skewbm import simulate_ensemble

rng = np.random.default_rng(3)

target = al.MixtureTarget(
    modes=(al.ModeSpec(lam=1.0, r=1.0, weight=0.7),
           al.ModeSpec(lam=1.0, r=2.0, weight=0.3)),
    dimension=64)
c = al.skew_constants(target, 2.38)
print(f"domain [{c.wmin:.4f}, {c.wmax:.4f}], alpha = {c.alpha:.4f}")
print(f"occupation identity: P(W > 0) = {al.stationary_occupation(c):.4f} "
      "(equals the first mode weight exactly)")

cfg = al.SkewBMConfig(constants=c, dt=1e-3, horizon=30.0)
print(f"\nlattice: delta = {cfg.delta:.5f}, {cfg.n_pos} cells up, "
      f"{cfg.n_neg} cells down, effective dt = {cfg.dt_eff:.2e}")

# --- one path ------------------------------------------------------------
path = al.simulate(cfg, rng, initial=0.0)
print(f"single path over horizon {cfg.horizon}: range "
      f"[{path.values.min():.3f}, {path.values.max():.3f}]")

# --- excursion sign law ---------------------------------------------------
states = simulate_ensemble(cfg, 128, rng, initial=0.0)
pos = tot = 0
for lane in range(states.shape[1]):
    vals = np.concatenate([[0], states[:, lane]]) * cfg.delta
    if np.count_nonzero(vals == 0) < 2:
        continue
    st = excursion_statistics(vals)
    pos += round(st.fraction_positive * st.n_excursions)
    tot += st.n_excursions
print(f"\nexcursions pooled over 128 paths: {tot}, "
      f"fraction positive {pos / tot:.4f} vs alpha {c.alpha:.4f}")

# --- occupation fraction --------------------------------------------------
kept = simulate_ensemble(cfg, 256, rng, initial=0.0, collect_from=10.0)
frac = al.positive_fraction(kept)
print(f"time fraction on the positive side: {frac:.4f} vs w1 = 0.7")

# --- marginals spread from a point mass ----------------------------------
print("\nmarginal spread from wmax:")
for t in (0.0, 0.25, 1.0, 4.0):
    vals = al.marginal_sample(cfg, t, 2000, rng, initial=c.wmax)
    print(f"  t = {t:5.2f}: mean {vals.mean():+.3f}, sd {vals.std():.3f}")
