# # The battery as a Markov chain
#
# The battery is quantized into L+1 levels. Below delta the relay only
# harvests; at or above delta it harvests a fraction lambda, then spends delta
# levels forwarding. We build the transition matrix, solve for the stationary
# distribution and check it against a simulated battery.

# %%
import numpy as np

from _setup import params
from psea.chain import BatteryModel, build_transition_matrix, mode2_probability, stationary_distribution
from psea.gammasum import harvest_pair
from psea.sim import SimConfig, empirical_stationary, run_simulation

p = params(p=10.0)
battery = BatteryModel(capacity=0.2, levels=200, delta=40)
z = build_transition_matrix(battery, harvest_pair(p), p.lam)
print(f"matrix {z.shape}, worst row-sum error {np.abs(z.sum(axis=1) - 1).max():.1e}")

# %% [markdown]
# Rows below delta only move up; rows at or above delta land in the band
# [i - delta, L - delta].

# %%
for i in [0, 39, 40, 120, 200]:
    nz = np.nonzero(z[i])[0]
    print(f"row {i:3d}: reachable levels {nz.min()}..{nz.max()}")

# %%
pi = stationary_distribution(z)
print(f"residual |Z^T pi - pi| = {np.abs(z.T @ pi - pi).max():.1e}")
print(f"Pr(forwarding block) = {mode2_probability(pi, battery.delta):.4f}")
print(f"mean battery level = {np.dot(np.arange(201), pi):.1f} of 200")

# %% [markdown]
# A million simulated blocks with the same quantized battery.

# %%
sim = run_simulation(SimConfig(1_000_000, seed=1), p, battery)
occ = empirical_stationary(sim)
print(f"total variation to pi: {0.5 * np.abs(occ - pi).sum():.4f}")
print(f"simulated Pr(forwarding block) = {sim.p_mode2_hat:.4f}")

# %% [markdown]
# Raising delta makes forwarding blocks rarer.

# %%
for d in [10, 40, 80, 160]:
    zd = build_transition_matrix(BatteryModel(0.2, 200, d), harvest_pair(p), p.lam)
    print(f"delta={d:3d}: Pr(forwarding) = {mode2_probability(stationary_distribution(zd), d):.4f}")
