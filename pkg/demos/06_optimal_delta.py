# # Choosing the forwarding energy delta
#
# A small delta forwards often but at low relay power; a large delta forwards
# rarely. At a demanding rate (sigma = 10) the trade-off gives a clear
# interior optimum, and the optimum moves right as power grows and left as
# the splitting ratio shrinks.

# %%
import numpy as np

from _setup import params
from psea.optimize import lambda_grid, optimize_ps_ea
from psea.throughput import delta_profile

deltas = list(range(1, 201))
for lam in [0.9, 0.5]:
    for p in [1, 3, 10, 30]:
        psi = np.array([r.psi for r in delta_profile(params(p, sigma=10, lam=lam), 0.2, 200, deltas)])
        k = int(np.argmax(psi))
        print(f"lambda={lam} P={p:3g} W: best delta {deltas[k]:3d}, psi {psi[k]:.3f} "
              f"(delta=1: {psi[0]:.3f}, delta=200: {psi[-1]:.3f})")

# %% [markdown]
# Joint search over lambda and delta.

# %%
best = optimize_ps_ea(params(3, sigma=10), 0.2, 200, lambda_grid(0.05, 0.95, 0.05))
print(f"optimum at P=3 W: lambda={best.lam}, delta={best.delta}, psi={best.psi:.4f}")
