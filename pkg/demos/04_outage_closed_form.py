# # The closed-form success probability
#
# Every link term has the form phi = Pr{a H G / (b H + c G + 1) > v} with
# Nakagami fading on H and G. `psea.throughput.phi` evaluates a finite
# Bessel sum in log space; `phi_numerical` integrates the same probability
# directly. Here they are compared over random inputs and against simulation.

# %%
import numpy as np

from psea.throughput import phi, phi_numerical

rng = np.random.default_rng(1)
worst = 0.0
for _ in range(100):
    case = (10 ** rng.uniform(-1, 3), 10 ** rng.uniform(-1, 2), 10 ** rng.uniform(-1, 2),
            10 ** rng.uniform(-1, 1), int(rng.integers(1, 5)), 1.0, int(rng.integers(1, 5)), 0.7)
    ref = phi_numerical(*case)
    if ref > 1e-10:
        worst = max(worst, abs(phi(*case) / ref - 1))
print(f"closed form vs quadrature, worst relative error: {worst:.1e}")

# %% [markdown]
# Monte Carlo check at one point.

# %%
a, b, c, v = 10.0, 1.0, 1.0, 1.0
h = rng.gamma(2, 0.5, 4_000_000)
g = rng.gamma(2, 0.5, 4_000_000)
mc = np.mean(a * h * g / (b * h + c * g + 1) > v)
print(f"phi = {phi(a, b, c, v, 2, 1.0, 2, 1.0):.5f}, simulated {mc:.5f}")

# %% [markdown]
# Decay in the threshold v (higher rate means a higher threshold).

# %%
for v in [1e-6, 0.1, 1, 3, 10, 100]:
    print(f"v={v:g}: phi={phi(50, 2, 3, v, 2, 1.0, 2, 1.0):.6g}")
