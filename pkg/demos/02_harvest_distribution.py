# # How much energy does the relay harvest per block?
#
# In a harvesting block the relay collects E = eta/2 (P_A H + P_B G), a sum of
# two independent gamma variables with different scales. Its CDF is what feeds
# the battery chain.

# %%
import numpy as np

from _setup import params
from psea.gammasum import choose_method, harvest_pair, sum_gamma_cdf

p = params(p=10.0)
pair = harvest_pair(p)
print(pair)
print(f"mean {pair.mean:.4g} J, std {np.sqrt(pair.variance):.4g} J, method: {choose_method(pair)}")

# %% [markdown]
# Exact CDF against a Monte Carlo histogram.

# %%
rng = np.random.default_rng(0)
draws = np.sort(rng.gamma(pair.shape1, pair.scale1, 10**6) + rng.gamma(pair.shape2, pair.scale2, 10**6))
xs = np.quantile(draws, np.linspace(0.001, 0.999, 25))
exact = sum_gamma_cdf(pair, xs)
empirical = np.searchsorted(draws, xs, side="right") / draws.size
for x, f, e in zip(xs[::4], exact[::4], empirical[::4]):
    print(f"x={x:.4f} J  F={f:.5f}  empirical={e:.5f}")
print(f"max gap on this grid: {np.max(np.abs(exact - empirical)):.2e}")

# %% [markdown]
# The partial-fraction form and the series expansion agree; the moment-matched
# single-gamma shortcut does not, which is why it is only available on request.

# %%
grid = np.linspace(0, 5 * pair.mean, 200)
pf = sum_gamma_cdf(pair, grid, method="partial_fractions")
print(f"series vs partial fractions: {np.max(np.abs(pf - sum_gamma_cdf(pair, grid, method='series'))):.1e}")
print(f"moment match vs exact:        {np.max(np.abs(pf - sum_gamma_cdf(pair, grid, method='moment_match'))):.1e}")

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    from _setup import save

    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(draws[::1000], np.arange(0, draws.size, 1000) / draws.size, ".", ms=2, label="simulated")
    ax.plot(grid, pf, label="exact")
    ax.set_xlabel("harvested energy [J]")
    ax.set_ylabel("CDF")
    ax.legend()
    save(fig, "harvest_cdf.png")
