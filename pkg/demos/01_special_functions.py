# # Special functions
#
# The throughput formula needs the modified Bessel function K_n and the
# regularized incomplete gamma function. Both are implemented from scratch in
# `psea.specfun`; here we compare them with scipy and look at the tricky
# regions (tiny and huge arguments).

# %%
import numpy as np
from scipy import special

from psea.specfun import bessel_k, log_bessel_k, reg_lower_gamma

# %% [markdown]
# K_n against scipy over twelve decades of argument.

# %%
zs = np.geomspace(1e-4, 500, 400)
for n in [0, 1, 2, 5]:
    ours = np.array([bessel_k(n, z) for z in zs])
    ref = special.kn(n, zs)
    ok = ref > 0
    print(f"K_{n}: max relative error {np.max(np.abs(ours[ok] / ref[ok] - 1)):.2e}")

# %% [markdown]
# Past z ~ 700 the function underflows, but its logarithm is still usable.
# This is what lets the closed-form outage term stay accurate at high SNR.

# %%
for z in [100.0, 700.0, 1e4]:
    print(f"z={z:g}: K_1={bessel_k(1, z):.3e}  log K_1={log_bessel_k(1, z):.6f}")

# %% [markdown]
# Regularized lower incomplete gamma P(s, x) against scipy.

# %%
worst = 0.0
for s in [0.5, 1, 2, 3.7, 10, 40]:
    for x in np.geomspace(1e-6, 200, 200):
        worst = max(worst, abs(reg_lower_gamma(s, x) - special.gammainc(s, x)))
print(f"P(s, x): max absolute error {worst:.2e}")
