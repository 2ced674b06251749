# # Throughput against transmit power
#
# The analytical throughput comes from the battery chain and the closed-form
# link terms. We compare it with a quantized-battery simulation, show that it
# approaches the continuous-battery simulation as L grows, and watch it
# saturate at the rate ceiling 2 sigma.

# %%
import numpy as np

from _setup import params
from psea.chain import BatteryModel
from psea.sim import SimConfig, run_simulation
from psea.throughput import throughput_ps_ea

battery = BatteryModel(0.2, 200, 40)
print(" P [W]  analytical  simulated (+/- s.e.)")
for k, p in enumerate([1, 2, 3, 5, 10]):
    ref = throughput_ps_ea(params(p), battery)
    sim = run_simulation(SimConfig(1_000_000, seed=k), params(p), battery)
    print(f"{p:6g}  {ref.psi:10.4f}  {sim.psi_hat:.4f} +/- {sim.std_err:.4f}")

# %% [markdown]
# Finer quantization, same physical threshold (delta = L/5 keeps P_R fixed).

# %%
truth = run_simulation(SimConfig(1_000_000, 7, "continuous"), params(3), BatteryModel(0.2, 10, 2))
print(f"continuous battery: {truth.psi_hat:.4f}")
for levels in [10, 50, 200, 1000]:
    psi = throughput_ps_ea(params(3), BatteryModel(0.2, levels, levels // 5)).psi
    print(f"L={levels:5d}: analytical {psi:.4f}, gap {psi - truth.psi_hat:+.4f}")

# %% [markdown]
# Saturation.

# %%
powers = np.geomspace(0.1, 1000, 41)
psi = [throughput_ps_ea(params(p), battery).psi for p in powers]
for p, s in list(zip(powers, psi))[::8]:
    print(f"P={p:8.2f} W  psi={s:.4f}")

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    from _setup import save

    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogx(powers, psi)
    ax.set_xlabel("P [W]")
    ax.set_ylabel("throughput [bit/s/Hz]")
    save(fig, "throughput_vs_power.png")
