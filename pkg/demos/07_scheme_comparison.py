# # Power splitting with accumulation against two baselines
#
# TS-EA: each block is either pure harvesting or pure forwarding.
# PS-noEA: no battery; every block spends all of its split harvest.
# Each scheme is tuned on its own parameters. PS-noEA has no closed form and
# is simulated. A coarse lambda grid keeps this demo quick; the shipped
# compare config uses steps of 0.01.

# %%
from _setup import params
from psea.optimize import lambda_grid, optimize_ps_ea, optimize_ps_noea, optimize_ts_ea

lams = lambda_grid(0.05, 0.95, 0.05)
print(" P [W]   PS-EA   TS-EA  PS-noEA")
for p in [0.5, 1, 3, 10, 30]:
    sp = params(p, sigma=10)
    ps = optimize_ps_ea(sp, 0.2, 200, lams)
    ts = optimize_ts_ea(sp, 0.2, 200)
    noea = optimize_ps_noea(sp, lams, n_blocks=100_000, seed=3)
    print(f"{p:6g}  {ps.psi:6.3f}  {ts.psi:6.3f}  {noea.psi:6.3f}")
