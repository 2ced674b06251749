"""Exhaustive searches over the splitting ratio and forwarding level.

The analytical throughput is cheap once the harvest CDFs are tabulated, so
every optimizer here is a plain grid search. Ties are broken toward the
smaller ``delta`` and then the smaller ``lam``.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .sim import SimConfig, run_simulation
from .throughput import delta_profile

__all__ = [
    "Optimum",
    "lambda_grid",
    "optimize_ps_ea",
    "optimize_ts_ea",
    "optimize_ps_noea",
]


@dataclass
class Optimum:
    psi: float
    lam: float = None
    delta: int = None
    std_err: float = None
    # one (lam, best_delta, best_psi) row per lam searched
    table: list = field(default_factory=list)


def lambda_grid(lo=0.01, hi=0.99, step=0.01):
    """Inclusive grid ``lo, lo + step, ..., hi`` rounded to the step's decimals."""
    n = int(round((hi - lo) / step)) + 1
    if n < 1:
        raise ValueError("empty lambda grid")
    decimals = max(0, -int(np.floor(np.log10(step))) + 2)
    return [round(lo + k * step, decimals) for k in range(n)]


def _map(fn, items, workers):
    if workers and workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _best_delta(lam, params, capacity, levels, deltas):
    prof = delta_profile(params.with_(lam=lam), capacity, levels, deltas)
    psi = np.array([r.psi for r in prof])
    k = int(np.argmax(psi))
    return lam, list(deltas)[k], float(psi[k])


def optimize_ps_ea(params, capacity, levels, lambdas=None, deltas=None, workers=1):
    """Joint exhaustive search over ``lam`` and ``delta`` of the analytical throughput."""
    lambdas = lambda_grid() if lambdas is None else list(lambdas)
    deltas = list(range(1, levels + 1)) if deltas is None else list(deltas)
    fn = partial(_best_delta, params=params, capacity=capacity, levels=levels, deltas=deltas)
    table = _map(fn, lambdas, workers)
    lam, delta, psi = min(table, key=lambda row: (-row[2], row[1], row[0]))
    return Optimum(psi=psi, lam=lam, delta=delta, table=table)


def optimize_ts_ea(params, capacity, levels, deltas=None):
    """Search over ``delta`` for the time-switching scheme."""
    deltas = list(range(1, levels + 1)) if deltas is None else list(deltas)
    prof = delta_profile(params, capacity, levels, deltas, scheme="ts-ea")
    psi = np.array([r.psi for r in prof])
    k = int(np.argmax(psi))
    return Optimum(psi=float(psi[k]), delta=deltas[k])


def _noea_point(lam, params, n_blocks, seed):
    r = run_simulation(SimConfig(n_blocks, seed, "continuous", "ps-noea"), params.with_(lam=lam), None)
    return lam, r.psi_hat, r.std_err


def optimize_ps_noea(params, lambdas=None, n_blocks=200_000, seed=0, workers=1):
    """Search over ``lam`` for the no-accumulation scheme by simulation.

    Every ``lam`` reuses the same seed, so the candidates see identical
    channel realizations.
    """
    lambdas = lambda_grid() if lambdas is None else list(lambdas)
    fn = partial(_noea_point, params=params, n_blocks=n_blocks, seed=seed)
    rows = _map(fn, lambdas, workers)
    lam, psi, se = min(rows, key=lambda row: (-row[1], row[0]))
    return Optimum(psi=psi, lam=lam, std_err=se, table=[(r[0], None, r[1]) for r in rows])
