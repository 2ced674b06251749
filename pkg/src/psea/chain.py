"""Finite-state Markov chain of the relay battery.

State ``i`` means the battery holds ``i * eps1`` joules, ``i = 0..L``. Below
the forwarding level ``delta`` the relay only harvests (Mode I); at or above it
the relay harvests a fraction ``lam`` of the received power, forwards, and
spends ``delta`` levels (Mode II). Harvests are rounded down to whole levels
and the battery clips at ``L``.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, SingularChainError
from .gammasum import level_energies, sum_gamma_cdf

__all__ = [
    "BatteryModel",
    "build_transition_matrix",
    "assemble_transition_matrix",
    "stationary_distribution",
    "mode2_probability",
    "dump_matrix_csv",
]


@dataclass(frozen=True)
class BatteryModel:
    capacity: float
    levels: int
    delta: int

    def __post_init__(self):
        if not self.capacity > 0:
            raise DomainError(f"capacity must be positive, got {self.capacity!r}")
        if int(self.levels) != self.levels or self.levels < 1:
            raise DomainError(f"levels must be a positive integer, got {self.levels!r}")
        if int(self.delta) != self.delta or not 1 <= self.delta <= self.levels:
            raise DomainError(f"delta must lie in 1..L (L={self.levels}), got {self.delta!r}")
        object.__setattr__(self, "levels", int(self.levels))
        object.__setattr__(self, "delta", int(self.delta))

    @property
    def eps1(self):
        return self.capacity / self.levels

    @property
    def relay_power(self):
        """Forwarding power ``P_R = 2 delta eps1`` over a half-block."""
        return 2.0 * self.delta * self.eps1

    def energies(self):
        return level_energies(self.capacity, self.levels)


def assemble_transition_matrix(cdf_mode1, cdf_mode2, delta):
    """Build the transition matrix from precomputed harvest CDF values.

    ``cdf_mode1[k]`` must hold ``Pr{E_I <= eps_k}`` and ``cdf_mode2[k]`` the
    same for the Mode II harvest (``Pr{E_I <= eps_k / lam}``), for
    ``k = 0..L``. ``cdf_mode2`` may be ``None`` when Mode II harvests nothing.
    """
    f1 = np.asarray(cdf_mode1, dtype=float)
    L = f1.size - 1
    if not 1 <= delta <= L:
        raise DomainError(f"delta must lie in 1..L (L={L}), got {delta!r}")
    z = np.zeros((L + 1, L + 1))

    # Mode I: j = i + k for k < L - i, tail lands on L
    p1 = np.diff(f1)  # Pr{harvest = k levels}, k = 0..L-1
    for i in range(delta):
        n = L - i
        z[i, i:L] = p1[:n]
        z[i, L] = 1.0 - f1[n]

    # Mode II: harvest k, clip at L, then spend delta
    if cdf_mode2 is None:
        for i in range(delta, L + 1):
            z[i, i - delta] = 1.0
        return z
    f2 = np.asarray(cdf_mode2, dtype=float)
    p2 = np.diff(f2)
    for i in range(delta, L + 1):
        n = L - i
        z[i, i - delta:L - delta] = p2[:n]
        z[i, L - delta] = 1.0 - f2[n]
    return z


def build_transition_matrix(battery, pair, lam, mode2_harvest=True):
    """Transition matrix of the battery chain.

    ``pair`` describes the Mode I harvested energy. With
    ``mode2_harvest=False`` Mode II blocks bank nothing, which is the
    time-switching variant.
    """
    if not 0 < lam < 1:
        raise DomainError(f"lam must lie in (0, 1), got {lam!r}")
    eps = battery.energies()
    f1 = sum_gamma_cdf(pair, eps)
    f2 = sum_gamma_cdf(pair, eps / lam) if mode2_harvest else None
    return assemble_transition_matrix(f1, f2, battery.delta)


def stationary_distribution(z, rcond=1e-13):
    """Stationary distribution by a direct solve of ``(Z^T - I + B) pi = 1``.

    ``B`` is the all-ones matrix, which folds the normalization into the
    balance equations. A (numerically) singular system means the chain has
    no unique stationary distribution.
    """
    z = np.asarray(z, dtype=float)
    n = z.shape[0]
    a = z.T - np.eye(n) + 1.0
    with warnings.catch_warnings():
        # a zero pivot is reported below as SingularChainError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    diag = np.abs(np.diag(lu))
    if diag.min() <= rcond * max(diag.max(), 1.0):
        raise SingularChainError("chain has no unique stationary distribution")
    pi = scipy.linalg.lu_solve((lu, piv), np.ones(n))
    if pi.min() < -1e-8:
        raise SingularChainError(f"stationary solve produced a negative entry ({pi.min():.3g})")
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def mode2_probability(pi, delta):
    """Long-run fraction of blocks spent in Mode II."""
    if not 0 <= delta < len(pi):
        raise DomainError(f"delta must lie in 0..L, got {delta!r}")
    return float(np.sum(pi[delta:]))


def dump_matrix_csv(z, path):
    """Write the matrix row-major as ``i,j,prob`` lines."""
    z = np.asarray(z)
    with open(path, "w", newline="") as fh:
        fh.write("i,j,prob\n")
        for i, row in enumerate(z):
            for j, p in enumerate(row):
                fh.write(f"{i},{j},{float(p)!r}\n")
