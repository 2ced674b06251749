"""Physical-layer model of the two-way relay link.

Powers are linear watts throughout; use :func:`dbm_to_watts` at the edges.
The transmission block is normalized to unit duration, so energies and
powers share a numeric scale (forwarding for half a block at power ``P_R``
costs ``P_R / 2`` joules).
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

__all__ = [
    "SystemParams",
    "SnrConstants",
    "Topology",
    "dbm_to_watts",
    "watts_to_dbm",
    "pathloss_gain",
    "sample_channel_power",
    "harvested_energy",
    "snr_constants",
    "instantaneous_snrs",
    "outage_threshold",
]


def dbm_to_watts(dbm):
    if np.ndim(dbm):
        return 10.0 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)
    return 10.0 ** ((float(dbm) - 30.0) / 10.0)


def watts_to_dbm(watts):
    return 10.0 * np.log10(watts) + 30.0


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the network.

    ``n0`` is the noise power at the sources, ``n1`` the relay antenna noise
    and ``n2`` the relay conversion noise. ``lam`` is the fraction of the
    received power routed to the energy harvester in Mode II.
    """

    p_a: float
    p_b: float
    n0: float
    n1: float
    n2: float
    eta: float
    lam: float
    m_a: int
    m_b: int
    omega_a: float
    omega_b: float
    sigma_a: float
    sigma_b: float

    def __post_init__(self):
        for name in ("p_a", "p_b", "n0", "n1", "n2", "omega_a", "omega_b", "sigma_a", "sigma_b"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not 0 < self.eta < 1:
            raise DomainError(f"eta must lie in (0, 1), got {self.eta!r}")
        if not 0 < self.lam < 1:
            raise DomainError(f"lam must lie in (0, 1), got {self.lam!r}")
        for name in ("m_a", "m_b"):
            m = getattr(self, name)
            if int(m) != m or m < 1:
                raise DomainError(f"{name} must be a positive integer, got {m!r}")
            object.__setattr__(self, name, int(m))

    def with_(self, **changes):
        """Copy with some fields replaced (validation reruns)."""
        return replace(self, **changes)


@dataclass(frozen=True)
class SnrConstants:
    gbar_a: float
    gbar_b: float
    gbar_r: float


@dataclass(frozen=True)
class Topology:
    """Collinear A - R - B layout; ``d_br`` is implied as ``d_ab - d_ar``."""

    d_ab: float
    d_ar: float
    alpha: float

    def __post_init__(self):
        if not 0 < self.d_ar < self.d_ab:
            raise DomainError(f"need 0 < d_ar < d_ab, got d_ar={self.d_ar}, d_ab={self.d_ab}")
        if not 2 <= self.alpha <= 5:
            raise DomainError(f"alpha must lie in [2, 5], got {self.alpha!r}")

    @property
    def d_br(self):
        return self.d_ab - self.d_ar

    def gains(self):
        """Average power gains ``(omega_a, omega_b)`` of the A-R and B-R links."""
        return pathloss_gain(self.d_ar, self.alpha), pathloss_gain(self.d_br, self.alpha)


def pathloss_gain(d, alpha):
    """Average channel power gain ``1 / (1 + d**alpha)``."""
    if not 2 <= alpha <= 5:
        raise DomainError(f"alpha must lie in [2, 5], got {alpha!r}")
    if not d >= 0:
        raise DomainError(f"distance must be nonnegative, got {d!r}")
    return 1.0 / (1.0 + d**alpha)


def sample_channel_power(m, omega, rng, size=None):
    """Draw Nakagami-m channel power gains.

    The power gain is gamma with shape ``m`` and mean ``omega``; it is built
    as a sum of ``m`` exponentials of mean ``omega / m`` so the draw sequence
    depends only on the generator state.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega!r}")
    m = int(m)
    if size is None:
        return float(rng.standard_exponential(m).sum()) * omega / m
    shape = (size, m) if np.ndim(size) == 0 else (*size, m)
    return rng.standard_exponential(shape).sum(axis=-1) * (omega / m)


def harvested_energy(h, g, params, mode="I"):
    """Energy banked during the first half-block.

    Mode I routes all received power to the harvester; Mode II only the
    fraction ``params.lam``.
    """
    e = 0.5 * params.eta * (params.p_a * h + params.p_b * g)
    if mode == "I":
        return e
    if mode == "II":
        return params.lam * e
    raise ValueError(f"mode must be 'I' or 'II', got {mode!r}")


def snr_constants(params, p_r, lam=None):
    """Per-link SNR constants for relay power ``p_r``.

    ``lam`` overrides ``params.lam``; pass ``0.0`` for a relay that sends the
    whole received signal to the information receiver.
    """
    if not p_r > 0:
        raise DomainError(f"relay power must be positive, got {p_r!r}")
    lam = params.lam if lam is None else lam
    denom = (1.0 - lam) * params.n1 + params.n2
    return SnrConstants(
        gbar_a=(1.0 - lam) * params.p_a / denom,
        gbar_b=(1.0 - lam) * params.p_b / denom,
        gbar_r=p_r / params.n0,
    )


def instantaneous_snrs(h, g, c):
    """End-to-end SNRs ``(gamma_a, gamma_b)`` at sources A and B.

    ``gamma_a`` is the SNR with which A decodes B's message after
    self-interference cancellation, and vice versa. Works elementwise on
    arrays; ``c.gbar_r`` may itself be an array.
    """
    hg = h * g
    gamma_a = c.gbar_r * c.gbar_b * hg / ((c.gbar_r + c.gbar_a) * h + c.gbar_b * g + 1.0)
    gamma_b = c.gbar_r * c.gbar_a * hg / ((c.gbar_r + c.gbar_b) * g + c.gbar_a * h + 1.0)
    return gamma_a, gamma_b


def outage_threshold(sigma):
    """Minimum SNR ``2**(2 sigma) - 1`` for rate ``sigma`` over a half-block."""
    if not sigma > 0:
        raise DomainError(f"rate must be positive, got {sigma!r}")
    return 2.0 ** (2.0 * sigma) - 1.0
