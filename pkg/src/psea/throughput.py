r"""Outage and throughput analytics.

The central quantity is

.. math::
    \phi(a, b, c, v) = \Pr\left\{\frac{aHG}{bH + cG + 1} > v\right\}

with :math:`H \sim \Gamma(m_A, \Omega_A/m_A)` and
:math:`G \sim \Gamma(m_B, \Omega_B/m_B)` independent. Conditioning on
:math:`G` and expanding the Erlang survival of :math:`H` gives a finite triple
sum of terms of the form :math:`t^{n} K_{\nu}(\cdot)`; every term is
nonnegative, so it is summed in log-magnitude form and then exactly with
:func:`math.fsum`.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaincc

from .chain import (
    BatteryModel,
    assemble_transition_matrix,
    build_transition_matrix,
    mode2_probability,
    stationary_distribution,
)
from .channel import outage_threshold, snr_constants
from .errors import DomainError
from .gammasum import harvest_pair, level_energies, sum_gamma_cdf
from .specfun import ln_binomial, log_bessel_k

__all__ = [
    "ThroughputResult",
    "phi",
    "phi_numerical",
    "link_success",
    "system_throughput",
    "throughput_ps_ea",
    "throughput_ts_ea",
    "delta_profile",
]


@dataclass(frozen=True)
class ThroughputResult:
    """Analytical throughput at one operating point.

    ``phi_a`` is the probability that source A decodes B's message in a
    Mode II block (rate ``sigma_b``), ``phi_b`` the reverse.
    """

    psi: float
    p_mode2: float
    phi_a: float
    phi_b: float
    pi: np.ndarray = None


def _check_phi_args(a, b, c, v, m_a, omega_a, m_b, omega_b):
    for name, val in (("a", a), ("b", b), ("c", c), ("v", v), ("omega_a", omega_a), ("omega_b", omega_b)):
        if not val > 0:
            raise DomainError(f"{name} must be positive, got {val!r}")
    for name, m in (("m_a", m_a), ("m_b", m_b)):
        if int(m) != m or m < 1:
            raise DomainError(f"{name} must be a positive integer, got {m!r}")


def phi(a, b, c, v, m_a, omega_a, m_b, omega_b):
    """Closed-form ``Pr{a H G / (b H + c G + 1) > v}`` for Nakagami-m ``H`` (A link), ``G`` (B link)."""
    _check_phi_args(a, b, c, v, m_a, omega_a, m_b, omega_b)
    m_a, m_b = int(m_a), int(m_b)
    rate_a = m_a / omega_a
    rate_b = m_b / omega_b
    va = v / a

    log_pref = (math.log(2.0) + m_b * math.log(rate_b) - math.lgamma(m_b)
                - va * (rate_a * c + rate_b * b))
    if log_pref < -745.0:
        return 0.0

    bessel_arg = 2.0 * math.sqrt(rate_a * rate_b * (b * c * va * va + va))
    # orders i - k + 1 span [2 - m_a, m_b]; K_{-n} = K_n
    log_k = {n: log_bessel_k(n, bessel_arg) for n in range(0, max(m_b, m_a - 2) + 1)}

    ln_a, ln_b, ln_c, ln_v = math.log(a), math.log(b), math.log(c), math.log(v)
    ln_rate_a = math.log(rate_a)
    ln_bcv1 = math.log1p(b * c * va)
    ln_bracket = ln_rate_a + ln_v + math.log(b * c * v + a) - math.log(rate_b)

    logs = []
    for i in range(m_b):
        lb_i = ln_binomial(m_b - 1, i)
        for j in range(m_a):
            lj = j * ln_rate_a - math.lgamma(j + 1)
            for k in range(j + 1):
                order = i - k + 1
                logs.append(
                    lb_i + ln_binomial(j, k)
                    + (m_b - i - 1) * ln_b + (j - k) * ln_c + lj
                    - (m_b + j - k) * ln_a
                    + (m_b + j - i - 1) * ln_v
                    + k * ln_bcv1
                    + 0.5 * order * ln_bracket
                    + log_k[abs(order)]
                )
    peak = max(logs)
    total = log_pref + peak + math.log(math.fsum(math.exp(t - peak) for t in logs))
    if total < -745.0:
        return 0.0
    return min(1.0, math.exp(total))


def phi_numerical(a, b, c, v, m_a, omega_a, m_b, omega_b, epsrel=1e-12):
    """Same probability as :func:`phi` by adaptive quadrature.

    Integrates the gamma density of ``G`` against the conditional survival of
    ``H`` in log-space, ``g = b v / a + e^u``. Independent of the Bessel
    machinery; used for self-checks.
    """
    _check_phi_args(a, b, c, v, m_a, omega_a, m_b, omega_b)
    rate_a, rate_b = m_a / omega_a, m_b / omega_b
    g0 = b * v / a
    kappa = v * (b * c * v / a + 1.0) / a  # H threshold is c v / a + kappa / t
    log_norm = m_b * math.log(rate_b) - math.lgamma(m_b)

    def integrand(u):
        t = math.exp(u)
        g = g0 + t
        log_f = log_norm + (m_b - 1) * math.log(g) - rate_b * g
        surv = gammaincc(m_a, rate_a * (c * v / a + kappa / t))
        if surv == 0.0:
            return 0.0
        return math.exp(log_f + u) * surv

    # survival of H switches on near t ~ kappa rate_a; the G density dies by t ~ 60 / rate_b
    t_lo = kappa * rate_a * 1e-4
    t_hi = max(g0, 1.0 / rate_b) * 100.0 * max(m_b, 1) + 10.0 * t_lo
    edges = np.linspace(math.log(t_lo), math.log(t_hi), 40)
    parts = [integrate.quad(integrand, lo, hi, epsabs=1e-30, epsrel=epsrel, limit=200)[0]
             for lo, hi in zip(edges[:-1], edges[1:])]
    return math.fsum(parts)


EMPTY_ESCAPE_TOL = 1e-12


def _battery_distribution(z):
    """Stationary levels, or a point mass at 0 when an empty battery can never charge.

    If the chance of harvesting even one level is at rounding size, the empty
    state is absorbing in floating point and the linear solve is singular; a
    relay that starts empty then stays empty for all practical purposes.
    """
    if 1.0 - z[0, 0] < EMPTY_ESCAPE_TOL:
        pi = np.zeros(len(z))
        pi[0] = 1.0
        return pi
    return stationary_distribution(z)


def link_success(params, consts):
    """``(phi_a, phi_b)``: per-direction decoding probabilities in a Mode II block."""
    v_a = outage_threshold(params.sigma_a)
    v_b = outage_threshold(params.sigma_b)
    fading = (params.m_a, params.omega_a, params.m_b, params.omega_b)
    phi_a = phi(consts.gbar_r * consts.gbar_b, consts.gbar_r + consts.gbar_a, consts.gbar_b, v_b, *fading)
    phi_b = phi(consts.gbar_r * consts.gbar_a, consts.gbar_a, consts.gbar_r + consts.gbar_b, v_a, *fading)
    return phi_a, phi_b


def system_throughput(pi, consts, params, delta):
    """Sum throughput of both sources given the battery distribution ``pi``.

    Decoding success does not depend on the battery level once in Mode II,
    so the level sums factor into ``Pr{Mode II}`` times the link terms.
    """
    p2 = mode2_probability(pi, delta)
    phi_a, phi_b = link_success(params, consts)
    psi = p2 * (params.sigma_b * phi_a + params.sigma_a * phi_b)
    return ThroughputResult(psi=psi, p_mode2=p2, phi_a=phi_a, phi_b=phi_b, pi=np.asarray(pi))


def throughput_ps_ea(params, battery):
    """Analytical throughput of the power-splitting accumulate-and-forward scheme."""
    z = build_transition_matrix(battery, harvest_pair(params), params.lam)
    pi = _battery_distribution(z)
    consts = snr_constants(params, battery.relay_power)
    return system_throughput(pi, consts, params, battery.delta)


def throughput_ts_ea(params, battery):
    """Analytical throughput of the time-switching counterpart.

    Harvesting blocks are unchanged; forwarding blocks bank nothing and pass
    the whole received signal to the information receiver, i.e. the SNR
    constants take ``lam = 0``. ``params.lam`` is ignored.
    """
    eps = battery.energies()
    f1 = sum_gamma_cdf(harvest_pair(params), eps)
    z = assemble_transition_matrix(f1, None, battery.delta)
    pi = _battery_distribution(z)
    consts = snr_constants(params, battery.relay_power, lam=0.0)
    return system_throughput(pi, consts, params, battery.delta)


def delta_profile(params, capacity, levels, deltas=None, scheme="ps-ea"):
    """Analytical throughput for every ``delta`` in ``deltas`` (default ``1..L``).

    Harvest CDFs are computed once and shared across ``delta``; returns a list
    of :class:`ThroughputResult` aligned with ``deltas``.
    """
    deltas = range(1, levels + 1) if deltas is None else deltas
    eps = level_energies(capacity, levels)
    pair = harvest_pair(params)
    f1 = sum_gamma_cdf(pair, eps)
    if scheme == "ps-ea":
        f2 = sum_gamma_cdf(pair, eps / params.lam)
        lam = None
    elif scheme == "ts-ea":
        f2, lam = None, 0.0
    else:
        raise ValueError(f"analytical profile not available for scheme {scheme!r}")
    out = []
    for d in deltas:
        battery = BatteryModel(capacity, levels, d)
        pi = _battery_distribution(assemble_transition_matrix(f1, f2, d))
        consts = snr_constants(params, battery.relay_power, lam=lam)
        out.append(system_throughput(pi, consts, params, d))
    return out
