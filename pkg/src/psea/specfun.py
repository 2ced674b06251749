r"""Real special functions used by the closed-form outage and chain expressions.

Everything here is scalar and pure. The modified Bessel function of the
second kind is evaluated for integer orders only, from base evaluations of
:math:`K_0` and :math:`K_1` followed by the (stable) forward recurrence

.. math::
    K_{n+1}(z) = K_{n-1}(z) + \frac{2n}{z} K_n(z).

The recurrence is run on successive ratios so that :func:`log_bessel_k` stays
finite where :math:`K_n(z)` itself would overflow or underflow.
"""

import math

from .errors import DomainError

__all__ = [
    "ln_gamma",
    "reg_lower_gamma",
    "reg_upper_gamma",
    "bessel_k",
    "log_bessel_k",
    "ln_binomial",
    "gamma_cdf",
]

EULER_GAMMA = 0.57721566490153286061

_EPS = 1e-16
_MAX_ITER = 10_000
_TINY = 1e-300


def ln_gamma(x):
    """Natural log of the Gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def _lower_series(s, x):
    # sum_{n>=0} x^n / (s (s+1) ... (s+n)), converges fast for x < s + 1
    term = 1.0 / s
    total = term
    ap = s
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))


def _upper_fraction(s, x):
    # modified Lentz evaluation of the continued fraction for Q(s, x)
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h


def _check_gamma_args(s, x):
    if not s > 0:
        raise DomainError(f"incomplete gamma requires s > 0, got {s!r}")
    if not x >= 0:
        raise DomainError(f"incomplete gamma requires x >= 0, got {x!r}")


def reg_lower_gamma(s, x):
    """Regularized lower incomplete gamma function ``P(s, x)``.

    Uses the power series below ``x = s + 1`` and the continued fraction for
    the complement above it.
    """
    _check_gamma_args(s, x)
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < s + 1.0:
        return min(1.0, _lower_series(s, x))
    return max(0.0, 1.0 - _upper_fraction(s, x))


def reg_upper_gamma(s, x):
    """Regularized upper incomplete gamma function ``Q(s, x) = 1 - P(s, x)``."""
    _check_gamma_args(s, x)
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < s + 1.0:
        return max(0.0, 1.0 - _lower_series(s, x))
    return min(1.0, _upper_fraction(s, x))


def gamma_cdf(shape, scale, x):
    """CDF of a gamma variable with the given shape and scale."""
    if not scale > 0:
        raise DomainError(f"gamma_cdf requires scale > 0, got {scale!r}")
    return reg_lower_gamma(shape, x / scale)


def ln_binomial(n, k):
    """``ln C(n, k)`` for integers ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        raise DomainError(f"ln_binomial requires 0 <= k <= n, got n={n}, k={k}")
    return math.log(math.comb(n, k))


def _k01_series(z):
    # Ascending series, used for z <= 2. Returns (K0, K1) unscaled.
    q = 0.25 * z * z
    log_half = math.log(0.5 * z)

    i0 = 0.0
    k0_tail = 0.0
    term = 1.0  # q^k / (k!)^2
    harmonic = 0.0
    k = 0
    while True:
        i0 += term
        k0_tail += harmonic * term
        k += 1
        term *= q / (k * k)
        harmonic += 1.0 / k
        if term < _EPS * i0:
            i0 += term
            k0_tail += harmonic * term
            break
    k0 = -(log_half + EULER_GAMMA) * i0 + k0_tail

    i1_sum = 0.0
    psi_sum = 0.0
    term = 1.0  # q^k / (k! (k+1)!)
    psi_k1 = -EULER_GAMMA  # psi(k+1)
    psi_k2 = 1.0 - EULER_GAMMA  # psi(k+2)
    k = 0
    while True:
        i1_sum += term
        psi_sum += (psi_k1 + psi_k2) * term
        k += 1
        term *= q / (k * (k + 1))
        psi_k1 += 1.0 / k
        psi_k2 += 1.0 / (k + 1)
        if term < _EPS * i1_sum:
            break
    i1 = 0.5 * z * i1_sum
    k1 = 1.0 / z + log_half * i1 - 0.25 * z * psi_sum
    return k0, k1


def _k01_scaled_fraction(z):
    # Steed's continued fraction (CF2) for z >= 2. Returns (e^z K0, e^z K1).
    b = 2.0 * (1.0 + z)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAX_ITER):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * z)) / s
    k1 = k0 * (z + 0.5 - h) / z
    return k0, k1


def _log_k01(z):
    if z <= 2.0:
        k0, k1 = _k01_series(z)
        return math.log(k0), math.log(k1)
    k0, k1 = _k01_scaled_fraction(z)
    return math.log(k0) - z, math.log(k1) - z


def log_bessel_k(order, z):
    """``ln K_n(z)`` for integer ``n`` and ``z > 0``.

    Finite wherever the logarithm is representable, including arguments
    where ``K_n(z)`` overflows (tiny ``z``, large ``n``) or underflows.
    """
    if not z > 0:
        raise DomainError(f"bessel_k requires z > 0, got {z!r}")
    if int(order) != order:
        raise DomainError(f"bessel_k requires an integer order, got {order!r}")
    n = abs(int(order))
    lk0, lk1 = _log_k01(z)
    if n == 0:
        return lk0
    out = lk1
    ratio = math.exp(lk1 - lk0)
    for k in range(1, n):
        ratio = 1.0 / ratio + 2.0 * k / z
        out += math.log(ratio)
    return out


def bessel_k(order, z):
    """Modified Bessel function of the second kind ``K_n(z)``, integer ``n``.

    ``K_{-n} = K_n``. Returns 0.0 on underflow and ``inf`` on overflow.
    """
    lk = log_bessel_k(order, z)
    if lk < -745.2:
        return 0.0
    if lk > 709.78:
        return math.inf
    return math.exp(lk)
