r"""Distribution of the Mode I harvested energy and its discretization.

The harvested energy is ``X1 + X2`` with independent gamma summands of
integer shapes. For distinct rates :math:`\beta_1 \ne \beta_2` the Laplace
transform :math:`\beta_1^{m_1}\beta_2^{m_2} / ((s+\beta_1)^{m_1}(s+\beta_2)^{m_2})`
splits into partial fractions, so the CDF is a finite signed mixture of
gamma CDFs:

.. math::
    F(x) = \sum_{k=1}^{m_1} w^{(1)}_k P(m_1-k+1, \beta_1 x)
         + \sum_{k=1}^{m_2} w^{(2)}_k P(m_2-k+1, \beta_2 x),

    w^{(1)}_k = (-1)^{k-1} \binom{m_2+k-2}{k-1} (\rho_1 - 1)^{k-1} \rho_1^{m_2},
    \qquad \rho_1 = \frac{\beta_2}{\beta_2 - \beta_1},

and symmetrically for :math:`w^{(2)}`. The weights alternate in sign and grow
like :math:`\rho^{m}`, so when the rates are close (or the shapes large) the
evaluation falls back to Moschopoulos' positive-weight series, which converges
geometrically in :math:`1 - \theta_{min}/\theta_{max}`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalInstabilityError
from .specfun import reg_lower_gamma

__all__ = [
    "GammaPair",
    "harvest_pair",
    "sum_gamma_cdf",
    "discretize_energy",
    "level_energies",
    "choose_method",
]

EQUAL_SCALE_GAP = 1e-9
# Partial fractions are used while sum |w| stays below this; each decade
# costs roughly one significant digit.
MAX_WEIGHT_MASS = 1e3


@dataclass(frozen=True)
class GammaPair:
    shape1: int
    scale1: float
    shape2: int
    scale2: float

    def __post_init__(self):
        for s in (self.shape1, self.shape2):
            if int(s) != s or s < 1:
                raise DomainError(f"shapes must be positive integers, got {s!r}")
        for th in (self.scale1, self.scale2):
            if not th > 0:
                raise DomainError(f"scales must be positive, got {th!r}")
        object.__setattr__(self, "shape1", int(self.shape1))
        object.__setattr__(self, "shape2", int(self.shape2))

    @property
    def mean(self):
        return self.shape1 * self.scale1 + self.shape2 * self.scale2

    @property
    def variance(self):
        return self.shape1 * self.scale1**2 + self.shape2 * self.scale2**2

    @property
    def relative_gap(self):
        return abs(self.scale1 - self.scale2) / max(self.scale1, self.scale2)


def harvest_pair(params):
    """Summand distributions of the Mode I harvested energy for ``params``."""
    mean1 = 0.5 * params.eta * params.p_a * params.omega_a
    mean2 = 0.5 * params.eta * params.p_b * params.omega_b
    return GammaPair(params.m_a, mean1 / params.m_a, params.m_b, mean2 / params.m_b)


def _partial_fraction_weights(pair):
    b1, b2 = 1.0 / pair.scale1, 1.0 / pair.scale2
    m1, m2 = pair.shape1, pair.shape2
    rho1 = b2 / (b2 - b1)
    rho2 = b1 / (b1 - b2)
    w1 = [(-1) ** (k - 1) * math.comb(m2 + k - 2, k - 1) * (rho1 - 1.0) ** (k - 1) * rho1**m2
          for k in range(1, m1 + 1)]
    w2 = [(-1) ** (k - 1) * math.comb(m1 + k - 2, k - 1) * (rho2 - 1.0) ** (k - 1) * rho2**m1
          for k in range(1, m2 + 1)]
    return w1, w2


def _cdf_partial_fractions(pair, x):
    w1, w2 = _partial_fraction_weights(pair)
    b1, b2 = 1.0 / pair.scale1, 1.0 / pair.scale2
    terms = [w * reg_lower_gamma(pair.shape1 - k, b1 * x) for k, w in enumerate(w1)]
    terms += [w * reg_lower_gamma(pair.shape2 - k, b2 * x) for k, w in enumerate(w2)]
    return math.fsum(terms)


def _series_weights(pair, tol=1e-15, max_terms=20_000):
    # Moschopoulos (1985): F(x) = sum_k p_k P(m1 + m2 + k, x / theta_min)
    th_min = min(pair.scale1, pair.scale2)
    alphas = (pair.shape1, pair.shape2)
    ratios = (th_min / pair.scale1, th_min / pair.scale2)
    c = math.prod(r**a for r, a in zip(ratios, alphas))
    qs = [1.0 - r for r in ratios]
    gam = [0.0]  # gamma_k, 1-based
    delta = [1.0]
    weights = [c]
    mass = c
    k = 0
    q_max = max(qs)
    # stop on the remaining mass, or once the geometric tail bound is negligible
    while 1.0 - mass > tol and weights[-1] > 1e-18 * (1.0 - q_max) and k < max_terms:
        k += 1
        gam.append(sum(a * q**k for a, q in zip(alphas, qs)) / k)
        delta.append(sum(i * gam[i] * delta[k - i] for i in range(1, k + 1)) / k)
        weights.append(c * delta[k])
        mass += weights[-1]
    return th_min, weights


def _cdf_series(pair, x, weights=None):
    th_min, weights = weights or _series_weights(pair)
    base = pair.shape1 + pair.shape2
    y = x / th_min
    return math.fsum(w * reg_lower_gamma(base + k, y) for k, w in enumerate(weights))


def _cdf_moment_match(pair, x):
    shape = pair.mean**2 / pair.variance
    return reg_lower_gamma(shape, x / (pair.variance / pair.mean))


def choose_method(pair):
    """Evaluation route ``auto`` resolves to for ``pair``."""
    if pair.relative_gap < EQUAL_SCALE_GAP:
        return "equal"
    w1, w2 = _partial_fraction_weights(pair)
    if sum(map(abs, w1)) + sum(map(abs, w2)) <= MAX_WEIGHT_MASS:
        return "partial_fractions"
    return "series"


def sum_gamma_cdf(pair, x, method="auto"):
    """CDF of ``X1 + X2`` at ``x`` (scalar or array).

    ``method`` is one of ``auto``, ``partial_fractions``, ``series``,
    ``equal`` or ``moment_match``. The last is the single-gamma moment-matched
    approximation and is never picked automatically.
    """
    if method == "auto":
        method = choose_method(pair)
    if method == "partial_fractions" and pair.relative_gap < EQUAL_SCALE_GAP:
        raise NumericalInstabilityError(
            "partial-fraction expansion is singular for (near-)equal scales; "
            "use method='equal' or 'auto'"
        )
    if method == "equal":
        if pair.relative_gap >= EQUAL_SCALE_GAP:
            raise DomainError("method='equal' requires equal scales")
        scale = 0.5 * (pair.scale1 + pair.scale2)
        shape = pair.shape1 + pair.shape2

        def f(v):
            return reg_lower_gamma(shape, v / scale)
    elif method == "partial_fractions":
        def f(v):
            return _cdf_partial_fractions(pair, v)
    elif method == "series":
        weights = _series_weights(pair)

        def f(v):
            return _cdf_series(pair, v, weights)
    elif method == "moment_match":
        def f(v):
            return _cdf_moment_match(pair, v)
    else:
        raise ValueError(f"unknown method {method!r}")

    def clipped(v):
        if not v >= 0:
            raise DomainError(f"x must be nonnegative, got {v!r}")
        if v == 0:
            return 0.0
        return min(1.0, max(0.0, f(v)))

    if np.ndim(x) == 0:
        return clipped(float(x))
    x = np.asarray(x, dtype=float)
    return np.array([clipped(v) for v in x.ravel()]).reshape(x.shape)


def level_energies(capacity, levels):
    """Battery level energies ``k * capacity / levels`` for ``k = 0..levels``."""
    return np.arange(levels + 1) * (capacity / levels)


def discretize_energy(e, eps1, levels):
    """Largest level ``k <= levels`` whose energy ``k * eps1`` does not exceed ``e``.

    Works on scalars and arrays. Boundaries are half-open, ``[k eps1, (k+1) eps1)``,
    and are checked against ``k * eps1`` so inputs sitting exactly on a level
    energy map to that level despite rounding in ``e / eps1``.
    """
    scalar = np.ndim(e) == 0
    e = np.asarray(e, dtype=float)
    if np.any(e < 0):
        raise DomainError("energy must be nonnegative")
    k = np.floor(e / eps1)
    k = np.where((k + 1) * eps1 <= e, k + 1, k)
    k = np.where(k * eps1 > e, k - 1, k)
    k = np.minimum(k, levels).astype(np.int64)
    return int(k) if scalar else k
