"""Lieb-Robinson bound evaluation and nearest-neighbour light-cone references.

For a nearest-neighbour XY chain with bond strength g (rad/s), the signal
that a local perturbation can deposit at distance d after time t is bounded
by a sum over hopping paths:

    F(d, t) = 2 sum_{m >= d} N(m) (2 g |t|)^m / m!

where N(m) = C(m, (m-d)/2) counts the m-step walks covering a net distance
d (zero when m and d differ in parity).  The sum has the closed form
F(d, t) = 2 I_d(4 g |t|) with I_d the modified Bessel function of the
first kind; series and closed form are implemented independently and
cross-validated (the overall factor 2 is part of the bound's
normalization and is carried by both routes).

Everything uses hbar = 1; g and 1/t are angular frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ionchain import CouplingMatrix, nearest_neighbour_coupling
from .magnon import diagonalize_magnons, max_group_velocity

#: Switch from the power series to the asymptotic expansion above this argument.
_BESSEL_SERIES_LIMIT = 100.0

#: Relative truncation target of the Bessel power series.
_BESSEL_RTOL = 1e-14


class TruncationError(RuntimeError):
    """Raised when a series cannot reach the requested truncation error."""


@dataclass(frozen=True)
class LightConeParams:
    """Nearest-neighbour light-cone reference parameters.

    ``g`` (rad/s) is the largest nearest-neighbour bond and feeds the
    Bessel bound; ``v`` (sites/s) is the cone velocity of the uniform
    nearest-neighbour model at the mean bond strength ``jbar``.  ``mu``
    and ``C`` are display constants for the generic exponential envelope
    C exp(mu (v|t| - d)); they are not derived from the couplings.
    """

    g: float
    v: float
    jbar: float
    mu: float = 1.0
    C: float = 1.0

    def __post_init__(self):
        if self.g < 0 or self.v < 0:
            raise ValueError("g and v must be non-negative")


@dataclass(frozen=True)
class SeriesSum:
    """Truncated series value with its next-term remainder estimate."""

    value: float
    remainder: float
    terms_used: int


def path_count(m: int, d: int) -> int:
    """Number of m-step nearest-neighbour walks with net displacement d.

    Exact integer C(m, (m-d)/2) when m >= d and m, d share parity, else 0.
    Python integers keep this exact at any size.
    """
    if m < 0 or d < 0:
        raise ValueError("m and d must be non-negative")
    if m < d or (m - d) % 2:
        return 0
    return math.comb(m, (m - d) // 2)


def lr_bound_series(d: int, t: float, g: float, m_max: int = 200,
                    rtol: float = 1e-12) -> SeriesSum:
    """Path-counting evaluation of the bound F(d, t), truncated at m_max.

    Terms 2 N(m) x^m / m! with x = 2 g |t| are accumulated over
    m = d, d+2, ... until the next term falls below ``rtol`` of the
    running sum or ``m_max`` is passed.  The returned ``remainder`` is the
    ratio of the first omitted term to the sum.

    Raises
    ------
    TruncationError
        If the truncation target is still unmet at m_max.
    """
    if d < 0:
        raise ValueError("distance must be non-negative")
    if m_max < d:
        raise ValueError(f"m_max {m_max} below leading order {d}")
    x = 2.0 * g * abs(t)
    # x^m/m! maintained iteratively in steps of two
    xm_over_mfact = x ** d / math.factorial(d)
    total = 0.0
    m = d
    while m <= m_max:
        term = 2.0 * path_count(m, d) * xm_over_mfact
        total += term
        xm_over_mfact *= x * x / ((m + 1) * (m + 2))
        next_term = 2.0 * path_count(m + 2, d) * xm_over_mfact
        if next_term <= rtol * total:
            return SeriesSum(value=total, remainder=_ratio(next_term, total), terms_used=m)
        m += 2
    raise TruncationError(
        f"series for d={d}, 2g|t|={x:.4g} not converged to rtol={rtol:g} at "
        f"m_max={m_max} (remainder estimate {_ratio(next_term, total):.3g})")


def _ratio(num: float, den: float) -> float:
    return num / den if den != 0.0 else 0.0


def lr_bound_bessel(d: int, t: float, g: float) -> float:
    """Closed-form bound F(d, t) = 2 I_d(4 g |t|)."""
    if d < 0:
        raise ValueError("distance must be non-negative")
    return 2.0 * modified_bessel_i(d, 4.0 * g * abs(t))


def modified_bessel_i(order: int, x: float, scaled: bool = False) -> float:
    """Modified Bessel function I_order(x) for x >= 0, integer order.

    The power series sum_s (x/2)^(order+2s) / (s! (s+order)!) is used up
    to x = 100 (all terms positive, relative truncation 1e-14); beyond
    that the large-argument asymptotic expansion takes over, since the
    series needs ~x terms there while the asymptotic series converges in
    a handful.  With ``scaled`` the numerically safe e^-x I_order(x) is
    returned; unscaled values overflow to inf for x beyond ~709 as they
    must.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if x < 0:
        raise ValueError("argument must be non-negative")
    if x <= _BESSEL_SERIES_LIMIT:
        value = _bessel_series(order, x)
        if scaled:
            value *= math.exp(-x)
        return value
    scaled_value = _bessel_asymptotic_scaled(order, x)
    if scaled:
        return scaled_value
    with np.errstate(over="ignore"):
        return float(np.exp(np.float64(x)) * scaled_value)


def _bessel_series(order: int, x: float) -> float:
    half = 0.5 * x
    term = 1.0
    for i in range(1, order + 1):      # (x/2)^order / order!, underflow-safe
        term *= half / i
    total = term
    s = 0
    while term > _BESSEL_RTOL * total:
        term *= half * half / ((s + 1) * (s + 1 + order))
        total += term
        s += 1
        if s > 10000:
            raise TruncationError(f"Bessel series stalled at order={order}, x={x}")
    return total


def _bessel_asymptotic_scaled(order: int, x: float) -> float:
    """e^-x I_order(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(order) / x^k."""
    mu = 4.0 * order * order
    term = 1.0
    total = term
    for k in range(1, 40):
        factor = -(mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        new_term = term * factor
        if abs(new_term) >= abs(term):      # asymptotic series started diverging
            break
        term = new_term
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * x)


def nn_lightcone(J: CouplingMatrix, mu: float = 1.0, C: float = 1.0) -> LightConeParams:
    """Nearest-neighbour light-cone reference for a given coupling matrix.

    The mean first-off-diagonal coupling Jbar defines a uniform
    nearest-neighbour chain of the same length whose maximal magnon group
    velocity is the cone velocity; g = max_i |J_{i,i+1}| feeds the Bessel
    bound.
    """
    jbar = J.nn_mean
    g = float(np.abs(np.diag(J.values, 1)).max())
    reference = nearest_neighbour_coupling(J.n_ions, jbar)
    v = max_group_velocity(diagonalize_magnons(reference))
    return LightConeParams(g=g, v=v, jbar=jbar, mu=mu, C=C)


def cone_arrival_times(params: LightConeParams, distances) -> np.ndarray:
    """Cone line t = d / v for the given distances (inf when v = 0)."""
    d = np.asarray(distances, dtype=float)
    if params.v == 0.0:
        return np.full(d.shape, np.inf)
    return d / params.v
