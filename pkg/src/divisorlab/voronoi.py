"""Truncated Voronoi expansion of the divisor error term.

The cosine form is

    Sigma_Y(x) = x**(1/4) * sum_{n<=Y} d(n) n**(-3/4) cos(4 pi sqrt(n x) - pi/4)

and (pi*sqrt(2))**(-1) * Sigma_Y(x) approximates Delta(x); the full expansion
replaces each cosine by the Bessel combination K1 + (pi/2) Y1.  The residual
R(x) = Delta(x) - (pi sqrt 2)**(-1) Sigma_Y(x) has mean square shrinking like
Y**(-1/2) over dyadic windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import bessel
from .divisor import build_divisor_table, delta_of, hyperbola_D

INV_PI_SQRT2 = 1.0 / (math.pi * math.sqrt(2.0))

# beyond this product n*x the phase 4*pi*sqrt(n*x) is formed in extended
# precision; an error above a fraction of 2*pi would scramble the residual
PHASE_DOUBLE_LIMIT = float(1 << 40)


@dataclass(frozen=True)
class TruncatedSum:
    x: float
    Y: int
    value: float


@dataclass(frozen=True)
class ResidualSample:
    x: float
    Y: int
    value: float


@lru_cache(maxsize=8)
def _weights(Y: int) -> tuple[np.ndarray, np.ndarray]:
    """(n array, d(n) * n**(-3/4)) for n = 1..Y."""
    n = np.arange(1, Y + 1, dtype=np.float64)
    d = build_divisor_table(1, Y).values.astype(np.float64)
    return n, d * n ** -0.75


def _phases(x: float, n: np.ndarray) -> np.ndarray:
    """4 pi sqrt(n x) - pi/4, in extended precision when n*x is large."""
    if x * float(n[-1]) > PHASE_DOUBLE_LIMIT:
        nx = n.astype(np.longdouble) * np.longdouble(x)
        ph = 4.0 * np.pi * np.sqrt(nx)
        ph = np.mod(ph, 2 * np.pi)  # reduce while still extended
        return ph.astype(np.float64) - 0.25 * math.pi
    return 4.0 * math.pi * np.sqrt(n * x) - 0.25 * math.pi


def truncated_sum(x: float, Y: int) -> TruncatedSum:
    """The cosine-form partial sum Sigma_Y(x).

    Terms are combined with exact float summation (math.fsum), so the value is
    independent of summation order.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if Y < 0:
        raise ValueError("Y must be >= 0")
    if Y == 0:
        return TruncatedSum(x=float(x), Y=0, value=0.0)
    n, w = _weights(Y)
    terms = w * np.cos(_phases(float(x), n))
    return TruncatedSum(x=float(x), Y=Y, value=x ** 0.25 * math.fsum(terms))


def truncated_sum_many(xs: np.ndarray, Y: int) -> np.ndarray:
    """Sigma_Y at many points; one vectorized pass per point."""
    n, w = _weights(Y)
    out = np.empty(len(xs))
    for i, x in enumerate(np.asarray(xs, dtype=np.float64)):
        out[i] = x ** 0.25 * math.fsum(w * np.cos(_phases(float(x), n)))
    return out


def bessel_tail_term(x: float, n: int) -> float:
    """One term of the Bessel-form expansion of Delta(x):

        -(2 sqrt(x) / pi) * d(n) / sqrt(n) * (K1(z) + (pi/2) Y1(z)),

    z = 4 pi sqrt(n x).  Its large-z limit reproduces the cosine-form summand
    divided by pi*sqrt(2)."""
    if n < 1 or x < 1:
        raise ValueError("need n >= 1 and x >= 1")
    z = 4.0 * math.pi * math.sqrt(n * x)
    d = build_divisor_table(n, n).d(n)
    return -(2.0 * math.sqrt(x) / math.pi) * d / math.sqrt(n) * (
        bessel.k1(z) + 0.5 * math.pi * bessel.y1(z)
    )


def bessel_partial_sum(x: float, Y: int) -> float:
    """Partial Bessel-form sum over n <= Y; cross-check for the cosine form."""
    return math.fsum(bessel_tail_term(x, n) for n in range(1, Y + 1))


def residual_at(x: float, Y: int) -> ResidualSample:
    """Delta(x) - (pi sqrt 2)**(-1) Sigma_Y(x) at one point."""
    D = hyperbola_D(math.floor(x))
    delta = delta_of(float(x), D)
    return ResidualSample(x=float(x), Y=Y,
                          value=delta - INV_PI_SQRT2 * truncated_sum(x, Y).value)


def stratified_midpoints(X: float, H: float, count: int) -> np.ndarray:
    """count deterministic sample points in [X, X+H): one unit-interval
    midpoint per stratum.  Midpoints avoid the jumps of D at integers."""
    if count < 1:
        raise ValueError("sample count must be >= 1")
    strata = X + (np.arange(count) + 0.5) * (H / count)
    return np.floor(strata) + 0.5


def residual_mean_square(X: float, H: float, Y: int, sample_count: int) -> float:
    """Sampled estimate of (1/H) * integral over [X, X+H] of R**2.

    Sampling is stratified and deterministic, so repeated runs agree exactly.
    """
    if X < 2 or H <= 0 or Y < 1:
        raise ValueError("need X >= 2, H > 0, Y >= 1")
    xs = stratified_midpoints(X, H, sample_count)
    ms = np.floor(xs).astype(np.int64)
    deltas = np.array([delta_of(float(x), hyperbola_D(int(m))) for x, m in zip(xs, ms)])
    sigma = truncated_sum_many(xs, Y)
    r = deltas - INV_PI_SQRT2 * sigma
    return float(np.mean(r * r))
