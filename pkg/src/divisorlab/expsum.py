"""The exponential sum S(x, N, k) = sum_{N < n <= 2N} e(x * n**(1/k)) and a
numerical estimate of its eighth moment over dyadic x ranges, which the theory
bounds by (U N**4 + N**(8 - 1/k)) up to N**epsilon factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# sampling density: at least this many quadrature points per unit change of the
# fastest phase x * (2N)**(1/k); |S|**8 oscillates on exactly that scale
POINTS_PER_PHASE_UNIT = 4

_MAX_QUAD_POINTS = 1 << 24
_X_CHUNK = 1 << 12


@dataclass(frozen=True)
class ExpSumSample:
    x: float
    N: int
    root_exponent: int
    value: complex


@lru_cache(maxsize=32)
def _roots(N: int, k: int) -> np.ndarray:
    """n**(1/k) for n in (N, 2N], refined by one Newton step from the float
    power so the fractional part fed to the phase is accurate to ~1 ulp."""
    n = np.arange(N + 1, 2 * N + 1, dtype=np.float64)
    r = n ** (1.0 / k)
    # Newton step on r**k = n sharpens the last bits of the root
    r = r - (r ** k - n) / (k * r ** (k - 1))
    return r


def eval_S(x: float, N: int, k: int) -> ExpSumSample:
    """Direct summation of S(x, N, k); phases reduced mod 1 before the
    exponential to keep accuracy at large x."""
    if N < 2 or k < 2:
        raise ValueError("need N >= 2 and k >= 2")
    r = _roots(N, k)
    phase = np.mod(x * r, 1.0)
    val = complex(np.sum(np.exp(2j * math.pi * phase)))
    return ExpSumSample(x=float(x), N=N, root_exponent=k, value=val)


def _abs_S8_grid(xs: np.ndarray, N: int, k: int) -> np.ndarray:
    """|S(x, N, k)|**8 on a grid, chunked to bound the working set."""
    r = _roots(N, k)
    out = np.empty(len(xs))
    for i in range(0, len(xs), _X_CHUNK):
        chunk = xs[i : i + _X_CHUNK]
        phase = np.mod(chunk[:, None] * r[None, :], 1.0)
        s = np.exp(2j * math.pi * phase).sum(axis=1)
        out[i : i + _X_CHUNK] = np.abs(s) ** 8
    return out


def moment8_S(U: float, N: int, k: int, samples: int = 16) -> tuple[float, float]:
    """Composite-trapezoid estimate of the eighth moment of S over [U, 2U].

    The grid density is at least POINTS_PER_PHASE_UNIT points per unit change
    of the fastest phase, and at least `samples` points overall.  Returns
    (integral, ratio) where ratio = integral / (U * N**4 + N**(8 - 1/k)).
    """
    if samples < 16:
        raise ValueError("samples must be >= 16")
    if U <= 0:
        raise ValueError("U must be > 0")
    points = max(int(samples), int(POINTS_PER_PHASE_UNIT * U * (2 * N) ** (1.0 / k)) + 1)
    if points > _MAX_QUAD_POINTS:
        raise ValueError(f"quadrature grid of {points} points exceeds budget {_MAX_QUAD_POINTS}")
    xs = np.linspace(U, 2 * U, points)
    vals = _abs_S8_grid(xs, N, k)
    integral = float(np.trapezoid(vals, xs))
    bound = U * N ** 4 + N ** (8.0 - 1.0 / k)
    return integral, integral / bound
