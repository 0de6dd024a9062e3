"""Exact divisor counts d(n), the summatory function D(x), and the error term
Delta(x) = D(x) - x*log(x) - (2*gamma - 1)*x.

All integer quantities here are exact.  D(x) for real x means D(floor(x)),
which makes Delta right-continuous with a jump of d(m) at each integer m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

# Euler-Mascheroni constant, 30 significant digits, rounded to double.
EULER_GAMMA = 0.577215664901532860606512090082

# Coefficient of the linear term in the main-term approximation of D(x).
TWO_GAMMA_MINUS_ONE = 2.0 * EULER_GAMMA - 1.0

# Default segmented-sieve block: 2**22 integers keeps the working set in cache
# at 1e8..1e9 scale.
DEFAULT_BLOCK = 1 << 22

# Largest argument accepted anywhere; beyond this int64 intermediates in the
# sieve could overflow and memory budgets are unrealistic anyway.
MAX_SIEVE_ARGUMENT = 1 << 52


class RangeOverflowError(ValueError):
    """Requested range exceeds the supported integer width or block budget."""


@dataclass(frozen=True)
class DivisorTable:
    """Exact divisor counts for a contiguous range [lo, lo + len(values))."""

    lo: int
    values: np.ndarray  # int32, values[n - lo] = d(n)

    @property
    def hi(self) -> int:
        """One past the last covered integer."""
        return self.lo + len(self.values)

    def d(self, n: int) -> int:
        if not self.lo <= n < self.hi:
            raise IndexError(f"{n} outside table range [{self.lo}, {self.hi})")
        return int(self.values[n - self.lo])


@dataclass(frozen=True)
class DeltaSample:
    """One evaluation point: x, the exact D(floor(x)), and Delta(x)."""

    x: float
    D: int
    delta: float


def build_divisor_table(lo: int, hi: int) -> DivisorTable:
    """Sieve exact d(n) for all n in [lo, hi], both endpoints inclusive.

    For every divisor d <= sqrt(hi), each multiple n = d*q with q >= d gets
    +2 (the pair d, q) or +1 when q == d.  Cost is O((hi-lo) * log(sqrt(hi)))
    plus O(sqrt(hi)) slice setups.
    """
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    if hi > MAX_SIEVE_ARGUMENT:
        raise RangeOverflowError(f"hi={hi} exceeds supported range {MAX_SIEVE_ARGUMENT}")
    n = hi - lo + 1
    values = np.zeros(n, dtype=np.int32)
    root = math.isqrt(hi)
    for d in range(1, root + 1):
        # first multiple of d in [max(lo, d*d), hi]
        start = max(lo, d * d)
        first = ((start + d - 1) // d) * d
        if first > hi:
            continue
        values[first - lo :: d] += 2
        sq = d * d
        if lo <= sq <= hi:
            values[sq - lo] -= 1
    return DivisorTable(lo=lo, values=values)


def d_trial_division(n: int) -> int:
    """Divisor count by trial division; the independent cross-check."""
    if n < 1:
        raise ValueError("n must be positive")
    count = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            count += 1 if d * d == n else 2
    return count


def hyperbola_D(x: int) -> int:
    """Exact D(x) = sum_{n<=x} d(n) by the hyperbola identity

        D(x) = 2 * sum_{n <= sqrt(x)} floor(x/n) - floor(sqrt(x))**2

    in O(sqrt(x)) time with exact integer arithmetic.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    root = math.isqrt(x)
    total = 0
    for n in range(1, root + 1):
        total += x // n
    return 2 * total - root * root


def hyperbola_D_many(xs: np.ndarray) -> np.ndarray:
    """Vectorized hyperbola_D over an int64 array of arguments.

    Loops over the divisor n (up to sqrt(max x)) and adds floor(x/n) for all
    x >= n*n at once, so the work is O(max_x / 1 + max_x / 2 + ...) numpy
    element operations rather than a Python loop per x.
    """
    xs = np.asarray(xs, dtype=np.int64)
    if xs.size and xs.min() < 1:
        raise ValueError("all arguments must be >= 1")
    roots = np.sqrt(xs.astype(np.float64)).astype(np.int64)
    # guard against floating roundoff on the integer square root
    roots = np.where((roots + 1) * (roots + 1) <= xs, roots + 1, roots)
    roots = np.where(roots * roots > xs, roots - 1, roots)
    out = -roots * roots
    nmax = int(roots.max(initial=0))
    order = np.argsort(xs, kind="stable")
    sorted_xs = xs[order]
    for n in range(1, nmax + 1):
        # x >= n*n  <=>  index past the insertion point of n*n
        start = np.searchsorted(sorted_xs, n * n, side="left")
        out[order[start:]] += 2 * (sorted_xs[start:] // n)
    return out


def delta_of(x: float, D: int) -> float:
    """Delta(x) given the exact D(floor(x)).

    For x beyond 2**40 the product x*log(x) is formed in extended precision:
    Delta ~ x**(1/4) would otherwise drown in the cancellation against D.
    """
    if x > float(1 << 40):
        xl = np.longdouble(x)
        main = xl * np.log(xl) + np.longdouble(TWO_GAMMA_MINUS_ONE) * xl
        return float(np.longdouble(D) - main)
    return D - x * math.log(x) - TWO_GAMMA_MINUS_ONE * x


def delta_at(x: float) -> DeltaSample:
    """Delta(x) with exact D(floor(x)) computed by the hyperbola identity."""
    if x < 1:
        raise ValueError("x must be >= 1")
    D = hyperbola_D(math.floor(x))
    return DeltaSample(x=float(x), D=D, delta=delta_of(float(x), D))


def iter_prefix_blocks(
    lo: int, hi: int, block: int = DEFAULT_BLOCK
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (start, D_values) for consecutive blocks covering [lo, hi).

    D_values[i] is the exact D(start + i) as int64.  Each block seeds its
    prefix from hyperbola_D(start - 1), so blocks are independent and may be
    computed concurrently; this generator yields them in ascending order.
    """
    if lo < 1:
        raise ValueError("lo must be >= 1")
    for start in range(lo, hi, block):
        stop = min(start + block, hi)
        yield start, prefix_block(start, stop)


def prefix_block(start: int, stop: int) -> np.ndarray:
    """Exact D(m) for m in [start, stop) as an int64 array."""
    table = build_divisor_table(start, stop - 1)
    out = np.cumsum(table.values, dtype=np.int64)
    out += hyperbola_D(start - 1) if start > 1 else 0
    return out


def stream_delta(
    lo: int, hi: int, visitor: Callable[[int, int], None], block: int = DEFAULT_BLOCK
) -> None:
    """Visit each unit interval [m, m+1) for m in [lo, hi) with its exact D(m).

    The visitor receives (m, D(m)).  Intervals arrive in ascending order.
    """
    if lo < 2:
        raise ValueError("lo must be >= 2")
    for start, dvals in iter_prefix_blocks(lo, hi, block):
        for i, D in enumerate(dvals):
            visitor(start + i, int(D))
