"""Linear forms in square roots of integers.

A form with signature (p, q) is sum_{i<=p} sqrt(a_i) - sum_{j<=q} sqrt(b_j).
Writing each value as n = a**2 * h with h squarefree gives sqrt(n) = a*sqrt(h),
and since the sqrt(h) for distinct squarefree h are linearly independent over
the rationals, a form vanishes exactly when the integer coefficient sums agree
kernel by kernel.  That makes exact-zero testing decidable without any floating
comparison; everything approximate (near-solution counts, minimal gaps) is done
in floats with high-precision re-verification of near-zero candidates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import mpmath
import numpy as np

# Sides of the enumeration may not exceed this many tuples; larger requests
# must be split by the caller.
DEFAULT_SIDE_BUDGET = 1 << 22

# Below this float magnitude a candidate gap is re-verified in 50-digit
# arithmetic before being trusted as nonzero.
NEAR_ZERO_RECHECK = 1e-8

VERIFY_DPS = 50


class BudgetExceededError(RuntimeError):
    """Enumeration would exceed the configured budget; names the limit hit."""


@dataclass(frozen=True)
class KernelForm:
    """Unique decomposition n = a**2 * h with h squarefree."""

    n: int
    a: int
    h: int


@dataclass(frozen=True)
class RelationSignature:
    """p plus-signs and q minus-signs of a square-root linear form."""

    plus: int
    minus: int

    def __post_init__(self):
        if self.plus < 1 or self.minus < 0:
            raise ValueError("need plus >= 1 and minus >= 0")
        if not 2 <= self.plus + self.minus <= 8:
            raise ValueError("total arity must be between 2 and 8")

    @property
    def arity(self) -> int:
        return self.plus + self.minus

    @property
    def gap_exponent(self) -> float:
        """Exponent e with min nonzero |form| >> Y**(-e) over [1, Y]^arity."""
        return (2 ** (self.arity - 1) - 1) / 2


@dataclass(frozen=True)
class RelationQuery:
    signature: RelationSignature
    ranges: tuple[tuple[int, int], ...]  # inclusive (lo, hi) per variable
    delta: float

    def __post_init__(self):
        if len(self.ranges) != self.signature.arity:
            raise ValueError("one range per variable required")
        for lo, hi in self.ranges:
            if not 1 <= lo <= hi:
                raise ValueError(f"bad range ({lo}, {hi})")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")


@dataclass(frozen=True)
class RelationCount:
    query: RelationQuery
    count: int
    min_nonzero_gap: float


# --------------------------------------------------------------------------
# squarefree-kernel decomposition
# --------------------------------------------------------------------------

DEFAULT_SPF_BOUND = 1 << 20


@lru_cache(maxsize=4)
def _spf_sieve(bound: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..bound."""
    spf = np.arange(bound + 1, dtype=np.int64)
    for p in range(2, math.isqrt(bound) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            np.minimum(sl, p, out=sl)
    return spf


def kernel_decompose(n: int, spf_bound: int = DEFAULT_SPF_BOUND) -> KernelForm:
    """Factor out the largest square: n = a**2 * h with h squarefree.

    Uses the smallest-prime-factor sieve below spf_bound and 64-bit trial
    division above it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a, h = 1, 1
    m = n
    if m <= spf_bound:
        spf = _spf_sieve(spf_bound)
        while m > 1:
            p = int(spf[m])
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            a *= p ** (e // 2)
            if e % 2:
                h *= p
    else:
        if n > (1 << 62):
            raise BudgetExceededError(f"n={n} beyond 64-bit trial-division budget")
        p = 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                a *= p ** (e // 2)
                if e % 2:
                    h *= p
            p += 1 if p == 2 else 2
        if m > 1:
            h *= m
    return KernelForm(n=n, a=a, h=h)


def _kernel_vector(values: Sequence[int], signs: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Canonical kernel coefficient vector of sum_i signs[i] * sqrt(values[i])."""
    acc: dict[int, int] = {}
    for v, s in zip(values, signs):
        kf = kernel_decompose(v)
        acc[kf.h] = acc.get(kf.h, 0) + s * kf.a
    return tuple(sorted((h, c) for h, c in acc.items() if c))


def form_is_zero(plus_values: Sequence[int], minus_values: Sequence[int]) -> bool:
    """Exact test of sum sqrt(plus) == sum sqrt(minus) via kernel grouping."""
    signs = [1] * len(plus_values) + [-1] * len(minus_values)
    return not _kernel_vector(list(plus_values) + list(minus_values), signs)


def form_value_hp(plus_values: Sequence[int], minus_values: Sequence[int], dps: int = VERIFY_DPS):
    """The form evaluated at high precision (mpmath)."""
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for v in plus_values:
            total += mpmath.sqrt(v)
        for v in minus_values:
            total -= mpmath.sqrt(v)
        return total


# --------------------------------------------------------------------------
# exact solutions
# --------------------------------------------------------------------------


def _side_vector_index(count: int, Y: int) -> dict[tuple, list[tuple[int, ...]]]:
    """Map kernel vector -> list of value multisets (nondecreasing tuples)."""
    index: dict[tuple, list[tuple[int, ...]]] = {}
    for combo in itertools.combinations_with_replacement(range(1, Y + 1), count):
        key = _kernel_vector(combo, [1] * count)
        index.setdefault(key, []).append(combo)
    return index


def _multiset_permutations(ms: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    seen = set()
    for perm in itertools.permutations(ms):
        if perm not in seen:
            seen.add(perm)
            yield perm


def exact_relation_solutions(
    signature: RelationSignature, Y: int, side_budget: int = DEFAULT_SIDE_BUDGET
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ordered tuples in [1, Y]^arity solving the relation with equality.

    Yields (plus_tuple, minus_tuple) pairs.  Exactness rests on grouping by
    squarefree kernel: per kernel h the integer coefficient sums on both sides
    must agree, because sqrt(h) for distinct squarefree h are linearly
    independent over the rationals.
    """
    p, q = signature.plus, signature.minus
    for count in (p, q):
        if count and math.comb(Y + count - 1, count) > side_budget:
            raise BudgetExceededError(
                f"side enumeration of {math.comb(Y + count - 1, count)} multisets "
                f"exceeds budget {side_budget}"
            )
    left = _side_vector_index(p, Y)
    if q == 0:
        # a nonempty sum of positive square roots never vanishes
        return
    right = _side_vector_index(q, Y)
    for key, lmss in sorted(left.items()):
        rmss = right.get(key)
        if not rmss:
            continue
        for lms in lmss:
            for rms in rmss:
                for lt in _multiset_permutations(lms):
                    for rt in _multiset_permutations(rms):
                        yield lt, rt


def count_exact_solutions(signature: RelationSignature, Y: int) -> int:
    """Number of ordered exact solutions in [1, Y]^arity."""
    total = 0
    for _ in exact_relation_solutions(signature, Y):
        total += 1
    return total


# --------------------------------------------------------------------------
# near-solution counting and minimal gaps
# --------------------------------------------------------------------------


def _side_sums(ranges: Sequence[tuple[int, int]], side_budget: int) -> np.ndarray:
    """Float64 sums of square roots over the cartesian product of ranges."""
    size = 1
    for lo, hi in ranges:
        size *= hi - lo + 1
    if size > side_budget:
        raise BudgetExceededError(
            f"side of {size} tuples exceeds budget {side_budget}; "
            f"split the meet-in-the-middle ranges"
        )
    sums = np.zeros(1, dtype=np.float64)
    for lo, hi in ranges:
        roots = np.sqrt(np.arange(lo, hi + 1, dtype=np.float64))
        sums = (sums[:, None] + roots[None, :]).ravel()
    return sums


def _side_vector_counts(ranges: Sequence[tuple[int, int]]) -> dict[tuple, int]:
    """Kernel-vector histogram of sum sqrt over the product of ranges."""
    counts: dict[tuple, int] = {(): 1}
    for lo, hi in ranges:
        nxt: dict[tuple, int] = {}
        for v in range(lo, hi + 1):
            kf = kernel_decompose(v)
            for key, c in counts.items():
                acc = dict(key)
                acc[kf.h] = acc.get(kf.h, 0) + kf.a
                nkey = tuple(sorted((h, s) for h, s in acc.items() if s))
                nxt[nkey] = nxt.get(nkey, 0) + c
        counts = nxt
    return counts


def _count_exact_zero_pairs(query: RelationQuery) -> int:
    p = query.signature.plus
    left = _side_vector_counts(query.ranges[:p])
    right = _side_vector_counts(query.ranges[p:])
    return sum(c * right.get(key, 0) for key, c in left.items())


def near_solution_count(
    query: RelationQuery, side_budget: int = DEFAULT_SIDE_BUDGET
) -> RelationCount:
    """Exact count of tuples with 0 < |form| < delta.

    delta == 0 counts the exact solutions instead (kernel-grouped, so it
    agrees with exact_relation_solutions).  delta == inf counts everything
    that is not an exact solution.
    """
    p = query.signature.plus
    for side in (query.ranges[:p], query.ranges[p:]):
        size = math.prod(hi - lo + 1 for lo, hi in side)
        if size > side_budget:
            raise BudgetExceededError(
                f"side of {size} tuples exceeds budget {side_budget}; "
                f"split the meet-in-the-middle ranges"
            )
    zeros = _count_exact_zero_pairs(query)
    if query.delta == 0:
        count = zeros
        min_gap = _min_gap_from_sums(query, side_budget)[0]
        return RelationCount(query=query, count=count, min_nonzero_gap=min_gap)

    plus = np.sort(_side_sums(query.ranges[:p], side_budget))
    minus = _side_sums(query.ranges[p:], side_budget)
    if math.isinf(query.delta):
        total = plus.size * minus.size
        within = total
    else:
        hi_idx = np.searchsorted(plus, minus + query.delta, side="left")
        lo_idx = np.searchsorted(plus, minus - query.delta, side="right")
        within = int((hi_idx - lo_idx).sum())
    count = within - zeros
    min_gap = _min_gap_from_sums(query, side_budget)[0]
    return RelationCount(query=query, count=count, min_nonzero_gap=min_gap)


def _min_gap_from_sums(
    query: RelationQuery, side_budget: int
) -> tuple[float, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """Smallest nonzero |form| over the query box, with a witness."""
    p = query.signature.plus
    plus_ranges, minus_ranges = query.ranges[:p], query.ranges[p:]
    plus = _side_sums(plus_ranges, side_budget)
    minus = _side_sums(minus_ranges, side_budget)
    order = np.argsort(plus)
    plus_sorted = plus[order]

    best = math.inf
    best_pair: tuple[int, int] | None = None  # (plus flat index, minus flat index)
    candidates: list[tuple[float, int, int]] = []
    idx = np.searchsorted(plus_sorted, minus)
    for j, i0 in enumerate(idx):
        for i in (i0 - 1, i0):
            if 0 <= i < plus_sorted.size:
                gap = abs(float(plus_sorted[i]) - float(minus[j]))
                candidates.append((gap, int(order[i]), j))
    candidates.sort()

    def unravel(flat: int, ranges: Sequence[tuple[int, int]]) -> tuple[int, ...]:
        dims = [hi - lo + 1 for lo, hi in ranges]
        out = []
        for lo, n in zip(reversed([lo for lo, _ in ranges]), reversed(dims)):
            out.append(lo + flat % n)
            flat //= n
        return tuple(reversed(out))

    for gap, pi, mi in candidates:
        if gap >= best:
            break
        pt = unravel(pi, plus_ranges)
        mt = unravel(mi, minus_ranges)
        if form_is_zero(pt, mt):
            continue
        if gap < NEAR_ZERO_RECHECK:
            gap = float(abs(form_value_hp(pt, mt)))
        if 0 < gap < best:
            best = gap
            best_pair = (pi, mi)

    if best_pair is None:
        return math.inf, None
    witness = (unravel(best_pair[0], plus_ranges), unravel(best_pair[1], minus_ranges))
    return best, witness


def min_gap(
    signature: RelationSignature, Y: int, side_budget: int = DEFAULT_SIDE_BUDGET
) -> tuple[float, tuple[tuple[int, ...], tuple[int, ...]], float]:
    """Minimal nonzero |form| over [1, Y]^arity, its witness, and gap * Y**e.

    e is the signature's gap exponent (7/2 for (2,2)-type forms, 127/2 for the
    8-variable ones).  The empirical constant is reported, not asserted.
    """
    query = RelationQuery(
        signature=signature,
        ranges=tuple((1, Y) for _ in range(signature.arity)),
        delta=0.0,
    )
    gap, witness = _min_gap_from_sums(query, side_budget)
    if witness is None:
        raise ValueError("no nonzero form in range")
    return gap, witness, gap * Y ** signature.gap_exponent
