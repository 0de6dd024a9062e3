"""Partial sums of the singular-series constants attached to the moment
asymptotics of the divisor error term, and the closed-form moment coefficients.

The four constants are sums of q = prod d(v_i) * prod v_i**(-3/4) over exact
integer solutions of a square-root relation:

    C2: sqrt(n)+sqrt(m) = sqrt(k)+sqrt(l)                       (4 variables)
    C4: sqrt(n)+...+sqrt(s) = sqrt(t)+sqrt(j)                   (6 + 2)
    C7: sqrt(n)+sqrt(m)+sqrt(k)+sqrt(l) = sqrt(r)+...+sqrt(j)   (4 + 4)

and C1 is a direct triple sum over (alpha, beta, h) with h squarefree.

Solutions are never enumerated tuple by tuple here.  Writing v = a**2 * h with
h squarefree, a relation holds exactly when the integer coefficient sums agree
for every kernel h, so the weighted solution count factors over kernels.  For
each kernel we build the generating polynomial of per-side coefficient sums and
multiply the per-kernel polynomials; direct 8-fold loops would be infeasible
beyond cutoffs of about 30.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .divisor import build_divisor_table
from .relations import BudgetExceededError

MAX_CONSTANT_CUTOFF = 1 << 20


@dataclass(frozen=True)
class ConstantEstimate:
    name: str  # one of C1, C2, C4, C7, c2_closed
    Y: int
    partial_sum: float
    tail_indicator: float  # |partial(Y) - partial(Y // 2)|


def _check_cutoff(Y: int) -> None:
    if Y < 1:
        raise ValueError("cutoff must be >= 1")
    if Y > MAX_CONSTANT_CUTOFF:
        raise BudgetExceededError(f"cutoff {Y} exceeds enumeration budget {MAX_CONSTANT_CUTOFF}")


@lru_cache(maxsize=16)
def _divisor_counts(bound: int) -> np.ndarray:
    """d(1..bound) as float64, index n-1."""
    return build_divisor_table(1, bound).values.astype(np.float64)


@lru_cache(maxsize=16)
def _squarefree_flags(bound: int) -> np.ndarray:
    flags = np.ones(bound + 1, dtype=bool)
    flags[0] = False
    for p in range(2, math.isqrt(bound) + 1):
        flags[p * p :: p * p] = False
    return flags


def _kernel_side_sums(h: int, Y: int, max_count: int, d: np.ndarray) -> list[np.ndarray]:
    """G[i][s] = weighted count of ordered i-tuples (a_1..a_i), a_j <= isqrt(Y/h),
    with sum a_j = s; weight prod d(a**2 h) * (a**2 h)**(-3/4)."""
    A = math.isqrt(Y // h)
    a = np.arange(1, A + 1, dtype=np.float64)
    vals = (a * a * h).astype(np.int64)
    w = d[vals - 1] * (a * a * h) ** -0.75
    G: list[np.ndarray] = [np.array([1.0])]
    for _ in range(max_count):
        nxt = np.zeros(len(G[-1]) + A, dtype=np.float64)
        for ai in range(1, A + 1):
            nxt[ai:ai + len(G[-1])] += w[ai - 1] * G[-1]
        G.append(nxt)
    return G


def _relation_constant_sum(p: int, q: int, Y: int) -> float:
    """Sum of q-weights over ordered exact solutions with all variables <= Y,
    for the relation with p roots on the left and q on the right.

    Every kernel used must appear on both sides with equal coefficient sums
    (a kernel on one side only would force a positive sum to vanish), so the
    answer is p! q! [x^p y^q] prod_h (1 + f_h(x, y)) where f_h collects the
    per-kernel weighted pairings with i >= 1 left and j >= 1 right slots.
    """
    _check_cutoff(Y)
    d = _divisor_counts(Y)
    sf = _squarefree_flags(Y)
    # F[i, j]: coefficient of x^i y^j in the running product
    F = np.zeros((p + 1, q + 1))
    F[0, 0] = 1.0
    inv_fact = [1.0 / math.factorial(i) for i in range(max(p, q) + 1)]
    for h in range(1, Y + 1):
        if not sf[h]:
            continue
        G = _kernel_side_sums(h, Y, max(p, q), d)
        P = np.zeros((p + 1, q + 1))
        for i in range(1, p + 1):
            for j in range(1, q + 1):
                n = min(len(G[i]), len(G[j]))
                e = float(np.dot(G[i][:n], G[j][:n]))
                P[i, j] = e * inv_fact[i] * inv_fact[j]
        if not P.any():
            continue
        add = np.zeros_like(F)
        for i in range(1, p + 1):
            for j in range(1, q + 1):
                if P[i, j]:
                    add[i:, j:] += P[i, j] * F[: p + 1 - i, : q + 1 - j]
        F += add
    return float(F[p, q]) * math.factorial(p) * math.factorial(q)


def _with_tail(name: str, Y: int, fn) -> ConstantEstimate:
    full = fn(Y)
    half = fn(Y // 2) if Y // 2 >= 1 else 0.0
    return ConstantEstimate(name=name, Y=Y, partial_sum=full, tail_indicator=abs(full - half))


def partial_C2(Y: int) -> ConstantEstimate:
    """Truncated C2: signature (2, 2), all variables <= Y."""
    return _with_tail("C2", Y, lambda y: _relation_constant_sum(2, 2, y))


def partial_C4(Y: int) -> ConstantEstimate:
    """Truncated C4: signature (6, 2), all variables <= Y."""
    return _with_tail("C4", Y, lambda y: _relation_constant_sum(6, 2, y))


def partial_C7(Y: int) -> ConstantEstimate:
    """Truncated C7: signature (4, 4), all variables <= Y."""
    return _with_tail("C7", Y, lambda y: _relation_constant_sum(4, 4, y))


# --------------------------------------------------------------------------
# C1: direct triple sum over (alpha, beta, h)
# --------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _d_of_squares(bound: int) -> np.ndarray:
    """d(s**2) for s = 1..bound (index s-1), via factorization."""
    spf = np.arange(bound + 1)
    for p in range(2, math.isqrt(bound) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            np.minimum(sl, p, out=sl)
    out = np.ones(bound + 1, dtype=np.float64)
    for s in range(2, bound + 1):
        m, acc = s, 1
        while m > 1:
            pp = int(spf[m])
            e = 0
            while m % pp == 0:
                m //= pp
                e += 1
            acc *= 2 * e + 1
        out[s] = acc
    return out[1:]


def _c1_sum(Y: int) -> float:
    """sum over alpha, beta, h <= Y, h squarefree, of
    (alpha*beta*(alpha+beta))**(-3/2) * h**(-9/4) * d(alpha^2 h) d(beta^2 h) d((alpha+beta)^2 h).

    Per squarefree h the alpha/beta sum is a correlation of one vector with
    itself against the shifted d((alpha+beta)^2 h) weights, evaluated by FFT
    convolution; the full triple loop would cost Y**2 per h.
    """
    _check_cutoff(Y)
    n2 = 2 * Y
    d_sq = _d_of_squares(n2)  # d(s^2), s = 1..2Y
    sf = _squarefree_flags(Y)
    spf = np.arange(Y + 1)
    for p in range(2, math.isqrt(Y) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            np.minimum(sl, p, out=sl)
    s_pows = np.arange(1, n2 + 1, dtype=np.float64) ** -1.5

    size = 1
    while size < 2 * n2 + 1:
        size *= 2
    total = 0.0
    for h in range(1, Y + 1):
        if not sf[h]:
            continue
        # dvec[s-1] = d(s^2 h): relative to d(s^2), a prime p | h turns the
        # local factor (2e+1) into (2e+2); applied incrementally per power.
        dvec = d_sq.copy()
        m = h
        while m > 1:
            p = int(spf[m])
            m //= p  # h squarefree: exponent of p is 1
            prev = 2.0
            dvec *= 2.0
            e, pe = 1, p
            while pe <= n2:
                ratio = (2 * e + 2) / (2 * e + 1)
                dvec[pe - 1 :: pe] *= ratio / prev
                prev = ratio
                e += 1
                pe *= p
        a_vec = np.zeros(size)
        a_vec[1 : Y + 1] = s_pows[:Y] * dvec[:Y]
        conv = np.fft.irfft(np.fft.rfft(a_vec) ** 2, size)
        s_idx = np.arange(2, n2 + 1)
        inner = float(np.dot(conv[s_idx], s_pows[s_idx - 1] * dvec[s_idx - 1]))
        total += h ** -2.25 * inner
    return total


def partial_C1(Y: int) -> ConstantEstimate:
    return _with_tail("C1", Y, _c1_sum)


# --------------------------------------------------------------------------
# zeta values and moment coefficients
# --------------------------------------------------------------------------

# B_2, B_4, ..., B_16
_BERNOULLI_EVEN = [
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
    5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510,
]

_ZETA_SPLIT = 50


def zeta_em(s: float) -> float:
    """Riemann zeta for real s > 1 by Euler-Maclaurin, 8 correction terms,
    split point 50; accurate well beyond 12 digits for the s used here."""
    if s <= 1:
        raise ValueError("need s > 1")
    M = _ZETA_SPLIT
    total = sum(n ** -s for n in range(1, M))
    total += M ** (1 - s) / (s - 1) + 0.5 * M ** -s
    factor = s
    power = M ** (-s - 1)
    for j, b in enumerate(_BERNOULLI_EVEN, start=1):
        total += b / math.factorial(2 * j) * factor * power
        # extend the rising product s (s+1) ... (s + 2j) and shift the power
        factor *= (s + 2 * j - 1) * (s + 2 * j)
        power /= M * M
    return total


@lru_cache(maxsize=4)
def default_constants() -> dict[str, float]:
    """Constant estimates at the default cutoffs.

    C1 and C2 are taken as straight partial sums at moderate cutoffs; C4 and
    C7 converge like Y**(-1/2), so they are extrapolated from a doubling
    ladder of cutoffs.
    """
    c1 = partial_C1(512).partial_sum
    c2 = partial_C2(4096).partial_sum
    ladder = (64, 128, 256)
    c4 = extrapolate_sqrt([(y, partial_C4(y).partial_sum) for y in ladder])
    c7 = extrapolate_sqrt([(y, partial_C7(y).partial_sum) for y in ladder])
    return {"C1": c1, "C2": c2, "C4": c4, "C7": c7}


def extrapolate_sqrt(points: list[tuple[int, float]]) -> float:
    """Least-squares fit of value ~ a + b * Y**(-1/2); returns a.

    The partial sums approach their limits with a Y**(-1/2) tail, so the
    fitted intercept is the cutoff-free estimate.
    """
    if len(points) < 2:
        raise ValueError("need at least two cutoffs to extrapolate")
    ys = np.array([v for _, v in points])
    basis = np.column_stack([np.ones(len(points)), [y ** -0.5 for y, _ in points]])
    coef, *_ = np.linalg.lstsq(basis, ys, rcond=None)
    return float(coef[0])


def main_term_coefficient(k: int, constants: dict[str, float] | None = None) -> float:
    """Leading coefficient of the k-th moment main term.

    k=1: X/4.  k=2: zeta(3/2)^4 / (6 pi^2 zeta(3)) * X^(3/2).
    k=3: 3 C1 / (28 pi^3) * X^(7/4).  k=4: 3 C2 / (64 pi^4) * X^2.
    k=8: (35 C7 - 28 C4) / (2048 pi^8) * integral of x^2.
    """
    if k not in (1, 2, 3, 4, 8):
        raise ValueError(f"no closed-form main term for k={k}")
    if k == 1:
        return 0.25
    if k == 2:
        return zeta_em(1.5) ** 4 / (6 * math.pi ** 2 * zeta_em(3.0))
    c = constants if constants is not None else default_constants()
    if k == 3:
        return 3 * c["C1"] / (28 * math.pi ** 3)
    if k == 4:
        return 3 * c["C2"] / (64 * math.pi ** 4)
    return (35 * c["C7"] - 28 * c["C4"]) / (2048 * math.pi ** 8)
