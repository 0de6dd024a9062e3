import itertools
import math

import numpy as np
import pytest

from divisorlab.relations import (
    BudgetExceededError,
    RelationQuery,
    RelationSignature,
    count_exact_solutions,
    exact_relation_solutions,
    form_is_zero,
    form_value_hp,
    kernel_decompose,
    min_gap,
    near_solution_count,
)


@pytest.mark.parametrize("n,a,h", [
    (1, 1, 1), (2, 1, 2), (4, 2, 1), (12, 2, 3), (72, 6, 2),
    (97, 1, 97), (360, 6, 10), (10 ** 6, 1000, 1),
])
def test_kernel_decompose(n, a, h):
    kf = kernel_decompose(n)
    assert (kf.a, kf.h) == (a, h)
    assert kf.a ** 2 * kf.h == n


def test_kernel_decompose_large_uses_trial_division():
    n = (1 << 21) * 9  # above the sieve bound
    kf = kernel_decompose(n)
    assert kf.a ** 2 * kf.h == n
    assert kf.h == 2  # n = 2 * (3 * 2**10)**2


def test_kernel_decompose_rejects_huge():
    with pytest.raises(BudgetExceededError):
        kernel_decompose((1 << 62) + 3)


def test_form_is_zero_examples():
    assert form_is_zero([8, 2], [18])          # 2*sqrt2 + sqrt2 = 3*sqrt2
    assert form_is_zero([1, 9], [4, 4])        # 1 + 3 = 2 + 2
    assert not form_is_zero([2, 3], [5])
    assert not form_is_zero([1, 1], [3])


def test_form_value_hp_matches_float():
    v = form_value_hp([2, 3], [5])
    assert float(v) == pytest.approx(math.sqrt(2) + math.sqrt(3) - math.sqrt(5), abs=1e-15)


def test_signature_validation():
    with pytest.raises(ValueError):
        RelationSignature(0, 2)
    with pytest.raises(ValueError):
        RelationSignature(8, 1)
    assert RelationSignature(2, 2).gap_exponent == 3.5
    assert RelationSignature(4, 4).gap_exponent == 63.5


def test_exact_solutions_11():
    # sqrt(n) = sqrt(r) only for n = r
    sols = list(exact_relation_solutions(RelationSignature(1, 1), 6))
    assert sorted(sols) == [((n,), (n,)) for n in range(1, 7)]


def test_exact_solutions_22_y4_count():
    # brute-force count over 4**4 tuples: 28, all multiset-diagonal
    assert count_exact_solutions(RelationSignature(2, 2), 4) == 28


def test_exact_solutions_include_nondiagonal():
    sols = set(exact_relation_solutions(RelationSignature(2, 2), 9))
    assert ((1, 9), (4, 4)) in sols
    assert ((9, 1), (4, 4)) in sols


def test_exact_solutions_80_empty():
    assert count_exact_solutions(RelationSignature(8, 0), 5) == 0


def test_exact_solutions_budget():
    with pytest.raises(BudgetExceededError):
        list(exact_relation_solutions(RelationSignature(4, 4), 10 ** 9))


def _brute_count(sig, box, delta):
    """Independent float-filtered brute force over the full product."""
    sides = []
    for which in (box[: sig.plus], box[sig.plus:]):
        sums = np.zeros(1)
        for lo, hi in which:
            r = np.sqrt(np.arange(lo, hi + 1, dtype=np.float64))
            sums = (sums[:, None] + r[None, :]).ravel()
        sides.append(sums)
    diff = np.abs(sides[0][:, None] - sides[1][None, :]).ravel()
    eps = 1e-9
    return int(((diff > eps) & (diff < delta)).sum())


@pytest.mark.parametrize("delta", [0.005, 0.05, 0.5])
def test_near_solution_count_matches_brute_force(delta):
    sig = RelationSignature(2, 2)
    box = ((1, 15), (1, 15), (1, 15), (1, 15))
    rc = near_solution_count(RelationQuery(sig, box, delta))
    assert rc.count == _brute_count(sig, box, delta)


def test_near_solution_count_delta_zero_is_exact_count():
    sig = RelationSignature(2, 2)
    box = tuple((1, 9) for _ in range(4))
    rc = near_solution_count(RelationQuery(sig, box, 0.0))
    assert rc.count == count_exact_solutions(sig, 9)


def test_near_solution_count_monotone_in_delta():
    sig = RelationSignature(2, 2)
    box = tuple((1, 20) for _ in range(4))
    counts = [near_solution_count(RelationQuery(sig, box, d)).count
              for d in (0.001, 0.01, 0.1, 1.0)]
    assert counts == sorted(counts)


def test_near_solution_count_budget():
    sig = RelationSignature(2, 2)
    box = tuple((1, 10 ** 5) for _ in range(4))
    with pytest.raises(BudgetExceededError):
        near_solution_count(RelationQuery(sig, box, 0.1))


def test_min_gap_matches_exhaustive():
    sig = RelationSignature(2, 2)
    Y = 10
    gap, witness, const = min_gap(sig, Y)
    best = math.inf
    for t in itertools.product(range(1, Y + 1), repeat=4):
        if form_is_zero(t[:2], t[2:]):
            continue
        v = abs(float(form_value_hp(t[:2], t[2:])))
        best = min(best, v)
    assert gap == pytest.approx(best, rel=1e-12)
    assert const == pytest.approx(best * Y ** 3.5, rel=1e-12)
    pt, mt = witness
    assert not form_is_zero(pt, mt)
    assert abs(float(form_value_hp(pt, mt))) == pytest.approx(gap, rel=1e-12)


def test_min_gap_positive_for_8_variables():
    gap, witness, const = min_gap(RelationSignature(4, 4), 6)
    assert gap > 0
    assert const > 0
    assert len(witness[0]) == 4 and len(witness[1]) == 4
