import cmath
import math

import numpy as np
import pytest

from divisorlab.expsum import eval_S, moment8_S


def test_eval_S_at_zero():
    s = eval_S(0.0, 10, 2)
    assert s.value == pytest.approx(10.0 + 0j, abs=1e-14)


def test_eval_S_hand_oracle():
    # S(1, 2, 2) = e(sqrt(3)) + e(sqrt(4)) summed over n in (2, 4]
    want = sum(cmath.exp(2j * math.pi * math.sqrt(n)) for n in (3, 4))
    got = eval_S(1.0, 2, 2).value
    assert got == pytest.approx(want, abs=1e-13)


def test_eval_S_cube_roots():
    want = sum(cmath.exp(2j * math.pi * 0.7 * n ** (1.0 / 3.0)) for n in range(5, 9))
    assert eval_S(0.7, 4, 3).value == pytest.approx(want, abs=1e-12)


def test_eval_S_conjugate_symmetry():
    a = eval_S(2.5, 50, 2).value
    b = eval_S(-2.5, 50, 2).value
    assert a == pytest.approx(b.conjugate(), abs=1e-12)


def test_eval_S_validation():
    with pytest.raises(ValueError):
        eval_S(1.0, 1, 2)
    with pytest.raises(ValueError):
        eval_S(1.0, 10, 1)


def test_trivial_bound():
    # |S| <= N always
    for x in np.linspace(0.1, 20.0, 7):
        assert abs(eval_S(float(x), 32, 2).value) <= 32.0 + 1e-9


def test_moment8_bound_ratio():
    integral, ratio = moment8_S(64.0, 16, 2)
    assert integral > 0
    bound = 64.0 * 16 ** 4 + 16 ** 7.5
    assert ratio == pytest.approx(integral / bound, rel=1e-15)
    assert ratio < 8.0  # far below the theoretical envelope in practice


def test_moment8_grid_refinement_stable():
    # doubling the minimum sample count must not change a resolved integral
    a, _ = moment8_S(4.0, 8, 2, samples=1024)
    b, _ = moment8_S(4.0, 8, 2, samples=2048)
    assert b == pytest.approx(a, rel=2e-3)


def test_moment8_validation():
    with pytest.raises(ValueError):
        moment8_S(10.0, 16, 2, samples=8)
    with pytest.raises(ValueError):
        moment8_S(0.0, 16, 2)
    with pytest.raises(ValueError):
        moment8_S(10.0 ** 9, 4096, 2)  # grid budget
