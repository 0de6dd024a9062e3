import math

import numpy as np
import pytest
from scipy import special

from divisorlab import bessel
from divisorlab.divisor import delta_at
from divisorlab.voronoi import (
    INV_PI_SQRT2,
    bessel_partial_sum,
    bessel_tail_term,
    residual_at,
    residual_mean_square,
    stratified_midpoints,
    truncated_sum,
    truncated_sum_many,
)


def test_bessel_large_argument_expansions():
    # the asymptotic branch must agree with the series branch near crossover
    for z in (20.5, 25.0, 60.0, 300.0):
        assert bessel.y1(z) == pytest.approx(float(special.y1(z)), abs=5e-12)
        assert bessel.k1(z) == pytest.approx(float(special.k1(z)), rel=5e-12)
    with pytest.raises(ValueError):
        bessel.y1(0.0)
    with pytest.raises(ValueError):
        bessel.k1(-1.0)


def test_truncated_sum_trivial_and_validation():
    assert truncated_sum(10.0, 0).value == 0.0
    with pytest.raises(ValueError):
        truncated_sum(0.5, 10)
    with pytest.raises(ValueError):
        truncated_sum(10.0, -1)


def test_truncated_sum_first_term():
    # Y = 1: x^{1/4} cos(4 pi sqrt(x) - pi/4)
    x = 7.3
    want = x ** 0.25 * math.cos(4 * math.pi * math.sqrt(x) - math.pi / 4)
    assert truncated_sum(x, 1).value == pytest.approx(want, rel=1e-13)


def test_truncated_sum_many_matches_scalar():
    xs = np.array([10.5, 99.5, 12345.5])
    many = truncated_sum_many(xs, 50)
    for x, v in zip(xs, many):
        assert v == truncated_sum(float(x), 50).value


def test_bessel_term_approaches_cosine_term():
    # for large 4 pi sqrt(nx) the Bessel combination reduces to the cosine
    # summand divided by pi*sqrt(2)
    x, n = 10 ** 4.0, 5
    cos_term = (
        x ** 0.25 * 5 ** -0.75 * 2  # d(5) = 2
        * math.cos(4 * math.pi * math.sqrt(n * x) - math.pi / 4)
    ) * INV_PI_SQRT2
    # agreement up to the O(1/z) correction of the asymptotic expansion
    assert bessel_tail_term(x, n) == pytest.approx(cos_term, abs=5e-4)


def test_bessel_partial_sum_close_to_cosine_form():
    x, Y = 5000.5, 30
    cosine = INV_PI_SQRT2 * truncated_sum(x, Y).value
    assert bessel_partial_sum(x, Y) == pytest.approx(cosine, abs=1e-3)


def test_residual_shrinks_at_half_integer():
    # at a generic half-integer point the truncated expansion converges to
    # Delta, so the residual falls as the cutoff grows
    x = 12345.5
    coarse = abs(residual_at(x, 10).value)
    fine = abs(residual_at(x, 10 ** 5).value)
    assert fine < coarse
    assert fine < 0.2
    assert residual_at(x, 100).value == pytest.approx(
        delta_at(x).delta - INV_PI_SQRT2 * truncated_sum(x, 100).value, rel=1e-12)


def test_series_midpoint_at_integers():
    # at integer x the expansion converges to Delta(x) - d(x)/2, not Delta(x)
    x = 100.0  # d(100) = 9, Delta(100) = 6.03985
    approx = INV_PI_SQRT2 * truncated_sum(x, 2 * 10 ** 5).value
    assert approx == pytest.approx(6.03985 - 4.5, abs=0.25)


def test_stratified_midpoints_deterministic_and_in_range():
    pts = stratified_midpoints(1000.0, 500.0, 64)
    again = stratified_midpoints(1000.0, 500.0, 64)
    assert np.array_equal(pts, again)
    assert np.all(pts >= 1000.0) and np.all(pts < 1500.0)
    assert np.all(pts - np.floor(pts) == 0.5)


def test_residual_mean_square_decreases_with_cutoff():
    X = H = 10 ** 4.0
    coarse = residual_mean_square(X, H, 100, 256)
    fine = residual_mean_square(X, H, 1600, 256)
    assert 0 < fine < coarse


def test_residual_mean_square_validation():
    with pytest.raises(ValueError):
        residual_mean_square(1.0, 10.0, 10, 16)
    with pytest.raises(ValueError):
        stratified_midpoints(10.0, 5.0, 0)
