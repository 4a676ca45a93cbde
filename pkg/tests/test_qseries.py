"""Truncated q-series ring, eps-splitting, integrality, divisor sums."""

import random
from fractions import Fraction
from math import gcd

import pytest

from conftest import random_series
from finvariant.exactnum import CycNum, EpsPoly, LevelMismatchError, eps
from finvariant.genus import g2
from finvariant.qseries import (EpsPartError, QSeries, divisor_weighted_series,
                                divisors, eps_split, is_integral_series, sigma)


def test_difference_of_squares():
    one_plus_q = QSeries.from_rationals(3, 3, [1, 1])
    one_minus_q = QSeries.from_rationals(3, 3, [1, -1])
    assert one_plus_q * one_minus_q == QSeries.from_rationals(3, 3, [1, 0, -1])


def test_multiplicative_identity():
    rng = random.Random(2)
    one = QSeries.one(3, 6)
    for _ in range(10):
        f = random_series(rng, 3, 6)
        assert f * one == f


def _brute_convolution(a: list[int], b: list[int], prec: int) -> list[int]:
    out = [0] * prec
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < prec:
                out[i + j] += x * y
    return out


def test_geometric_square_coefficient():
    # (sum q^n)^2 has q^5-coefficient 6, frozen from the brute-force convolution
    ones = [1] * 8
    expected = _brute_convolution(ones, ones, 8)
    assert expected[5] == 6
    f = QSeries.from_rationals(3, 8, ones)
    square = f * f
    for n in range(8):
        assert square.coefficient(n) == EpsPoly.rational(3, expected[n])


def test_min_precision_rule():
    f = QSeries.one(3, 10)
    g = QSeries.one(3, 4)
    assert (f + g).prec == 4
    assert (f * g).prec == 4


def test_level_mismatch_rejected():
    with pytest.raises(LevelMismatchError):
        QSeries.one(3, 4) + QSeries.one(2, 4)


def test_associativity_random():
    rng = random.Random(17)
    for _ in range(15):
        f = random_series(rng, 3, 5)
        g = random_series(rng, 3, 5)
        h = random_series(rng, 3, 5)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h


def test_is_integral_series_examples():
    sigma3 = QSeries.from_rationals(3, 50, [0] + [sigma(n, 3) for n in range(1, 50)])
    assert is_integral_series(sigma3)
    half_plus_q = QSeries.from_rationals(3, 4, [Fraction(1, 2), 1])
    assert not is_integral_series(half_plus_q)
    assert is_integral_series(g2(3, 30) - Fraction(1, 12))


def test_is_integral_rejects_eps_part():
    f = QSeries(3, 3, (eps(3),))
    with pytest.raises(EpsPartError):
        is_integral_series(f)


def test_eps_split_definition():
    half_minus_eps = EpsPoly.linear(3, Fraction(1, 2), -1)
    one_minus_2eps = EpsPoly.linear(3, 1, -2)
    f = QSeries(3, 2, (half_minus_eps, one_minus_2eps))
    parts = eps_split(f)
    assert parts[0] == QSeries.from_rationals(3, 2, [Fraction(1, 2), 1])
    assert parts[1] == QSeries.from_rationals(3, 2, [-1, -2])


def test_eps_split_eps_free_and_pure():
    f = QSeries.from_rationals(3, 3, [1, 2, 3])
    assert eps_split(f) == [f]
    pure = f * eps(3)
    parts = eps_split(pure)
    assert parts[0].is_zero()
    assert parts[1] == f


def test_divisor_weighted_first_coefficient():
    # n = 1 has the single divisor d = 1: zeta^-1 - zeta
    f = divisor_weighted_series(3, 4, 1, -1)
    expected = CycNum.zeta(3, -1) - CycNum.zeta(3)
    assert f.coefficient(1) == EpsPoly.constant(expected)
    assert f.coefficient(0) == EpsPoly.zero(3)


def test_divisor_weighted_level2_odd_weight_vanishes():
    # zeta = -1 makes zeta^-j - zeta^j vanish identically
    assert divisor_weighted_series(2, 30, 1, -1).is_zero()


def test_divisor_weighted_weight2_value():
    # n = 2: (zeta^-2+zeta^2)*1 + (zeta^-1+zeta)*2 = -3 at level 3
    f = divisor_weighted_series(3, 4, 2, 1)
    assert f.coefficient(2) == EpsPoly.rational(3, -3)


def test_divisor_weighted_real_at_level2():
    f = divisor_weighted_series(2, 20, 3, 1)
    for n in range(20):
        value = f.coefficient(n).constant_part()
        assert value.rational_part() is not None


def test_divisor_weighted_even_weight_rational_coefficients():
    # for even k the summands zeta^-j + zeta^j are conjugation-fixed, so
    # every coordinate outside the rational line vanishes
    f = divisor_weighted_series(3, 25, 2, 1)
    for n in range(25):
        assert f.coefficient(n).constant_part().rational_part() is not None


def test_sigma_multiplicative_on_coprime_pairs():
    rng = random.Random(9)
    for k in (1, 3):
        for _ in range(40):
            m = rng.randint(1, 40)
            n = rng.randint(1, 40)
            if gcd(m, n) == 1:
                assert sigma(m * n, k) == sigma(m, k) * sigma(n, k)


def test_divisors_sorted_complete():
    assert divisors(12) == (1, 2, 3, 4, 6, 12)
    assert divisors(1) == (1,)


def test_shift():
    f = QSeries.from_rationals(3, 4, [1, 2, 3, 4])
    assert f.shift(2) == QSeries.from_rationals(3, 4, [0, 0, 1, 2])


def test_equality_up_to_shared_precision():
    f = QSeries.from_rationals(3, 6, [1, 2, 3, 4, 5, 6])
    g = QSeries.from_rationals(3, 3, [1, 2, 3])
    assert f == g
    assert g == f
    h = QSeries.from_rationals(3, 3, [1, 2, 4])
    assert f != h
