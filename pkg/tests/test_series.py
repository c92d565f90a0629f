from fractions import Fraction
from math import factorial

import pytest

from xifree.series import (
    BivariateSeries,
    Series,
    SeriesError,
    cayley_tree_series,
    log_inv_x_count,
    log_inv_x_series,
    tree_polynomial,
    x_power_series,
)


def test_constructors_and_indexing():
    s = Series([1, Fraction(1, 2), 0, 3])
    assert s.order == 3
    assert s[1] == Fraction(1, 2)
    assert s[10] == 0
    assert Series.zero(4).is_zero()
    assert Series.one(4)[0] == 1
    m = Series.monomial(2, 5, coeff=Fraction(7, 3))
    assert m[2] == Fraction(7, 3) and m[1] == 0


def test_ring_operations():
    a = Series([1, 2, 3])
    b = Series([0, 1, 1])
    assert (a + b)[1] == 3
    assert (a - b)[2] == 2
    assert (a * b)[2] == 3  # 1*1 + 2*1
    assert (-a)[0] == -1
    assert a.scale(Fraction(1, 2))[1] == 1
    assert a.truncate(1).order == 1


def test_inverse_log_exp_round_trips():
    a = Series([1, Fraction(1, 3), Fraction(-2, 7), 5, 0, 1])
    assert (a * a.inverse()) == Series.one(5)
    assert a.log().exp() == a
    e = Series([0, 1, Fraction(1, 2), Fraction(1, 6)])
    assert e.exp().log() == e
    assert a.pow(3) == a * a * a


def test_undefined_operations_raise():
    with pytest.raises(SeriesError):
        Series([0, 1]).inverse()
    with pytest.raises(SeriesError):
        Series([2, 1]).log()
    with pytest.raises(SeriesError):
        Series([1, 1]).exp()


def test_theta_multiplies_by_n():
    s = Series([5, 1, Fraction(1, 4)])
    t = s.theta()
    assert t[0] == 0 and t[1] == 1 and t[2] == Fraction(1, 2)


def test_cayley_tree_series_counts():
    t = cayley_tree_series(8)
    for n in range(1, 9):
        assert t.count(n) == n ** (n - 1)
    # functional equation T = z exp(T)
    z = Series.monomial(1, 8)
    assert (z * t.exp()).truncate(8) == t


def test_x_power_series_matches_tree_polynomial():
    for t_pow in (-3, -1, 0, 1, 2, 5):
        s = x_power_series(t_pow, 9)
        for n in range(1, 10):
            assert s.count(n) == tree_polynomial(n, t_pow)


def test_tree_polynomial_values():
    # t_n(1) = n^n and t_n(0) = [n == 0]
    for n in range(1, 12):
        assert tree_polynomial(n, 1) == n**n
        assert tree_polynomial(n, 0) == 0
    assert tree_polynomial(0, 5) == 1
    # forward difference in y equals a shifted tree-power count:
    # (1-T)^{-y-1} - (1-T)^{-y} = T (1-T)^{-y-1}
    for n in (4, 7):
        for y in (-2, 0, 3):
            direct = tree_polynomial(n, y + 1) - tree_polynomial(n, y)
            shifted = sum(
                Fraction(factorial(n), factorial(i) * factorial(n - i))
                * _t_count(i)
                * _xp_count(n - i, y + 1)
                for i in range(n + 1)
            )
            assert direct == shifted


def _t_count(n):
    return Fraction(n ** (n - 1)) if n >= 1 else Fraction(0)


def _xp_count(n, y):
    return tree_polynomial(n, y) if n >= 1 else Fraction(1)


def test_log_inv_x_series_and_count_agree():
    s = log_inv_x_series(9)
    for n in range(1, 10):
        assert s.count(n) == log_inv_x_count(n)
    # closed sum: n! [z^n] ln 1/(1-T) = sum_i n^{n-i-1} n!/(n-i)!
    for n in (3, 6, 9):
        expected = sum(
            Fraction(n) ** (n - i - 1) * Fraction(factorial(n), factorial(n - i))
            for i in range(1, n + 1)
        )
        assert log_inv_x_count(n) == expected


def test_bivariate_multiplication_and_log():
    # rows[n] maps edge count to the z^n coefficient; the product is the
    # ordinary convolution and truncates to the shorter operand.
    vertex = BivariateSeries(
        [{0: Fraction(1)}, {0: Fraction(1)}, {}], excess_cap=2
    )
    square = vertex * vertex
    assert square.coefficient(1, 0) == 2
    assert square.coefficient(2, 0) == 1
    edge = BivariateSeries(
        [{0: Fraction(1)}, {0: Fraction(1)}, {0: Fraction(1), 1: Fraction(1)}],
        excess_cap=2,
    )
    # log(1 + z + (1+w)z^2) = z + (1/2 + w)z^2 + O(z^3)
    lg = edge.log()
    assert lg.coefficient(1, 0) == 1
    assert lg.coefficient(2, 1) == 1
    assert lg.coefficient(2, 0) == Fraction(1, 2)
