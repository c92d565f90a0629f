from fractions import Fraction
from math import exp, log, pi, sqrt

import pytest

from xifree.asymptotics import (
    c_asymptotic,
    d_sequence,
    driver_ratio,
    ln_big,
    ln_fraction,
    saddle_context,
    saddle_error,
    saddle_h_prime,
    saddle_h_second,
    singular_expansion_check,
    tn_exact_log,
    tn_fixed,
    tn_saddle,
    tree_value,
)
from xifree.errors import ResourceLimitError
from xifree.series import tree_polynomial


def test_saddle_context_identities():
    grid = [10.0 ** (-e) for e in range(1, 7)] + [0.05, 0.2, 0.35, 0.5]
    for a in grid:
        ctx = saddle_context(a)
        assert 0 < ctx.u0 < 1
        assert abs(saddle_h_prime(ctx.u0, a)) < 1e-12
        h2 = saddle_h_second(ctx.u0, a)
        assert h2 > 2
        # the h'' = 2 + 3 sqrt(a) + O(a) expansion gives a usable band
        # only for small a; the saddle grids stay below a = 0.1
        if a <= 0.1:
            assert 2 < h2 <= 2 + 4 * sqrt(a)
        assert abs(ctx.rho / (ctx.u0**2 * h2) - 1) < 1e-9


def test_saddle_context_at_one_half():
    ctx = saddle_context(0.5)
    assert abs(ctx.u0 - 0.5) < 1e-14
    assert abs(saddle_h_second(0.5, 0.5) - 6.0) < 1e-12


def test_saddle_estimate_tracks_exact_values():
    for n in (100, 200):
        an = 3 * int(round(n**0.25))
        a = an / n
        for beta in (-1, 0, 1):
            err = saddle_error(n, an, beta)
            bound = 5 * (sqrt(a) + 1 / sqrt(an))
            assert err < bound
            direct = abs(
                exp(tn_saddle(n, a, beta) - tn_exact_log(n, an + beta)) - 1
            )
            assert err == pytest.approx(direct, rel=1e-12)


def test_tn_fixed_error_scales_like_inverse_sqrt_n():
    # relative error constants from the singular expansion of (1-T)^(-y)
    constants = {2: (2 * sqrt(2) / 3) / sqrt(pi), 3: sqrt(pi / 2)}
    for y, const in constants.items():
        errors = {}
        for n in (100, 400):
            exact = tn_exact_log(n, y)
            approx = tn_fixed(n, y)
            assert approx < exact
            errors[n] = abs(exp(approx - exact) - 1)
            assert errors[n] == pytest.approx(const / sqrt(n), rel=0.15)
        assert errors[400] < errors[100]


def test_tree_value_methods_agree():
    for delta in (0.3, 1e-2, 5e-3, 1.25e-3):
        z = (1 - delta**2) / exp(1)
        methods = ["newton", "lambertw"]
        if delta >= 5e-3:
            methods.append("series")
        values = [tree_value(z, method=m) for m in methods]
        for v in values:
            assert abs(v - z * exp(v)) < 1e-12
        assert max(values) - min(values) < 1e-9
    # the plain series route gives up very close to the singularity
    with pytest.raises(ResourceLimitError):
        tree_value((1 - 1.25e-3**2) / exp(1), method="series")
    with pytest.raises(ValueError):
        tree_value(0.5, method="bogus")
    with pytest.raises(ValueError):
        tree_value(1.0)


def test_singular_expansion_check():
    report = singular_expansion_check()
    assert report["ok"]
    assert report["route_gap"] < 1e-10
    assert report["second_coefficient"] == pytest.approx(2 / 3, rel=1e-3)
    expected = {1: -sqrt(2), 2: 2 / 3, 3: -11 * sqrt(2) / 36}
    for order, want in expected.items():
        # ratios per refinement level; the finest delta should be closest
        got = report["ratios"][order][-1]
        assert got == pytest.approx(want, rel=2e-2)


def test_d_sequence_monotone_below_limit():
    d = d_sequence(8)
    assert d[0] == pytest.approx(5 / 36, rel=1e-12)
    assert all(b >= a for a, b in zip(d, d[1:]))
    assert d[-1] < 1 / (2 * pi)


def test_driver_ratio_is_exact():
    for n, k in ((40, 2), (60, 3)):
        want = float(
            k * Fraction(tree_polynomial(n, 3 * k - 1), tree_polynomial(n, 3 * k))
        )
        assert driver_ratio(n, k) == pytest.approx(want, rel=1e-15)
    # fixed k: the ratio decreases in n
    values = [driver_ratio(n, 2) for n in (50, 100, 200, 400)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_log_helpers_match():
    big = 10**400 + 12345
    assert ln_big(big) == pytest.approx(log(10) * 400, rel=1e-10)
    frac = Fraction(10**300 + 7, 10**280 - 3)
    assert ln_fraction(frac) == pytest.approx(20 * log(10), rel=1e-10)
    assert tn_exact_log(50, 3) == pytest.approx(
        ln_fraction(tree_polynomial(50, 3)), rel=1e-14
    )


def test_c_asymptotic_positive_and_growing():
    assert 0 < c_asymptotic(100, 3) < c_asymptotic(200, 3)
