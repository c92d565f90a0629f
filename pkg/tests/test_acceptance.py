"""Acceptance suite: every headline guarantee at its stated scale.

Each test pins one contract of the package: exact constants, oracle
equality for the series pipelines, brute-force agreement for the
triangle-free closed forms, residuals, inequality suites, saddle-point
error bounds, and Monte Carlo agreement with the limit probabilities.
Budgets are asserted where a contract includes one.
"""

import time
from fractions import Fraction
from math import comb, exp, sqrt

import pytest

from xifree.asymptotics import (
    c_asymptotic,
    driver_ratio,
    ln_fraction,
    saddle_error,
)
from xifree.census import (
    ForbiddenSet,
    closed_form,
    compute_wk,
    inequality_check,
    recurrence_residual,
    smooth_bicyclic_partition,
    t_expansion,
    wright_constants,
)
from xifree.oracle import connected_counts, triangle_scan
from xifree.probability import (
    ComponentProfile,
    low_complexity_probability,
    profile_probability,
)
from xifree.series import Series
from xifree.simulator import ProcessConfig, run_trials, run_trials_multi

SEED = 20260815
THETA34 = ForbiddenSet(frozenset({3, 4}))
EVENTS = (
    "maxexcess:0",
    "maxexcess:0&cpfree:3&cpfree:4",
    "maxexcess:1&cpfree:3",
)
TARGETS = (
    low_complexity_probability(0),
    profile_probability(ComponentProfile(), theta=(3, 4)),
    low_complexity_probability(1, (3,)),
)


@pytest.fixture(scope="module")
def full_sweep():
    config = ProcessConfig(
        n=100_000, m=50_000, trials=40_000, seed=SEED, forbidden=THETA34
    )
    start = time.perf_counter()
    results = run_trials_multi(config, list(EVENTS))
    return results, time.perf_counter() - start


@pytest.fixture(scope="module")
def fast_sweep():
    config = ProcessConfig(
        n=10_000, m=5_000, trials=10_000, seed=SEED, forbidden=THETA34
    )
    start = time.perf_counter()
    results = run_trials_multi(config, list(EVENTS))
    return results, time.perf_counter() - start


def test_criterion_01_constants():
    start = time.perf_counter()
    # both construction routes are compared internally; any disagreement
    # for k <= 20, r <= 3 raises instead of returning
    tables = [wright_constants(20, r=r) for r in (0, 1, 2, 3)]
    elapsed = time.perf_counter() - start
    table = tables[0]
    assert len(table.b) >= 13
    assert table.b[1] == Fraction(5, 24)
    assert table.b[2] == Fraction(5, 16)
    assert table.c[1] == Fraction(19, 24)
    assert table.c[2] == Fraction(65, 48)
    assert table.cprime[1] == Fraction(25, 24)
    assert table.cprime[2] == Fraction(5, 3)
    assert elapsed < 1.0


@pytest.mark.slow
def test_criterion_02_wk_pipeline_matches_oracle(wk_graph, wk_multigraph):
    start = time.perf_counter()
    for model, series_list in (("graph", wk_graph), ("multigraph", wk_multigraph)):
        oracle = connected_counts(30, 6, model)
        for k in range(1, 7):
            expr = series_list[k - 1]
            for n in range(1, 31):
                expected = oracle.get((n, n + k), Fraction(0))
                assert expr.count(n) == expected, (model, k, n)
    assert time.perf_counter() - start < 30.0


@pytest.mark.slow
def test_criterion_03_closed_forms_equal_brute_censuses():
    start = time.perf_counter()
    w = {k: closed_form(f"w{k}_c3") for k in (0, 1, 2)}
    s = {k: closed_form(f"s{k}_c3") for k in (1, 2)}
    j = {k: closed_form(f"j{k}_c3") for k in (1, 2)}
    for n in range(3, 9):
        for k in (0, 1, 2):
            m = n + k
            if m > comb(n, 2):
                continue
            scan = triangle_scan(n, m)
            assert w[k].count(n) == scan["c3free_connected"], (n, k)
            if k >= 1:
                assert s[k].count(n) == scan["one_triangle_connected"], (n, k)
                juxta = (
                    scan["juxta_weight_connected"]
                    - 3 * scan["one_triangle_connected"]
                )
                assert j[k].count(n) == juxta, (n, k)
    assert time.perf_counter() - start < 600.0


def test_criterion_04_recurrence_residuals():
    for k in (0, 1):
        assert recurrence_residual(k, forbidden="c3", order=25).is_zero()
    for k in range(1, 6):
        assert recurrence_residual(k, order=25).is_zero()
        assert recurrence_residual(k, model="multigraph", order=25).is_zero()


def test_criterion_05_inequality_suites(wk_graph):
    for k in (1, 2):
        report = inequality_check("wright", k=k, order=40)
        assert report.ok, report
    assert inequality_check("sbound", order=40).ok
    assert inequality_check("jbound", order=40).ok
    for r in (1, 2, 3):
        assert inequality_check("constants", kmax=12, r=r).ok
    # vanishing threshold: no connected graph of excess k below the first
    # n whose complete graph holds n + k edges
    for k in range(1, 7):
        n0 = next(n for n in range(2, 20) if comb(n, 2) >= n + k)
        expr = wk_graph[k - 1]
        for n in range(1, n0):
            assert expr.count(n) == 0, (k, n)
        assert expr.count(n0) > 0, k


def test_criterion_06_bicyclic_triangle_free_coefficients():
    w1c3 = closed_form("w1_c3")
    assert w1c3.log_coeff == 0
    assert w1c3.terms == {
        3: Fraction(5, 24),
        2: Fraction(-25, 24),
        1: Fraction(47, 24),
        0: Fraction(-35, 24),
        -1: Fraction(-5, 24),
        -2: Fraction(25, 24),
        -3: Fraction(-5, 8),
        -4: Fraction(1, 8),
    }


@pytest.mark.slow
def test_criterion_07_saddle_point_error_bounds():
    start = time.perf_counter()
    for n in (100, 200, 400, 800, 1600):
        an = 3 * int(n**0.25)
        a = an / n
        bound = 5 * (sqrt(a) + 1 / sqrt(an))
        for beta in (-1, 0, 1):
            assert saddle_error(n, an, beta) <= bound, (n, beta)
    assert time.perf_counter() - start < 120.0


def test_criterion_08_driver_ratio_strictly_decreasing():
    ratios = [driver_ratio(n) for n in (200, 400, 800, 1600)]
    assert all(b < a for a, b in zip(ratios, ratios[1:])), ratios


@pytest.mark.slow
def test_criterion_09_asymptotic_count_trend():
    gaps = {}
    for n in (200, 800):
        k = int(n**0.3)
        series_list = compute_wk(k, "graph")
        exact_log = ln_fraction(series_list[k - 1].count(n))
        gaps[n] = abs(exp(exact_log - c_asymptotic(n, k)) - 1)
    assert gaps[800] < gaps[200]


@pytest.mark.slow
def test_criterion_10_monte_carlo_matches_limits(full_sweep):
    results, elapsed = full_sweep
    for event, target in zip(EVENTS, TARGETS):
        estimate = results[event]
        tolerance = 3 * estimate.stderr + 0.03
        assert abs(estimate.p_hat - target) <= tolerance, (event, estimate, target)
        assert estimate.discarded / estimate.trials < 1e-4
    assert elapsed < 1800.0


@pytest.mark.slow
def test_criterion_10_fast_profile(fast_sweep):
    results, elapsed = fast_sweep
    for event, target in zip(EVENTS, TARGETS):
        estimate = results[event]
        tolerance = 3 * estimate.stderr + 0.05
        assert abs(estimate.p_hat - target) <= tolerance, (event, estimate, target)
    assert elapsed < 120.0


@pytest.mark.slow
def test_criterion_11_permutation_model_agrees(fast_sweep):
    results, _ = fast_sweep
    uniform = results[EVENTS[2]]
    config = ProcessConfig(
        n=10_000,
        m=5_000,
        model="permutation",
        trials=10_000,
        seed=SEED,
        forbidden=THETA34,
    )
    permutation = run_trials(config, EVENTS[2])
    combined = sqrt(uniform.stderr**2 + permutation.stderr**2)
    assert abs(uniform.p_hat - permutation.p_hat) <= 3 * combined + 0.03


def test_criterion_12_partition_identity():
    series = smooth_bicyclic_partition(40)
    # z^4 (6 - z) / (24 (1 - z)^3) expanded exactly
    numerator = Series.monomial(4, 40, Fraction(6, 24)) - Series.monomial(
        5, 40, Fraction(1, 24)
    )
    geometric = (Series.one(40) - Series.monomial(1, 40)).inverse()
    closed = numerator * geometric.pow(3)
    assert series == closed
    w1 = closed_form("w1")
    assert t_expansion(w1, 40) == [series[n] for n in range(41)]
