from fractions import Fraction

import pytest

from xifree.census import (
    ConstantTable,
    ForbiddenGraph,
    ForbiddenSet,
    TRIANGLE_SET,
    catalogue,
    closed_form,
    closed_form_excess,
    inequality_check,
    leading_coefficients,
    partition_count,
    partition_series,
    reconstruct_triangle_free,
    recurrence_residual,
    smooth_bicyclic_partition,
    t_expansion,
    w1_xifree_leading,
    wright_constants,
)
from xifree.oracle import GraphInstance, brute_census, connected_count, cycle_edges

CATALOGUE_NAMES = {
    "w_minus1",
    "w0",
    "w0_multi",
    "w0_c3",
    "w0_c3_multi",
    "w0_xi",
    "w0_xi_multi",
    "w1",
    "w1_c3",
    "w2_c3",
    "s0_c3",
    "s1_c3",
    "s2_c3",
    "j1_c3",
    "j2_c3",
}


def test_wright_constants_pinned_values():
    t = wright_constants(4, r=2)
    assert isinstance(t, ConstantTable)
    assert t.b[1] == Fraction(5, 24)
    assert t.b[2] == Fraction(5, 16)
    assert t.b[3] == Fraction(1105, 1152)
    assert t.b[4] == Fraction(565, 128)
    assert t.c[1] == Fraction(19, 24)
    assert t.c[2] == Fraction(65, 48)
    assert t.cprime[1] == Fraction(25, 24)
    assert t.cprime[2] == Fraction(5, 3)
    assert t.cprime_xi[1] == Fraction(31, 24)
    assert t.b[0] == Fraction(1, 2)


def test_wright_constants_match_computed_series(wk_graph):
    t = wright_constants(6, r=1)
    for k in range(1, 7):
        b, c = leading_coefficients(wk_graph[k - 1], k)
        assert t.b[k] == b
        assert t.c[k] == -c


def test_catalogue_names_and_excesses():
    cat = catalogue()
    assert set(cat) == CATALOGUE_NAMES
    assert closed_form_excess("w_minus1") == -1
    assert closed_form_excess("w0") == 0
    assert closed_form_excess("w1_c3") == 1
    assert closed_form_excess("j2_c3") == 2


def test_closed_forms_match_connected_oracle():
    w0 = closed_form("w0")
    for n in range(3, 8):
        assert w0.count(n) == connected_count(n, n)
    wm1 = closed_form("w_minus1")
    for n in range(1, 8):
        assert wm1.count(n) == n ** max(n - 2, 0)
    w0m = closed_form("w0_multi")
    for n in range(1, 6):
        assert w0m.count(n) == connected_count(n, n, "multigraph")
    w1 = closed_form("w1")
    for n in range(4, 8):
        assert w1.count(n) == connected_count(n, n + 1)


def test_triangle_free_closed_forms_match_brute():
    w0c3 = closed_form("w0_c3")
    s0c3 = closed_form("s0_c3")
    for n in range(3, 7):
        free = brute_census(
            n, n, lambda g: g.is_connected() and g.triangle_count() == 0
        )
        one = brute_census(
            n, n, lambda g: g.is_connected() and g.triangle_count() == 1
        )
        assert w0c3.count(n) == free
        assert s0c3.count(n) == one
    j1c3 = closed_form("j1_c3")
    for n in range(4, 7):
        assert j1c3.count(n) == _juxta_weight(n, n + 1)


def _juxta_weight(n, m):
    # kill weight restricted to graphs with two or more copies; graphs with
    # exactly one copy belong to the one-copy series with weight three each
    from itertools import combinations

    total = 0
    for sub in combinations(list(combinations(range(n), 2)), m):
        g = GraphInstance(n, sub)
        if g.is_connected() and g.triangle_count() >= 2:
            total += g.triangle_kill_weight()
    return total


def test_forbidden_polygon_closed_forms_match_brute():
    xi = ForbiddenSet(frozenset({3, 4}))
    w = closed_form("w0_xi", xi)
    c4 = cycle_edges(4)
    from xifree.oracle import copy_count

    for n in range(3, 7):
        count = brute_census(
            n,
            n,
            lambda g: g.is_connected()
            and g.triangle_count() == 0
            and copy_count(g, 4, c4) == 0,
        )
        assert w.count(n) == count


def test_multigraph_triangle_free_closed_form():
    w = closed_form("w0_c3_multi")
    for n in range(1, 6):
        count = brute_census(
            n,
            n,
            lambda g: g.is_connected() and not g.has_polygon(3),
            "multigraph",
        )
        assert w.count(n) == count


def test_compute_wk_matches_oracle_quickly(wk_graph, wk_multigraph):
    for k in range(1, 5):
        for n in range(3, 11):
            if n * (n - 1) // 2 >= n + k:
                assert wk_graph[k - 1].count(n) == connected_count(n, n + k)
            assert wk_multigraph[k - 1].count(n) == connected_count(
                n, n + k, "multigraph"
            )


def test_recurrence_residuals_vanish():
    for k in (1, 2, 3):
        assert recurrence_residual(k, order=15).is_zero()
        assert recurrence_residual(k, model="multigraph", order=15).is_zero()
    for k in (0, 1):
        assert recurrence_residual(k, forbidden="c3", order=15).is_zero()
    with pytest.raises(ValueError):
        recurrence_residual(1, forbidden="c5")


def test_reconstruction_reproduces_catalogue():
    rec = reconstruct_triangle_free()
    assert rec["w1"] == closed_form("w1_c3")
    assert rec["s1"] == closed_form("s1_c3")
    assert rec["j1"] == closed_form("j1_c3")
    assert rec["w2"] == closed_form("w2_c3")
    assert rec["s2"] == closed_form("s2_c3")
    assert rec["j2"] == closed_form("j2_c3")


def test_inequality_checks_pass():
    for which, kwargs in (
        ("wright", {"k": 1, "order": 30}),
        ("wright", {"k": 2, "order": 30}),
        ("sbound", {"order": 30}),
        ("jbound", {"order": 30}),
        ("constants", {"kmax": 8, "r": 2}),
    ):
        report = inequality_check(which, **kwargs)
        assert report.ok, report
        assert report.first_violation is None


def test_leading_coefficients_and_xifree_leading():
    w1c3 = closed_form("w1_c3")
    assert leading_coefficients(w1c3, 1) == (Fraction(5, 24), Fraction(-25, 24))
    assert w1_xifree_leading(frozenset({3})) == (Fraction(5, 24), Fraction(-25, 24))
    assert w1_xifree_leading(frozenset({3, 4})) == (
        Fraction(5, 24),
        Fraction(-31, 24),
    )


def test_partition_series_matches_partition_count():
    for parts in (2, 3):
        for distinct in (False, True):
            s = partition_series(parts, 12, distinct=distinct)
            for n in range(13):
                assert s[n] == partition_count(n, parts, distinct=distinct)


def test_smooth_bicyclic_partition_closed_form():
    s = smooth_bicyclic_partition(12)
    # z^4 (6 - z) / (24 (1 - z)^3)
    for n in range(13):
        expected = Fraction(0)
        if n >= 4:
            j = n - 4
            expected += Fraction(6 * (j + 2) * (j + 1), 48)
        if n >= 5:
            j = n - 5
            expected -= Fraction((j + 2) * (j + 1), 48)
        assert s[n] == expected


def test_t_expansion_of_w1_matches_partition_series():
    w1 = closed_form("w1")
    assert t_expansion(w1, 12) == [smooth_bicyclic_partition(12)[n] for n in range(13)]


def test_forbidden_graph_validation():
    k4 = ForbiddenGraph(
        "K4", tuple((a, b) for a in range(4) for b in range(a + 1, 4)),
        Fraction(1, 24),
    )
    assert k4.vertices == 4 and k4.edges == 6 and k4.excess == 2
    with pytest.raises(ValueError):
        ForbiddenGraph("path", ((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        ForbiddenGraph("empty", ())


def test_forbidden_set_polygons():
    assert TRIANGLE_SET.polygons == frozenset({3})
    xi = ForbiddenSet(frozenset({3, 4, 5}))
    assert 4 in xi.polygons
    with pytest.raises(ValueError):
        ForbiddenSet(frozenset({2}))
