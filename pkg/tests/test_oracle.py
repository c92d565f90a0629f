from fractions import Fraction
from math import comb, factorial

import pytest

from xifree.errors import ResourceLimitError
from xifree.oracle import (
    GraphInstance,
    MultigraphInstance,
    brute_census,
    connected_count,
    connected_counts,
    copy_count,
    cycle_edges,
    iter_multigraphs,
    kappa_identity_check,
    kernel,
    kernel_is_k4,
    monomorphism_count,
    triangle_scan,
)

TRIANGLE = cycle_edges(3)


def test_graph_instance_invariants():
    g = GraphInstance(4, ((0, 1), (1, 2), (2, 0), (2, 3)))
    assert g.is_connected()
    assert g.excess == 0
    assert g.triangle_count() == 1
    # every triangle edge alone destroys the unique copy
    assert g.triangle_kill_weight() == 3
    h = GraphInstance(4, ((0, 1), (2, 3)))
    assert not h.is_connected()
    assert h.triangle_count() == 0 and h.triangle_kill_weight() == 0


def test_kill_weight_on_overlapping_triangles():
    # two triangles sharing an edge: only the shared edge kills both
    g = GraphInstance(4, ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3)))
    assert g.triangle_count() == 2
    assert g.triangle_kill_weight() == 1
    # K4 has four triangles and no single killing edge
    k4 = GraphInstance(4, tuple((a, b) for a in range(4) for b in range(a + 1, 4)))
    assert k4.triangle_count() == 4
    assert k4.triangle_kill_weight() == 0


def test_copy_count_is_monomorphisms_over_automorphisms():
    g = GraphInstance(5, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)))
    for hn, hedges, aut in ((3, cycle_edges(3), 6), (4, cycle_edges(4), 8)):
        assert monomorphism_count(g, hn, hedges) == aut * copy_count(g, hn, hedges)
    assert copy_count(g, 3, TRIANGLE) == 2
    assert g.triangle_count() == 2


def test_cycle_edges_shape():
    assert cycle_edges(3) == ((0, 1), (1, 2), (2, 0))
    assert len(cycle_edges(6)) == 6


def test_brute_census_against_closed_counts():
    # all graphs: binomial((n choose 2), m)
    assert brute_census(5, 4) == comb(10, 4)
    # connected census matches the recurrence oracle
    for n in range(2, 7):
        for k in (-1, 0, 1):
            m = n + k
            if m < 1 or m > comb(n, 2):
                continue
            got = brute_census(n, m, lambda g: g.is_connected())
            assert got == connected_count(n, m)
    # Cayley: n^(n-2) spanning trees
    assert brute_census(6, 5, lambda g: g.is_connected()) == 6**4


def test_connected_counts_table():
    table = connected_counts(5, 1)
    assert table[(5, 4)] == 125
    assert table[(5, 5)] == 222
    assert table[(5, 6)] == 205
    assert connected_count(4, 6) == 1  # K4


def test_connected_count_multigraph_weights():
    # kappa-weighted connected multigraph counts: loops and doubled edges
    # carry 1/2 and 1/2^d d! style weights
    assert connected_count(1, 1, "multigraph") == Fraction(1, 2)
    # double edge (1/2) plus an edge with a loop at either end (1/2 each)
    assert connected_count(2, 2, "multigraph") == Fraction(3, 2)
    got = brute_census(3, 3, lambda g: g.is_connected(), "multigraph")
    assert got == connected_count(3, 3, "multigraph")


def test_triangle_scan_engines_agree():
    for n, m in ((5, 5), (6, 6)):
        a = triangle_scan(n, m, engine="python")
        b = triangle_scan(n, m, engine="numba")
        assert a == b
    scan = triangle_scan(5, 5)
    assert scan["total"] == comb(10, 5)
    assert scan["connected"] == 222
    # weight identity: with at most one entangled family at this size the
    # juxtaposition weight is exactly three per one-triangle graph
    assert scan["juxta_weight_connected"] == 3 * scan["one_triangle_connected"]


def test_triangle_scan_against_instance_predicates():
    n, m = 5, 6
    scan = triangle_scan(n, m)
    free = brute_census(n, m, lambda g: g.is_connected() and g.triangle_count() == 0)
    one = brute_census(n, m, lambda g: g.is_connected() and g.triangle_count() == 1)
    juxta = 0
    from itertools import combinations

    pairs = list(combinations(range(n), 2))
    for sub in combinations(pairs, m):
        g = GraphInstance(n, sub)
        if g.is_connected():
            juxta += g.triangle_kill_weight()
    assert scan["c3free_connected"] == free
    assert scan["one_triangle_connected"] == one
    assert scan["juxta_weight_connected"] == juxta


def test_multigraph_instance_and_kappa():
    mg = MultigraphInstance(2, {(0, 0): 1, (0, 1): 2})
    assert mg.kappa() == Fraction(1, 4)
    assert mg.is_connected()
    assert mg.has_polygon(2) and not mg.has_polygon(3)
    assert mg.excess == 1
    assert sorted(mg.support().edges) == [(0, 1)]


def test_kappa_identity():
    # sum of kappa over all multigraphs with m edges = n^(2m) / (2^m m!)
    for n, m in ((2, 2), (3, 3), (4, 2)):
        assert kappa_identity_check(n, m)
        total = sum(g.kappa() for g in iter_multigraphs(n, m))
        assert total == Fraction(n ** (2 * m), 2**m * factorial(m))


def test_kernel_and_k4_detection():
    sub_k4 = ((0, 4), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 5), (5, 3))
    nv, kedges = kernel(6, sub_k4)
    assert nv == 4 and len(kedges) == 6
    assert kernel_is_k4(6, sub_k4)
    # K4 minus an edge plus a chord path is not contractible to K4
    assert not kernel_is_k4(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3)))
    assert kernel_is_k4(4, tuple((a, b) for a in range(4) for b in range(a + 1, 4)))


def test_resource_guards():
    with pytest.raises(ResourceLimitError):
        brute_census(12, 6, lambda g: True)
    with pytest.raises(ResourceLimitError):
        list(iter_multigraphs(8, 8))
