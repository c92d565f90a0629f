"""Independent counting oracles.

Everything here counts graphs from first principles: connected counts by a
bivariate logarithm, small-graph statistics by exhaustive scans over edge
subsets, multigraph statistics by enumeration of edge multiplicities with
their compensation weights.  The rest of the package treats these numbers
as ground truth.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial

import numpy as np

from .errors import ResourceLimitError
from .series import BivariateSeries

MAX_BRUTE_GRAPH_N = 9
MAX_BRUTE_MULTIGRAPH_N = 6
_MAX_SCAN_WORK = 2 * 10**10
_MAX_PY_WORK = 10**7


# -- connected counts from the bivariate logarithm -------------------------


@lru_cache(maxsize=None)
def connected_counts(n_max, excess_cap, model="graph"):
    """Numbers of connected (n, m)-graphs for all n <= n_max, m <= n + excess_cap.

    Graphs are counted plainly; multigraphs carry their compensation
    weights, so the values are Fractions.  Both come from the formal
    logarithm of the corresponding all-graphs series, with no reference to
    the recursive pipeline.
    """
    # Intermediate products pair a high-m factor with a low-n one, so every
    # row must carry the absolute window m <= n_max + excess_cap.
    cap_abs = n_max + excess_cap
    rows = []
    for n in range(n_max + 1):
        fact = factorial(n)
        row = {}
        if model == "graph":
            slots = comb(n, 2)
            for m in range(min(cap_abs, slots) + 1):
                row[m] = Fraction(comb(slots, m), fact)
        elif model == "multigraph":
            for m in range(cap_abs + 1):
                value = Fraction(n ** (2 * m), 2**m * factorial(m) * fact)
                if value:
                    row[m] = value
        else:
            raise ValueError("model must be 'graph' or 'multigraph'")
        rows.append(row)
    logs = BivariateSeries(rows, cap_abs).log()
    table = {}
    for n in range(1, n_max + 1):
        fact = factorial(n)
        for m in range(n + excess_cap + 1):
            value = logs.coefficient(n, m) * fact
            if value:
                table[(n, m)] = value
    return table


def connected_count(n, m, model="graph"):
    """Single connected count; convenience wrapper over connected_counts."""
    if n < 1:
        return Fraction(0)
    cap = max(m - n, 0) + 1
    return connected_counts(n, cap, model).get((n, m), Fraction(0))


# -- simple graph instances and predicates ----------------------------------


class GraphInstance:
    """A labelled simple graph given by its edge set."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n, edges):
        self.n = n
        self.edges = tuple(sorted(tuple(sorted(e)) for e in edges))
        adj = [set() for _ in range(n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self.adj = adj

    @property
    def excess(self):
        return len(self.edges) - self.n

    def is_connected(self):
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    def triangle_count(self):
        total = 0
        for u, v in self.edges:
            total += len(self.adj[u] & self.adj[v])
        return total // 3

    def triangle_kill_weight(self):
        """Number of edges whose individual removal leaves no triangle."""
        triangles = [
            frozenset(t)
            for t in combinations(range(self.n), 3)
            if t[1] in self.adj[t[0]] and t[2] in self.adj[t[0]] and t[2] in self.adj[t[1]]
        ]
        if not triangles:
            return 0
        weight = 0
        for edge in self.edges:
            pair = frozenset(edge)
            if all(pair <= t for t in triangles):
                weight += 1
        return weight


def monomorphism_count(g, hn, hedges):
    """Number of injective adjacency-preserving maps of H into g."""
    hadj = [set() for _ in range(hn)]
    for a, b in hedges:
        hadj[a].add(b)
        hadj[b].add(a)
    order = []
    placed = set()
    while len(order) < hn:
        best = None
        for v in range(hn):
            if v in placed:
                continue
            anchored = len(hadj[v] & placed)
            key = (anchored, len(hadj[v]))
            if best is None or key > best[0]:
                best = (key, v)
        order.append(best[1])
        placed.add(best[1])
    total = 0
    image = {}

    def extend(idx):
        nonlocal total
        if idx == len(order):
            total += 1
            return
        v = order[idx]
        anchors = [(w, image[w]) for w in hadj[v] if w in image]
        used = set(image.values())
        for cand in range(g.n):
            if cand in used:
                continue
            if all(cand in g.adj[img] for _, img in anchors):
                image[v] = cand
                extend(idx + 1)
                del image[v]

    extend(0)
    return total


@lru_cache(maxsize=None)
def _automorphism_count(hn, hedges):
    h = GraphInstance(hn, hedges)
    return monomorphism_count(h, hn, hedges)


def copy_count(g, hn, hedges):
    """Number of subgraph copies of H in g: monomorphisms over |Aut(H)|."""
    hedges = tuple(sorted(tuple(sorted(e)) for e in hedges))
    mono = monomorphism_count(g, hn, hedges)
    aut = _automorphism_count(hn, hedges)
    if mono % aut:
        raise ArithmeticError("monomorphism count not divisible by |Aut|")
    return mono // aut


def cycle_edges(p):
    """Edge list of the polygon C_p, p >= 3."""
    return tuple((i, (i + 1) % p) for i in range(p))


# -- exhaustive scans over simple graphs ------------------------------------


def _guard_graph_scan(n, m, python):
    if n > MAX_BRUTE_GRAPH_N:
        raise ResourceLimitError("exhaustive graph scan limited to n <= 9")
    slots = comb(n, 2)
    if m > slots:
        return 0
    work = comb(slots, m) * max(n, 1)
    if work > (_MAX_PY_WORK if python else _MAX_SCAN_WORK):
        raise ResourceLimitError("exhaustive scan too large: ~%d steps" % work)
    return None


_SCAN_JIT = {}


def _compiled_scan():
    if "fn" not in _SCAN_JIT:
        from numba import njit

        @njit(cache=True)
        def scan(n, E, m, tri_masks, tri_by_edge, edge_u, edge_v):
            ntri = tri_masks.shape[0]
            full = (1 << ntri) - 1
            total = 0
            connected = 0
            c3free = 0
            one_tri = 0
            jweight = 0
            parent = np.empty(n, np.int64)
            v = (1 << m) - 1
            limit = 1 << E
            while v < limit:
                mask = v
                tset = 0
                for i in range(ntri):
                    if mask & tri_masks[i] == tri_masks[i]:
                        tset |= 1 << i
                for i in range(n):
                    parent[i] = i
                for e in range(E):
                    if (mask >> e) & 1:
                        ru = edge_u[e]
                        while parent[ru] != ru:
                            parent[ru] = parent[parent[ru]]
                            ru = parent[ru]
                        rv = edge_v[e]
                        while parent[rv] != rv:
                            parent[rv] = parent[parent[rv]]
                            rv = parent[rv]
                        if ru != rv:
                            parent[ru] = rv
                roots = 0
                for i in range(n):
                    ri = i
                    while parent[ri] != ri:
                        ri = parent[ri]
                    if ri == i:
                        roots += 1
                total += 1
                if roots == 1:
                    connected += 1
                    if tset == 0:
                        c3free += 1
                    else:
                        x = tset
                        tc = 0
                        while x:
                            x &= x - 1
                            tc += 1
                        if tc == 1:
                            one_tri += 1
                        for e in range(E):
                            if (mask >> e) & 1 and tset & (full ^ tri_by_edge[e]) == 0:
                                jweight += 1
                if m == 0:
                    break
                c = v & (-v)
                r = v + c
                v = (((r ^ v) >> 2) // c) | r
            return total, connected, c3free, one_tri, jweight

        _SCAN_JIT["fn"] = scan
    return _SCAN_JIT["fn"]


def triangle_scan(n, m, engine="auto"):
    """Exhaustive statistics over all (n, m)-graphs.

    Returns a dict with the number of graphs, of connected graphs, of
    connected triangle-free graphs, of connected graphs with exactly one
    triangle, and the total connected triangle-kill weight (the number of
    (graph, edge) pairs where removing the edge leaves no triangle).
    """
    if engine not in ("auto", "python", "numba"):
        raise ValueError("engine must be auto, python or numba")
    python = engine == "python" or (engine == "auto" and comb(comb(n, 2), m) < 40000)
    shortcut = _guard_graph_scan(n, m, python)
    if shortcut is not None:
        return {
            "total": 0,
            "connected": 0,
            "c3free_connected": 0,
            "one_triangle_connected": 0,
            "juxta_weight_connected": 0,
        }
    if python:
        edges = list(combinations(range(n), 2))
        total = connected = c3free = one_tri = jweight = 0
        for subset in combinations(range(len(edges)), m):
            g = GraphInstance(n, [edges[i] for i in subset])
            total += 1
            if not g.is_connected():
                continue
            connected += 1
            tc = g.triangle_count()
            if tc == 0:
                c3free += 1
            else:
                if tc == 1:
                    one_tri += 1
                jweight += g.triangle_kill_weight()
    else:
        if comb(n, 3) > 63:
            raise ResourceLimitError("triangle bitmask path needs n <= 8")
        edges = list(combinations(range(n), 2))
        index = {e: i for i, e in enumerate(edges)}
        tri_masks = []
        tri_by_edge = [0] * len(edges)
        for t, trio in enumerate(combinations(range(n), 3)):
            a, b, c = trio
            mask = (
                (1 << index[(a, b)]) | (1 << index[(a, c)]) | (1 << index[(b, c)])
            )
            tri_masks.append(mask)
            for pair in ((a, b), (a, c), (b, c)):
                tri_by_edge[index[pair]] |= 1 << t
        scan = _compiled_scan()
        total, connected, c3free, one_tri, jweight = scan(
            n,
            len(edges),
            m,
            np.array(tri_masks, dtype=np.int64),
            np.array(tri_by_edge, dtype=np.int64),
            np.array([e[0] for e in edges], dtype=np.int64),
            np.array([e[1] for e in edges], dtype=np.int64),
        )
    return {
        "total": int(total),
        "connected": int(connected),
        "c3free_connected": int(c3free),
        "one_triangle_connected": int(one_tri),
        "juxta_weight_connected": int(jweight),
    }


def brute_census(n, m, predicate=None, model="graph"):
    """Sum of predicate values over all labelled (n, m)-graphs.

    The predicate receives a GraphInstance (or MultigraphInstance) and may
    return a bool or a number; None counts everything.  Exhaustive and
    slow by design; guarded by ResourceLimitError.
    """
    if model == "graph":
        shortcut = _guard_graph_scan(n, m, python=True)
        if shortcut is not None:
            return 0
        edges = list(combinations(range(n), 2))
        total = 0
        for subset in combinations(range(len(edges)), m):
            g = GraphInstance(n, [edges[i] for i in subset])
            total += 1 if predicate is None else predicate(g)
        return total
    if model == "multigraph":
        total = Fraction(0)
        for inst in iter_multigraphs(n, m):
            weight = inst.kappa() if predicate is None else predicate(inst)
            if weight is True:
                weight = inst.kappa()
            elif weight is False:
                weight = 0
            total += weight
        return total
    raise ValueError("model must be 'graph' or 'multigraph'")


# -- multigraphs -------------------------------------------------------------


class MultigraphInstance:
    """A labelled multigraph given by edge multiplicities on vertex pairs."""

    __slots__ = ("n", "mult")

    def __init__(self, n, mult):
        self.n = n
        self.mult = {pair: m for pair, m in mult.items() if m}

    @property
    def edge_count(self):
        return sum(self.mult.values())

    @property
    def excess(self):
        return self.edge_count - self.n

    def kappa(self):
        """Compensation weight 1 / (prod 2^loops * prod multiplicity!)."""
        den = 1
        for (u, v), m in self.mult.items():
            den *= factorial(m)
            if u == v:
                den *= 2**m
        return Fraction(1, den)

    def support(self):
        return GraphInstance(self.n, [p for p in self.mult if p[0] != p[1]])

    def is_connected(self):
        adj = [set() for _ in range(self.n)]
        for u, v in self.mult:
            adj[u].add(v)
            adj[v].add(u)
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    def has_polygon(self, p):
        """Does the multigraph contain a copy of the polygon C_p?"""
        if p == 1:
            return any(u == v for u, v in self.mult)
        if p == 2:
            return any(u != v and m >= 2 for (u, v), m in self.mult.items())
        return copy_count(self.support(), p, cycle_edges(p)) > 0


def iter_multigraphs(n, m):
    """All multigraphs on n labelled vertices with m edges (loops allowed)."""
    if n > MAX_BRUTE_MULTIGRAPH_N:
        raise ResourceLimitError("multigraph enumeration limited to n <= 6")
    slots = [(i, i) for i in range(n)] + list(combinations(range(n), 2))
    if comb(m + len(slots) - 1, m) > _MAX_PY_WORK:
        raise ResourceLimitError("multigraph enumeration too large")
    mult = {}

    def fill(idx, remaining):
        if idx == len(slots) - 1:
            mult[slots[idx]] = remaining
            yield MultigraphInstance(n, mult)
            del mult[slots[idx]]
            return
        for take in range(remaining + 1):
            if take:
                mult[slots[idx]] = take
            yield from fill(idx + 1, remaining - take)
            mult.pop(slots[idx], None)

    if not slots:
        if m == 0:
            yield MultigraphInstance(n, {})
        return
    yield from fill(0, m)


def kappa_identity_check(n, m):
    """sum over all (n, m)-multigraphs of kappa * 2^m * m! equals n^(2m)."""
    total = sum(inst.kappa() for inst in iter_multigraphs(n, m))
    return total * 2**m * factorial(m) == n ** (2 * m)


# -- kernels ---------------------------------------------------------------


def kernel(n, edges):
    """Prune degree <= 1 vertices, then contract plain degree-2 vertices.

    Works on multigraph edge lists (repeats and loops allowed).  Returns
    (vertices, edge multiset) of the resulting topological kernel; the
    excess is preserved at every step.
    """
    edge_list = [tuple(e) for e in edges]
    alive = set(range(n))

    def degrees():
        deg = dict.fromkeys(alive, 0)
        for u, v in edge_list:
            deg[u] += 1
            deg[v] += 1
        return deg

    while True:
        deg = degrees()
        drop = {v for v in alive if deg[v] <= 1}
        if not drop:
            break
        alive -= drop
        edge_list = [e for e in edge_list if e[0] not in drop and e[1] not in drop]
    while True:
        deg = degrees()
        target = None
        for v in alive:
            if deg[v] == 2:
                incident = [e for e in edge_list if v in e]
                if len(incident) == 2:
                    target = (v, incident)
                    break
        if target is None:
            break
        v, (e1, e2) = target
        a = e1[0] if e1[1] == v else e1[1]
        b = e2[0] if e2[1] == v else e2[1]
        alive.remove(v)
        edge_list.remove(e1)
        edge_list.remove(e2)
        edge_list.append((min(a, b), max(a, b)))
    label = {v: i for i, v in enumerate(sorted(alive))}
    canon = sorted(
        (min(label[u], label[v]), max(label[u], label[v])) for u, v in edge_list
    )
    return len(alive), tuple(canon)


def kernel_is_k4(n, edges):
    """Is the topological kernel the complete graph on four vertices?"""
    nv, kedges = kernel(n, edges)
    if nv != 4 or len(kedges) != 6:
        return False
    return len(set(kedges)) == 6 and all(u != v for u, v in kedges)
