"""Seedable Monte Carlo for sparse random graphs and multigraphs.

Two models at the critical edge density: the uniform model draws m
independent ordered vertex pairs (a multigraph with loops and repeats),
the permutation model takes a uniformly random m-subset of the
C(n, 2) simple edges. Each trial builds the graph, splits it into
components, and classifies the cyclic ones: excess, the set of cycle
lengths present, and contractibility flags for forbidden subgraphs.
Estimates of profile events validate the closed-form limit laws.

Trials are keyed by (seed, trial index) through a counter-based
generator, so results are reproducible under any scheduling. A pure
Python engine mirrors the accelerated one on the same random stream.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from math import comb, sqrt

import numpy as np
from numba import njit

from .census import ForbiddenSet
from .errors import ResourceLimitError
from .probability import ComponentProfile, edge_count_window

__all__ = [
    "Estimate",
    "ProcessConfig",
    "TrialOutcome",
    "classify_component",
    "event_predicate",
    "run_trials",
    "run_trials_multi",
]

_KERNEL_EDGE_BOUND = 30
_CYCLE_WORK_CAP = 200_000


@dataclass(frozen=True)
class ProcessConfig:
    """One Monte Carlo experiment: model, size, target edges, trials."""

    n: int
    m: int | None = None
    mu: float | None = None
    model: str = "uniform"
    forbidden: ForbiddenSet = ForbiddenSet(frozenset())
    trials: int = 1000
    seed: int = 0
    max_excess_tracked: int = 6
    engine: str = "numba"
    workers: int = 1
    max_work: int = 20_000_000_000

    def __post_init__(self):
        if self.n < 1 or self.trials < 1 or self.workers < 1:
            raise ValueError("n, trials and workers must be positive")
        if self.model not in ("uniform", "permutation"):
            raise ValueError("model must be uniform or permutation")
        if self.engine not in ("numba", "python"):
            raise ValueError("engine must be numba or python")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        if self.m is not None and self.mu is not None:
            raise ValueError("give either m or mu, not both")
        if self.max_excess_tracked < 1:
            raise ValueError("max_excess_tracked must be at least 1")
        m = self.resolved_m
        if m < 0:
            raise ValueError("edge count must be nonnegative")
        if self.model == "permutation" and m > comb(self.n, 2):
            raise ValueError("more edges than vertex pairs")

    @property
    def resolved_m(self) -> int:
        if self.m is not None:
            return self.m
        return edge_count_window(self.n, 0.0 if self.mu is None else self.mu)


@dataclass(frozen=True)
class TrialOutcome:
    """Classification of one generated graph."""

    profile: ComponentProfile
    has_higher_cyclic: bool
    forbidden_hit_flags: dict
    all_low_and_free: bool
    discarded: bool = False


@dataclass(frozen=True)
class Estimate:
    """Frequency estimate of an event over independent trials."""

    p_hat: float
    stderr: float
    trials: int
    seed: int
    event: str
    discarded: int = 0


# -- edge generation -------------------------------------------------------


def _decode_edge_codes(codes, n):
    """Map codes in [0, C(n,2)) to pairs (u, v), u < v, lexicographic."""
    two = 2.0 * n - 1.0
    u = ((two - np.sqrt(two * two - 8.0 * codes)) / 2.0).astype(np.int64)
    u = np.clip(u, 0, n - 2)
    for _ in range(3):
        # float rounding can land one row off in either direction
        u = np.where(u * (2 * n - u - 1) // 2 > codes, u - 1, u)
        below = (u + 1) * (2 * n - u - 2) // 2 <= codes
        u = np.where(below & (u < n - 2), u + 1, u)
    v = codes - u * (2 * n - u - 1) // 2 + u + 1
    return u, v


def _generate_edges(config: ProcessConfig, rng):
    n, m = config.n, config.resolved_m
    if config.model == "uniform":
        pairs = rng.integers(0, n, size=(m, 2), dtype=np.int64)
        return pairs[:, 0].copy(), pairs[:, 1].copy()
    pairs_total = comb(n, 2)
    batch = m + 16 + (4 * m * m) // max(pairs_total, 1)
    stream = rng.integers(0, pairs_total, size=batch, dtype=np.int64)
    while True:
        uniq, first = np.unique(stream, return_index=True)
        if uniq.size >= m:
            break
        extra = rng.integers(0, pairs_total, size=batch, dtype=np.int64)
        stream = np.concatenate([stream, extra])
    # the first m distinct codes in arrival order form a uniform m-subset
    codes = stream[np.sort(first)[:m]]
    return _decode_edge_codes(codes, n)


# -- per-trial graph reduction --------------------------------------------


@njit(cache=True, nogil=True)
def _reduce_graph(us, vs, n):
    """Union-find plus 2-core peel.

    Returns per-component roots, vertex and edge counts for components
    holding at least one edge, and the surviving core edges labelled by
    component root.
    """
    m = us.shape[0]
    parent = np.arange(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    touched = np.zeros(n, dtype=np.uint8)
    for i in range(m):
        a, b = us[i], vs[i]
        touched[a] = 1
        touched[b] = 1
        if a == b:
            continue
        ra = a
        while parent[ra] != ra:
            parent[ra] = parent[parent[ra]]
            ra = parent[ra]
        rb = b
        while parent[rb] != rb:
            parent[rb] = parent[parent[rb]]
            rb = parent[rb]
        if ra != rb:
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            size[ra] += size[rb]

    root_of = np.empty(n, dtype=np.int64)
    for v in range(n):
        r = v
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        root_of[v] = r

    ne = np.zeros(n, dtype=np.int64)
    nv = np.zeros(n, dtype=np.int64)
    deg = np.zeros(n, dtype=np.int64)
    for i in range(m):
        ne[root_of[us[i]]] += 1
        if us[i] == vs[i]:
            deg[us[i]] += 2
        else:
            deg[us[i]] += 1
            deg[vs[i]] += 1
    for v in range(n):
        if touched[v]:
            nv[root_of[v]] += 1

    # adjacency over non-loop edges; loops pin their vertex in the core
    offsets = np.zeros(n + 1, dtype=np.int64)
    for i in range(m):
        if us[i] != vs[i]:
            offsets[us[i] + 1] += 1
            offsets[vs[i] + 1] += 1
    for v in range(n):
        offsets[v + 1] += offsets[v]
    cursor = offsets[:-1].copy()
    slots = np.empty(offsets[n], dtype=np.int64)
    for i in range(m):
        if us[i] != vs[i]:
            slots[cursor[us[i]]] = i
            cursor[us[i]] += 1
            slots[cursor[vs[i]]] = i
            cursor[vs[i]] += 1

    live = deg.copy()
    edge_alive = np.ones(m, dtype=np.uint8)
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for v in range(n):
        if touched[v] and live[v] <= 1:
            stack[top] = v
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for s in range(offsets[v], offsets[v + 1]):
            e = slots[s]
            if edge_alive[e]:
                edge_alive[e] = 0
                w = vs[e] if us[e] == v else us[e]
                live[v] -= 1
                live[w] -= 1
                if live[w] == 1:
                    stack[top] = w
                    top += 1

    comp_count = 0
    for v in range(n):
        if touched[v] and root_of[v] == v:
            comp_count += 1
    comp_root = np.empty(comp_count, dtype=np.int64)
    comp_nv = np.empty(comp_count, dtype=np.int64)
    comp_ne = np.empty(comp_count, dtype=np.int64)
    j = 0
    for v in range(n):
        if touched[v] and root_of[v] == v:
            comp_root[j] = v
            comp_nv[j] = nv[v]
            comp_ne[j] = ne[v]
            j += 1

    core_count = 0
    for i in range(m):
        if edge_alive[i]:
            core_count += 1
    core_u = np.empty(core_count, dtype=np.int64)
    core_v = np.empty(core_count, dtype=np.int64)
    core_root = np.empty(core_count, dtype=np.int64)
    j = 0
    for i in range(m):
        if edge_alive[i]:
            core_u[j] = us[i]
            core_v[j] = vs[i]
            core_root[j] = root_of[us[i]]
            j += 1
    return comp_root, comp_nv, comp_ne, core_u, core_v, core_root


def _reduce_graph_python(us, vs, n):
    """Reference implementation of _reduce_graph over touched vertices."""
    parent = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    deg = defaultdict(int)
    for a, b in zip(us.tolist(), vs.tolist()):
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        if a == b:
            deg[a] += 2
            continue
        deg[a] += 1
        deg[b] += 1
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    nv = defaultdict(int)
    ne = defaultdict(int)
    adjacency = defaultdict(list)
    for v in parent:
        nv[find(v)] += 1
    for idx, (a, b) in enumerate(zip(us.tolist(), vs.tolist())):
        ne[find(a)] += 1
        if a != b:
            adjacency[a].append((idx, b))
            adjacency[b].append((idx, a))

    # every component's excess is pinned by its edge and vertex counts
    total_edges = sum(ne.values())
    total_vertices = sum(nv.values())
    assert total_edges == len(us) and sum(
        ne[r] - nv[r] for r in ne
    ) == total_edges - total_vertices

    live = dict(deg)
    edge_alive = [True] * len(us)
    stack = [v for v in parent if live[v] <= 1]
    while stack:
        v = stack.pop()
        for idx, w in adjacency[v]:
            if edge_alive[idx]:
                edge_alive[idx] = False
                live[v] -= 1
                live[w] -= 1
                if live[w] == 1:
                    stack.append(w)

    comps = [(r, nv[r], ne[r]) for r in sorted(ne)]
    core = [
        (int(us[i]), int(vs[i]), find(int(us[i])))
        for i in range(len(us))
        if edge_alive[i]
    ]
    return comps, core


# -- classification of cyclic cores ---------------------------------------


def _kernel_edges(core_edges):
    """Suppress degree-2 vertices of a connected 2-core, keeping track of
    chain lengths; returns (u, v, length) triples, loops allowed."""
    deg = defaultdict(int)
    adjacency = defaultdict(list)
    for idx, (a, b) in enumerate(core_edges):
        if a == b:
            deg[a] += 2
        else:
            deg[a] += 1
            deg[b] += 1
            adjacency[a].append((idx, b))
            adjacency[b].append((idx, a))
    branch = {v for v, d in deg.items() if d >= 3}
    if not branch:
        # the core is a single cycle; report it as one kernel loop
        return [(min(deg), min(deg), len(core_edges))]
    kernel = [(a, a, 1) for a, b in core_edges if a == b]
    used = [a == b for a, b in core_edges]
    for start in branch:
        for idx, nxt in adjacency[start]:
            if used[idx]:
                continue
            used[idx] = True
            prev, cur, length = start, nxt, 1
            while cur not in branch:
                for jdx, other in adjacency[cur]:
                    if not used[jdx]:
                        used[jdx] = True
                        prev, cur = cur, other
                        length += 1
                        break
                else:
                    raise AssertionError("chain left the 2-core")
            kernel.append((start, cur, length))
    return kernel


def _cycle_lengths(kernel, work_cap=_CYCLE_WORK_CAP):
    """All simple-cycle lengths of a small multigraph with weighted edges."""
    lengths = set()
    adjacency = defaultdict(list)
    plain = []
    for a, b, length in kernel:
        if a == b:
            lengths.add(length)
        else:
            adjacency[a].append((len(plain), b, length))
            adjacency[b].append((len(plain), a, length))
            plain.append((a, b, length))
    work = 0

    def extend(anchor, goal, current, visited, total):
        nonlocal work
        for jdx, nxt, length in adjacency[current]:
            work += 1
            if work > work_cap:
                raise ResourceLimitError("cycle enumeration exceeded its budget")
            if jdx <= anchor:
                continue
            if nxt == goal:
                lengths.add(total + length)
            elif nxt not in visited:
                visited.add(nxt)
                extend(anchor, goal, nxt, visited, total + length)
                visited.remove(nxt)

    for idx, (a, b, length) in enumerate(plain):
        extend(idx, a, b, {a, b}, length)
    return lengths


def _core_groups(core_triples):
    groups = defaultdict(list)
    for a, b, root in core_triples:
        groups[root].append((a, b))
    return groups


def _classify(comps, core_triples, forbidden, max_tracked):
    counts = [0] * max_tracked
    higher = False
    lengths = set()
    kernels = []
    groups = _core_groups(core_triples)
    for root, nv, ne in comps:
        excess = ne - nv
        if excess < 0:
            continue
        core = groups[root]
        if excess == 0:
            lengths.add(len(core))
            continue
        if excess > max_tracked:
            higher = True
        else:
            counts[excess - 1] += 1
        if 3 * excess > _KERNEL_EDGE_BOUND:
            raise ResourceLimitError("component too entangled to classify")
        kernel = _kernel_edges(core)
        lengths |= _cycle_lengths(kernel)
        kernels.append(kernel)

    flags = {}
    for p in sorted(forbidden.polygons):
        flags[f"C{p}"] = p in lengths
    for member in forbidden.others:
        target = _canonical_shape(_kernel_edges(_two_core(member.edge_list)))
        flags[member.name] = any(
            _canonical_shape(kern) == target for kern in kernels
        )
    profile = ComponentProfile(tuple(counts))
    low = not higher and all(c == 0 for c in counts[1:])
    free = not any(flags.values())
    return TrialOutcome(
        profile=profile,
        has_higher_cyclic=higher,
        forbidden_hit_flags=flags,
        all_low_and_free=low and free,
    )


def _canonical_shape(kernel):
    """Isomorphism-invariant form of a small multigraph, chain lengths
    dropped (a subdivided edge contracts to an edge): the smallest edge
    multiset over vertex relabellings."""
    vertices = sorted({v for a, b, _ in kernel for v in (a, b)})
    if len(vertices) > 8:
        raise ResourceLimitError("kernel too large for isomorphism search")
    index = {v: i for i, v in enumerate(vertices)}
    edges = [(index[a], index[b]) for a, b, _ in kernel]
    best = None
    for perm in permutations(range(len(vertices))):
        relabelled = sorted(
            (min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in edges
        )
        if best is None or relabelled < best:
            best = relabelled
    return tuple(best) if best is not None else ()


def _two_core(edges):
    """Edges surviving repeated removal of degree-<=1 vertices."""
    deg = defaultdict(int)
    adjacency = defaultdict(list)
    for idx, (a, b) in enumerate(edges):
        if a == b:
            deg[a] += 2
        else:
            deg[a] += 1
            deg[b] += 1
            adjacency[a].append((idx, b))
            adjacency[b].append((idx, a))
    live = dict(deg)
    alive = [True] * len(edges)
    stack = [v for v, d in live.items() if d <= 1]
    while stack:
        v = stack.pop()
        for idx, w in adjacency[v]:
            if alive[idx]:
                alive[idx] = False
                live[v] -= 1
                live[w] -= 1
                if live[w] == 1:
                    stack.append(w)
    return [pair for idx, pair in enumerate(edges) if alive[idx]]


def classify_component(vertices, edges, forbidden: ForbiddenSet):
    """Excess and forbidden-member flags of one connected component."""
    vertices = list(vertices)
    edges = [tuple(e) for e in edges]
    excess = len(edges) - len(vertices)
    comps = [(0, len(vertices), len(edges))]
    core = [(a, b, 0) for a, b in _two_core(edges)]
    outcome = _classify(comps, core, forbidden, max(excess, 1))
    return excess, outcome.forbidden_hit_flags


# -- events ----------------------------------------------------------------


def event_predicate(descriptor: str, config: ProcessConfig):
    """Compile an event descriptor into a predicate on TrialOutcome.

    Clauses joined by '&': maxexcess:K, cpfree:P, c3free, free, lowfree,
    profile:r1,r2,...
    """
    clauses = [c.strip() for c in descriptor.split("&")]
    checks = []
    for clause in clauses:
        if clause == "c3free":
            clause = "cpfree:3"
        if clause.startswith("maxexcess:"):
            bound = int(clause.split(":", 1)[1])
            if bound < 0 or bound > config.max_excess_tracked:
                raise ValueError("maxexcess outside the tracked range")
            checks.append(
                lambda t, b=bound: not t.has_higher_cyclic
                and all(c == 0 for c in t.profile.counts[b:])
            )
        elif clause.startswith("cpfree:"):
            p = int(clause.split(":", 1)[1])
            if p not in config.forbidden.polygons:
                raise ValueError(f"polygon {p} is not tracked by this config")
            checks.append(lambda t, key=f"C{p}": not t.forbidden_hit_flags[key])
        elif clause.startswith("profile:"):
            wanted = ComponentProfile(
                tuple(int(x) for x in clause.split(":", 1)[1].split(","))
            )
            if len(wanted.counts) > config.max_excess_tracked:
                raise ValueError("profile outside the tracked range")
            checks.append(
                lambda t, w=wanted: not t.has_higher_cyclic and t.profile == w
            )
        elif clause == "free":
            checks.append(lambda t: not any(t.forbidden_hit_flags.values()))
        elif clause == "lowfree":
            checks.append(lambda t: t.all_low_and_free)
        else:
            raise ValueError(f"unknown event clause {clause!r}")
    return lambda trial: all(check(trial) for check in checks)


# -- the driver ------------------------------------------------------------


def _one_trial(config: ProcessConfig, index: int) -> TrialOutcome:
    rng = np.random.Generator(
        np.random.Philox(key=np.array([config.seed, index], dtype=np.uint64))
    )
    us, vs = _generate_edges(config, rng)
    try:
        if config.engine == "python":
            comps, core = _reduce_graph_python(us, vs, config.n)
        else:
            roots, nv, ne, cu, cv, cr = _reduce_graph(us, vs, config.n)
            comps = list(zip(roots.tolist(), nv.tolist(), ne.tolist()))
            core = list(zip(cu.tolist(), cv.tolist(), cr.tolist()))
        return _classify(comps, core, config.forbidden, config.max_excess_tracked)
    except ResourceLimitError:
        return TrialOutcome(
            profile=ComponentProfile(),
            has_higher_cyclic=True,
            forbidden_hit_flags={},
            all_low_and_free=False,
            discarded=True,
        )


def run_trials_multi(config: ProcessConfig, events) -> dict:
    """Estimate several events on one shared sweep of trials."""
    if config.n * config.trials > config.max_work:
        raise ResourceLimitError("n * trials exceeds the configured budget")
    predicates, labels = [], []
    for event in events:
        if callable(event):
            predicates.append(event)
            labels.append(getattr(event, "__name__", "<predicate>"))
        else:
            predicates.append(event_predicate(event, config))
            labels.append(event)

    def sweep(indices):
        hits = [0] * len(predicates)
        kept = discarded = 0
        for i in indices:
            outcome = _one_trial(config, i)
            if outcome.discarded:
                discarded += 1
                continue
            kept += 1
            for j, predicate in enumerate(predicates):
                if predicate(outcome):
                    hits[j] += 1
        return hits, kept, discarded

    if config.workers == 1:
        hits, kept, discarded = sweep(range(config.trials))
    else:
        chunks = [
            range(start, config.trials, config.workers)
            for start in range(config.workers)
        ]
        hits = [0] * len(predicates)
        kept = discarded = 0
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for part, k, d in pool.map(sweep, chunks):
                hits = [a + b for a, b in zip(hits, part)]
                kept += k
                discarded += d

    out = {}
    for label, h in zip(labels, hits):
        p_hat = h / kept if kept else 0.0
        stderr = sqrt(p_hat * (1.0 - p_hat) / kept) if kept else 0.0
        out[label] = Estimate(
            p_hat=p_hat,
            stderr=stderr,
            trials=kept,
            seed=config.seed,
            event=label,
            discarded=discarded,
        )
    return out


def run_trials(config: ProcessConfig, event) -> Estimate:
    """Estimate the probability of an event over config.trials runs."""
    return next(iter(run_trials_multi(config, [event]).values()))
