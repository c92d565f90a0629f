"""Constant sequences, closed-form EGFs, and the excess recurrence pipeline.

Connected graphs and multigraphs are stratified by excess (edges minus
vertices).  Everything exact lives here: the first- and second-order
constant sequences with their recurrences, the catalogue of closed-form
generating functions in the tree function T and X = 1 - T, the pipeline
that manufactures the plain excess-k series, the triangle-free surgery
reconstruction, residual checks of the defining functional equations,
the coefficientwise inequality suites, and the integer-partition form of
the smooth bicyclic series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import ConsistencyError
from .oracle import connected_count, triangle_scan
from .series import Series
from .xring import (
    SmoothFamily,
    XExpr,
    base_rhs,
    compose_parallel,
    compose_serial,
    delta_apply,
    delta_invert,
    lambda_sum,
    omega_apply,
    theta_z,
)

_ZERO = Fraction(0)
_HALF = Fraction(1, 2)


# -- forbidden configurations ------------------------------------------


@dataclass(frozen=True)
class ForbiddenGraph:
    """A forbidden connected subgraph that is not a plain cycle.

    `constant` is the labelling constant of the family contractible to
    this graph; it feeds the component-profile probabilities.
    """

    name: str
    edge_list: tuple
    constant: Fraction | None = None

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edge_list)
        object.__setattr__(self, "edge_list", edges)
        if not edges or self.excess < 0:
            raise ValueError("forbidden graphs must have excess >= 0")

    @property
    def vertices(self) -> int:
        return len({v for pair in self.edge_list for v in pair})

    @property
    def edges(self) -> int:
        return len(self.edge_list)

    @property
    def excess(self) -> int:
        return self.edges - self.vertices


@dataclass(frozen=True)
class ForbiddenSet:
    """Cycle lengths and extra multicyclic graphs excluded from components."""

    polygons: frozenset
    others: tuple = ()

    def __post_init__(self):
        polygons = frozenset(int(p) for p in self.polygons)
        if any(p < 3 for p in polygons):
            raise ValueError("forbidden cycle lengths must be >= 3")
        object.__setattr__(self, "polygons", polygons)
        object.__setattr__(self, "others", tuple(self.others))

    @property
    def r(self) -> int:
        return len(self.polygons)


TRIANGLE_SET = ForbiddenSet(frozenset({3}))


# -- constant sequences ------------------------------------------------


@dataclass(frozen=True)
class ConstantTable:
    """Exact constant sequences; index 0 of c, cprime, cprime_xi is a filler.

    b[k] is the leading coefficient of the excess-k series, c[k] the plain
    second-order constant, cprime[k] its triangle-free counterpart and
    cprime_xi[k] the counterpart when r cycle lengths are forbidden; calB[k]
    is the convolution sum reused by the asymptotic diagnostics.
    """

    kmax: int
    r: int
    b: tuple
    c: tuple
    cprime: tuple
    cprime_xi: tuple
    calB: tuple


def wright_constants(kmax: int, r: int = 0) -> ConstantTable:
    """Build the constant sequences up to index kmax, checking both routes.

    The derived sequences are computed once from their closed-form shortcut
    and once from the raw recurrence; any disagreement raises.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if r < 0:
        raise ValueError("polygon count must be >= 0")
    b = [_HALF, Fraction(5, 24)]
    for k in range(1, kmax + 1):
        conv = sum(t * (k - t) * b[t] * b[k - t] for t in range(1, k))
        b.append(Fraction(3 * k * (k + 1) * b[k] + 3 * conv, 2 * (k + 1)))

    cal_b = [_ZERO]
    for k in range(1, kmax + 1):
        conv = sum(t * (k - t) * b[t] * b[k - t] for t in range(1, k))
        dual = Fraction(2 * (k + 1) * b[k + 1] - 3 * k * (k + 1) * b[k], 3)
        if conv != dual:
            raise ConsistencyError(f"calB routes differ at k={k}")
        cal_b.append(conv)

    for k in range(2, kmax + 1):
        pairs = [(b[t], b[k - t]) for t in range(1, k)]
        weighted = sum(t * b[t] * b[k - t] for t in range(1, k))
        if weighted != Fraction(k, 2) * sum(x * y for x, y in pairs):
            raise ConsistencyError(f"convolution symmetry fails at k={k}")

    c = [_ZERO, Fraction(19, 24)]
    for k in range(1, kmax):
        conv = sum(t * (3 * k - 3 * t - 1) * b[t] * c[k - t] for t in range(1, k))
        c.append(
            (8 * (k + 1) * b[k + 1] + 3 * k * b[k] + (3 * k + 2) * (3 * k - 1) * c[k] + 6 * conv)
            / (2 * (3 * k + 2))
        )

    def derived(base, slope):
        # shortcut route: value[k+1] = c[k+1] + slope * k * b[k]
        out = [_ZERO, base]
        for k in range(1, kmax):
            out.append(c[k + 1] + slope * k * b[k])
        return out

    def recurrence(base, mix):
        # raw route: the same sequence from its own recurrence
        out = [_ZERO, base]
        for k in range(1, kmax):
            conv = sum(t * (3 * k - 3 * t - 1) * b[t] * out[k - t] for t in range(1, k))
            out.append(
                (8 * (k + 1) * b[k + 1] + mix * k * b[k] + (3 * k - 1) * (3 * k + 2) * out[k] + 6 * conv)
                / (2 * (3 * k + 2))
            )
        return out

    cp = derived(Fraction(25, 24), Fraction(3, 2))
    if cp != recurrence(Fraction(25, 24), Fraction(6)):
        raise ConsistencyError("triangle-free constant routes differ")
    cpxi = derived(Fraction(19 + 6 * r, 24), Fraction(3, 2) * r)
    if cpxi != recurrence(Fraction(19 + 6 * r, 24), Fraction(3 * (r + 1))):
        raise ConsistencyError("forbidden-set constant routes differ")

    hi = Fraction(19 + 6 * r, 5)
    for k in range(1, kmax + 1):
        if not k * b[k] <= cpxi[k] <= hi * k * b[k]:
            raise ConsistencyError(f"constant band fails at k={k}, r={r}")

    return ConstantTable(
        kmax=kmax,
        r=r,
        b=tuple(b[: kmax + 1]),
        c=tuple(c),
        cprime=tuple(cp),
        cprime_xi=tuple(cpxi),
        calB=tuple(cal_b),
    )


# -- closed-form catalogue ---------------------------------------------


def _tpoly(coeffs) -> XExpr:
    return XExpr.from_t_polynomial(coeffs)


def _over_x(coeffs, power: int) -> XExpr:
    return _tpoly(coeffs).times_x_power(power)


def _w0_graph() -> XExpr:
    return XExpr.log_inv_x(_HALF) + _tpoly({1: -_HALF, 2: Fraction(-1, 4)})


def _w0_multigraph() -> XExpr:
    return XExpr.log_inv_x(_HALF)


def _cycle_terms(polygons) -> XExpr:
    return _tpoly({p: Fraction(-1, 2 * p) for p in polygons})


def _w0_graph_xi(xi: ForbiddenSet) -> XExpr:
    return _w0_graph() + _cycle_terms(xi.polygons)


def _w0_multigraph_xi(xi: ForbiddenSet) -> XExpr:
    return _w0_multigraph() + _cycle_terms(xi.polygons)


_CATALOGUE = {
    "w_minus1": (-1, "labelled unrooted trees", lambda: _tpoly({1: 1, 2: -_HALF})),
    "w0": (0, "connected unicyclic graphs", _w0_graph),
    "w0_multi": (0, "connected unicyclic multigraphs", _w0_multigraph),
    "w0_c3": (0, "triangle-free unicyclic graphs", lambda: _w0_graph() + _tpoly({3: Fraction(-1, 6)})),
    "w0_c3_multi": (0, "triangle-free unicyclic multigraphs", lambda: _w0_multigraph() + _tpoly({3: Fraction(-1, 6)})),
    "w0_xi": (0, "unicyclic graphs avoiding a set of cycle lengths", _w0_graph_xi),
    "w0_xi_multi": (0, "unicyclic multigraphs avoiding a set of cycle lengths", _w0_multigraph_xi),
    "w1": (1, "connected bicyclic graphs", lambda: _over_x({4: Fraction(6, 24), 5: Fraction(-1, 24)}, 3)),
    "w1_c3": (1, "triangle-free bicyclic graphs", lambda: _over_x({5: Fraction(2, 24), 6: Fraction(6, 24), 7: Fraction(-3, 24)}, 3)),
    "w2_c3": (2, "triangle-free tricyclic graphs", lambda: _over_x(
        {6: Fraction(7, 48), 7: Fraction(36, 48), 8: Fraction(-18, 48), 9: Fraction(-40, 48), 10: Fraction(40, 48), 11: Fraction(-10, 48)}, 6)),
    "s0_c3": (0, "unicyclic graphs whose cycle is a triangle", lambda: _tpoly({3: Fraction(1, 6)})),
    "s1_c3": (1, "bicyclic graphs with exactly one triangle", lambda: _over_x({5: Fraction(2, 4), 6: Fraction(-1, 4)}, 2)),
    "j1_c3": (1, "bicyclic graphs whose triangles share one edge", lambda: _tpoly({4: Fraction(1, 4)})),
    "s2_c3": (2, "tricyclic graphs with exactly one triangle", lambda: _over_x(
        {6: Fraction(48, 48), 7: Fraction(18, 48), 8: Fraction(-140, 48), 9: Fraction(119, 48), 10: Fraction(-30, 48)}, 5)),
    "j2_c3": (2, "tricyclic graphs whose triangles share a common edge, weighted by shared edges", lambda: _over_x(
        {5: Fraction(2, 6), 6: Fraction(5, 6), 7: Fraction(-4, 6)}, 2)),
}

_NEEDS_SET = {"w0_xi", "w0_xi_multi"}


def catalogue() -> dict:
    """Name -> (excess, description) for every catalogued closed form."""
    return {name: (entry[0], entry[1]) for name, entry in _CATALOGUE.items()}


def closed_form(name: str, forbidden: ForbiddenSet | None = None) -> XExpr:
    """Return a catalogued exact generating function by name."""
    try:
        excess, _, builder = _CATALOGUE[name]
    except KeyError:
        raise ValueError(f"unknown closed form {name!r}") from None
    if name in _NEEDS_SET:
        if forbidden is None:
            raise ValueError(f"{name!r} needs a ForbiddenSet")
        return builder(forbidden)
    if forbidden is not None:
        raise ValueError(f"{name!r} does not take a ForbiddenSet")
    return builder()


def closed_form_excess(name: str) -> int:
    if name not in _CATALOGUE:
        raise ValueError(f"unknown closed form {name!r}")
    return _CATALOGUE[name][0]


def t_expansion(expr: XExpr, order: int):
    """Coefficients of the expansion of `expr` in powers of T through T^order."""
    out = [_ZERO] * (order + 1)
    for t, coeff in expr.terms.items():
        if t <= 0:
            for i in range(min(order, -t) + 1):
                out[i] += coeff * comb(-t, i) * (-1) ** i
        else:
            for j in range(order + 1):
                out[j] += coeff * comb(j + t - 1, t - 1)
    if expr.log_coeff:
        for j in range(1, order + 1):
            out[j] += Fraction(expr.log_coeff, j)
    return out


def leading_coefficients(expr: XExpr, k: int):
    """Top two X coefficients (at X^-3k and X^-(3k-1)) of an excess-k series."""
    top_t = expr.max_t()
    if top_t is not None and top_t > 3 * k:
        raise ConsistencyError("terms above X^-(3k): not an excess-k series")
    return expr.coeff(3 * k), expr.coeff(3 * k - 1)


# -- the plain pipeline ------------------------------------------------


def _graph_pin_size(excess: int) -> int:
    n = 3
    while comb(n, 2) < n + excess:
        n += 1
    return n


@lru_cache(maxsize=None)
def _compute_wk_cached(kmax: int, model: str):
    table = wright_constants(kmax)
    w0 = closed_form("w0" if model == "graph" else "w0_multi")
    pointed = theta_z(w0)
    ws = []
    for e in range(1, kmax + 1):
        if e == 1:
            rhs = base_rhs(w0, model)
        else:
            rhs = omega_apply(ws[-1], e - 1, pointed, model) + lambda_sum(ws[:-1])
        n0 = _graph_pin_size(e) if model == "graph" else 1
        w = delta_invert(e, rhs, (n0, connected_count(n0, n0 + e, model)))
        n1 = n0 + 1
        if w.count(n1) != connected_count(n1, n1 + e, model):
            raise ConsistencyError(f"excess-{e} series disagrees with the oracle at n={n1}")
        top, second = leading_coefficients(w, e)
        if top != table.b[e]:
            raise ConsistencyError(f"excess-{e} leading coefficient is not b_{e}")
        if model == "graph" and second != -table.c[e]:
            raise ConsistencyError(f"excess-{e} second coefficient is not -c_{e}")
        ws.append(w)
    return tuple(ws)


def compute_wk(kmax: int, model: str = "graph"):
    """Plain excess-1..kmax series from the excess recurrence, oracle-pinned.

    Each inversion is checked against the independent exponential-formula
    oracle at the two smallest admissible sizes and against the constant
    table, so a single bad operator identity cannot survive.
    """
    if model not in ("graph", "multigraph"):
        raise ValueError("model must be 'graph' or 'multigraph'")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    return list(_compute_wk_cached(kmax, model))


# -- triangle-free reconstruction --------------------------------------


def reconstruct_triangle_free() -> dict:
    """Rebuild the triangle-free series from scratch and check the catalogue.

    The one-copy and juxtaposition series are assembled from cutpoint and
    edge-gluing compositions plus the finitely many smooth shapes in which
    the triangle is embedded deeper in the core; the excess-1 and excess-2
    series then follow by inverting the functional equation, pinned against
    exhaustive censuses.  Raises if anything differs from the catalogue.
    """
    w0 = closed_form("w0_c3")
    triangle = SmoothFamily(_tpoly({3: Fraction(1, 6)}), excess=0, two_connected=True)
    diamond = SmoothFamily(_tpoly({4: Fraction(1, 4)}), excess=1, two_connected=True)
    host0 = SmoothFamily(w0, excess=0)

    s1 = compose_serial(host0, triangle, with_path=True).expr + compose_parallel(host0, triangle).expr
    j1 = diamond.expr
    pin1 = (5, Fraction(triangle_scan(5, 6)["c3free_connected"]))
    w1 = delta_invert(1, base_rhs(w0, "graph") - 6 * s1 - 2 * j1, pin1)

    host1 = SmoothFamily(w1, excess=1)
    # triangle embedded in the core: sharing a vertex pair with the second
    # cycle, hanging on both ends of the chain, or spanning two core paths
    s2 = (
        compose_serial(host1, triangle, with_path=True).expr
        + compose_parallel(host1, triangle).expr
        + _over_x({6: _HALF, 7: Fraction(-1, 3)}, 3)
        + _over_x({8: Fraction(1, 4)}, 3)
        + _over_x({7: _HALF}, 2)
    )
    j2 = (
        compose_serial(host0, diamond, with_path=True).expr
        + compose_parallel(host0, diamond).expr
        + _tpoly({5: Fraction(1, 12)})
        + _over_x({5: Fraction(1, 4)}, 1)
    )
    pin2 = (6, Fraction(triangle_scan(6, 8)["c3free_connected"]))
    w2 = delta_invert(2, omega_apply(w1, 1, theta_z(w0), "graph") - 6 * s2 - 2 * j2, pin2)

    built = {"w1": w1, "s1": s1, "j1": j1, "w2": w2, "s2": s2, "j2": j2}
    for key, name in (("w1", "w1_c3"), ("s1", "s1_c3"), ("j1", "j1_c3"),
                      ("w2", "w2_c3"), ("s2", "s2_c3"), ("j2", "j2_c3")):
        if built[key] != closed_form(name):
            raise ConsistencyError(f"reconstructed {name} differs from the catalogue")
    return built


def w1_xifree_leading(polygons):
    """Top two X coefficients of the bicyclic series avoiding given cycles.

    The one-copy and juxtaposition corrections to the functional equation
    are supported on X^-2 and below, while the two leading coefficients of
    the inversion are fixed by the right side at X^-4 and X^-3 alone; they
    are therefore computable without closed forms for those corrections.
    """
    xi = polygons if isinstance(polygons, ForbiddenSet) else ForbiddenSet(frozenset(polygons))
    rhs = base_rhs(closed_form("w0_xi", xi), "graph")
    if rhs.max_t() != 4:
        raise ConsistencyError("unexpected support above X^-4")
    top = rhs.coeff(4) / 6
    second = (rhs.coeff(3) + 4 * top) / 4
    return top, second


# -- functional-equation residuals -------------------------------------


def recurrence_residual(k: int, forbidden: str | None = None,
                        model: str = "graph", order: int = 25) -> Series:
    """Left minus right side of the excess functional equation, as a series.

    The contract is an identically zero result.  With forbidden="c3" the
    catalogued triangle-free closed forms are used (k in {0, 1}, graphs
    only); otherwise the plain series from compute_wk with no one-copy or
    juxtaposition terms.
    """
    if forbidden not in (None, "c3"):
        raise ValueError("forbidden must be None or 'c3'")
    if model not in ("graph", "multigraph"):
        raise ValueError("model must be 'graph' or 'multigraph'")
    if forbidden == "c3":
        if model != "graph" or k not in (0, 1):
            raise ValueError("outside the closed-form catalogue")
        w0 = closed_form("w0_c3")
        if k == 0:
            w_next, s, j = closed_form("w1_c3"), closed_form("s1_c3"), closed_form("j1_c3")
            rhs = base_rhs(w0, "graph")
        else:
            w_next, s, j = closed_form("w2_c3"), closed_form("s2_c3"), closed_form("j2_c3")
            rhs = omega_apply(closed_form("w1_c3"), 1, theta_z(w0), "graph")
        lhs = delta_apply(w_next, k + 1) + 6 * s + 2 * j
    else:
        if k < 0:
            raise ValueError("k must be >= 0")
        w0 = closed_form("w0" if model == "graph" else "w0_multi")
        ws = compute_wk(k + 1, model)
        if k == 0:
            rhs = base_rhs(w0, model)
        else:
            rhs = omega_apply(ws[k - 1], k, theta_z(w0), model) + lambda_sum(ws[: k - 1])
        lhs = delta_apply(ws[k], k + 1)
    return (lhs - rhs).eval_series(order)


# -- inequality suites --------------------------------------------------


@dataclass(frozen=True)
class InequalityReport:
    which: str
    ok: bool
    order: int
    first_violation: tuple | None
    min_epsilon: Fraction | None = None


def _first_excess(lower: XExpr, upper: XExpr, order: int):
    lo, hi = lower.eval_series(order), upper.eval_series(order)
    for n in range(order + 1):
        if lo[n] > hi[n]:
            return n, lo[n], hi[n]
    return None


def inequality_check(which: str, k: int = 1, order: int = 40, r: int = 1,
                     epsilon: Fraction = _HALF, kmax: int = 12) -> InequalityReport:
    """Coefficientwise inequality suites for the triangle-free series.

    which="wright": two-sided band around the excess-k triangle-free series.
    which="sbound"/"jbound": majorant of the excess-(k+1) one-copy or
    juxtaposition series; the report carries the minimal epsilon that
    would still work, as a diagnostic.
    which="constants": the band k*b_k <= c'^xi_k <= ((19+6r)/5)*k*b_k.
    """
    if which == "wright":
        if k not in (1, 2):
            raise ValueError("catalogued triangle-free series stop at excess 2")
        table = wright_constants(k)
        w = closed_form("w1_c3" if k == 1 else "w2_c3")
        upper = XExpr.x_power(3 * k, table.b[k])
        lower = upper - XExpr.x_power(3 * k - 1, table.cprime[k])
        violation = _first_excess(lower, w, order) or _first_excess(w, upper, order)
        return InequalityReport("wright", violation is None, order, violation)
    if which in ("sbound", "jbound"):
        if k != 1:
            raise ValueError("catalogued triangle-free series stop at excess 2")
        base = Fraction(3, 2) if which == "sbound" else Fraction(6)
        table = wright_constants(k)
        series = closed_form("s2_c3" if which == "sbound" else "j2_c3")
        scale = k * table.b[k]
        bound = XExpr.x_power(3 * k + 2, (base + epsilon) * scale)
        violation = _first_excess(series, bound, order)
        unit = XExpr.x_power(3 * k + 2).eval_series(order)
        got = series.eval_series(order)
        ratios = [got[n] / (scale * unit[n]) for n in range(order + 1) if unit[n]]
        min_eps = max(max(ratios) - base, _ZERO)
        return InequalityReport(which, violation is None, order, violation, min_eps)
    if which == "constants":
        table = wright_constants(kmax, r)
        hi = Fraction(19 + 6 * r, 5)
        for j in range(1, kmax + 1):
            if not j * table.b[j] <= table.cprime_xi[j] <= hi * j * table.b[j]:
                return InequalityReport("constants", False, kmax, (j, table.cprime_xi[j]))
        return InequalityReport("constants", True, kmax, None)
    raise ValueError("which must be wright, sbound, jbound or constants")


# -- integer partitions and the smooth bicyclic series ------------------


def _geom_inv(j: int, order: int) -> Series:
    return (Series.one(order) - Series.monomial(j, order)).inverse()


def partition_series(parts: int, order: int, distinct: bool = False) -> Series:
    """OGF of partitions into exactly `parts` parts (distinct if requested)."""
    if parts < 1:
        raise ValueError("parts must be >= 1")
    start = parts * (parts + 1) // 2 if distinct else parts
    s = Series.monomial(start, order)
    for j in range(1, parts + 1):
        s = s * _geom_inv(j, order)
    return s


@lru_cache(maxsize=None)
def _partition_count(n: int, parts: int) -> int:
    if n < 0 or parts < 0:
        return 0
    if parts == 0:
        return 1 if n == 0 else 0
    if n < parts:
        return 0
    return _partition_count(n - 1, parts - 1) + _partition_count(n - parts, parts)


def partition_count(n: int, parts: int, distinct: bool = False) -> int:
    """Direct counting recurrence, used to cross-check the product forms."""
    if distinct:
        return _partition_count(n - parts * (parts - 1) // 2, parts)
    return _partition_count(n, parts)


def smooth_bicyclic_partition(order: int = 40) -> Series:
    """Smooth bicyclic EGF assembled from integer-partition pieces.

    The two basic shapes (two cycles joined at a vertex or by a path)
    partition their core vertices into two or three arcs; summing the
    partition generating functions over the symmetry cases must give
    z^4 (6 - z) / (24 (1 - z)^3), which is asserted before returning.
    """
    q2 = partition_series(2, order, distinct=True)
    q3 = partition_series(3, order, distinct=True)
    inv1 = _geom_inv(1, order)
    inv2 = _geom_inv(2, order)
    inv3 = _geom_inv(3, order)

    def mono(n):
        return Series.monomial(n, order)

    total = (mono(2) * (q3 + q2)).scale(_HALF)
    total = total + (mono(5) * inv3).scale(Fraction(1, 12))
    total = total + (mono(4) * inv2 + mono(5) * inv1 * inv2 - mono(5) * inv3).scale(Fraction(1, 4))
    total = total + (mono(6) * inv1 * inv1 * inv2).scale(Fraction(1, 4))
    total = total + (mono(5) * inv1 * inv2).scale(Fraction(1, 8))

    closed = (mono(4) * (Series.one(order).scale(6) - mono(1)) * inv1.pow(3)).scale(Fraction(1, 24))
    if total != closed:
        raise ConsistencyError("partition decomposition does not match the closed form")
    return total
