"""Limit probabilities for component profiles of sparse random graphs.

A random graph or multigraph with n vertices and about n/2 edges has,
with positive limit probability, a handful of complex components; the
profile records how many of each excess. This module evaluates the
closed-form limit law for a profile, for the event that every component
stays below a given excess, and the exact weights converting bivariate
EGF coefficients into probabilities at finite n. Polygon constraints
enter through a single exponential factor; forbidding a contractible
family deduces a constant from one Wright coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, cosh, exp, factorial, sqrt
from numbers import Rational

from .asymptotics import ln_fraction
from .census import ForbiddenSet, wright_constants

__all__ = [
    "ComponentProfile",
    "Deduction",
    "K4_DEDUCTION",
    "SQRT_TWO_THIRDS",
    "coeff_to_probability",
    "edge_count_window",
    "edge_weight_drift",
    "iter_profiles",
    "low_complexity_probability",
    "phi_theta",
    "profile_probability",
    "profile_rational_part",
    "profile_sum",
    "theta_exponent",
]

SQRT_TWO_THIRDS = sqrt(2.0 / 3.0)


@dataclass(frozen=True)
class ComponentProfile:
    """Counts of complex components by excess: counts[i] components of
    excess i+1 (bicyclic, tricyclic, ...)."""

    counts: tuple[int, ...] = ()

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError("component counts must be nonnegative")
        while counts and counts[-1] == 0:
            counts = counts[:-1]
        object.__setattr__(self, "counts", counts)

    @property
    def total_excess(self) -> int:
        return sum((i + 1) * c for i, c in enumerate(self.counts))

    def count(self, excess: int) -> int:
        if excess < 1:
            raise ValueError("complex components have excess >= 1")
        if excess > len(self.counts):
            return 0
        return self.counts[excess - 1]


@dataclass(frozen=True)
class Deduction:
    """Forbid the family contracting to one graph of the given excess;
    its labeling constant is removed from the matching Wright weight."""

    excess: int
    constant: Fraction

    def __post_init__(self):
        if self.excess < 1:
            raise ValueError("deductions apply to excess >= 1")
        constant = Fraction(self.constant)
        if constant < 0:
            raise ValueError("deduction constant must be nonnegative")
        object.__setattr__(self, "constant", constant)


K4_DEDUCTION = Deduction(2, Fraction(1, 24))


def _polygon_set(theta) -> frozenset:
    if isinstance(theta, ForbiddenSet):
        return theta.polygons
    polygons = frozenset(int(p) for p in theta)
    if any(p < 3 for p in polygons):
        raise ValueError("polygon lengths must be at least 3")
    return polygons


def theta_exponent(theta) -> Fraction:
    """Exact exponent sum of the polygon factor exp(-sum 1/(2p))."""
    return sum((Fraction(1, 2 * p) for p in _polygon_set(theta)), Fraction(0))


def phi_theta(theta) -> float:
    """The polygon-avoidance factor exp(-sum_{p in theta} 1/(2p))."""
    return exp(-float(theta_exponent(theta)))


def profile_rational_part(profile: ComponentProfile, deductions=()) -> Fraction:
    """Exact rational factor of a profile's limit probability:
    (4/3)^r * r!/(2r)! * prod (b_k - c_k)^{r_k} / r_k!  with r the total excess."""
    if not isinstance(profile, ComponentProfile):
        profile = ComponentProfile(tuple(profile))
    seen = set()
    removed = {}
    for ded in deductions:
        if ded.excess in seen:
            raise ValueError("deductions must reference distinct excesses")
        seen.add(ded.excess)
        removed[ded.excess] = ded.constant
    kmax = max(len(profile.counts), max(seen, default=1), 1)
    table = wright_constants(kmax)
    for k, c in removed.items():
        if c > table.b[k]:
            raise ValueError("deduction constant exceeds the Wright coefficient")
    r = profile.total_excess
    out = Fraction(4, 3) ** r * Fraction(factorial(r), factorial(2 * r))
    for i, rk in enumerate(profile.counts):
        if rk == 0:
            continue
        k = i + 1
        weight = table.b[k] - removed.get(k, Fraction(0))
        out *= weight ** rk / factorial(rk)
    return out


def profile_probability(profile, theta=(), deductions=()) -> float:
    """Limit probability that the complex components realize the profile
    and the graph avoids every polygon in theta."""
    rational = profile_rational_part(profile, deductions)
    return SQRT_TWO_THIRDS * phi_theta(theta) * float(rational)


def low_complexity_probability(max_excess: int, theta=()) -> float:
    """Limit probability that every component has excess <= max_excess
    (0: no complex part; 1: at worst bicyclic) and avoids theta."""
    base = SQRT_TWO_THIRDS * phi_theta(theta)
    if max_excess == 0:
        return base
    if max_excess == 1:
        return base * cosh(sqrt(5.0 / 18.0))
    raise ValueError("only max_excess 0 and 1 have closed forms")


def _partitions(total: int, largest: int):
    if total == 0:
        yield ()
        return
    for part in range(min(total, largest), 0, -1):
        for rest in _partitions(total - part, part):
            yield (part,) + rest


def iter_profiles(max_total: int):
    """All profiles with total excess 0, 1, ..., max_total."""
    for total in range(max_total + 1):
        for parts in _partitions(total, total):
            counts = [0] * (max(parts) if parts else 0)
            for part in parts:
                counts[part - 1] += 1
            yield ComponentProfile(tuple(counts))


def profile_sum(max_total: int, theta=(), deductions=()) -> float:
    """Total probability mass of profiles with total excess <= max_total."""
    acc = Fraction(0)
    for profile in iter_profiles(max_total):
        acc += profile_rational_part(profile, deductions)
    return SQRT_TWO_THIRDS * phi_theta(theta) * float(acc)


def coeff_to_probability(model: str, n: int, m: int, coeff) -> Fraction:
    """Exact probability of the event counted by a bivariate EGF
    coefficient [w^m z^n] under the uniform (n, m) random model."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    if not isinstance(coeff, Rational):
        raise TypeError("coeff must be exact")
    if model == "graph":
        pairs = comb(n, 2)
        if m > pairs:
            raise ValueError("more edges than vertex pairs")
        return Fraction(factorial(n), comb(pairs, m)) * Fraction(coeff)
    if model == "multigraph":
        return Fraction(2 ** m * factorial(m) * factorial(n), n ** (2 * m)) * Fraction(coeff)
    raise ValueError("model must be graph or multigraph")


def edge_weight_drift(n: int, m: int | None = None) -> float:
    """ln C(C(n,2), m) - ln(n^{2m}/(2^m m!)) + m/n + m^2/n^2, computed
    exactly; tends to 0 as n grows with m = n/2."""
    if m is None:
        m = n // 2
    pairs = comb(n, 2)
    if not 0 <= m <= pairs:
        raise ValueError("m out of range")
    exact = Fraction(comb(pairs, m) * 2 ** m * factorial(m), n ** (2 * m))
    return ln_fraction(exact) + m / n + (m * m) / (n * n)


def edge_count_window(n: int, mu: float = 0.0) -> int:
    """Edge count m = (n/2)(1 + mu * n^{-1/3}) of the critical window."""
    if n < 1:
        raise ValueError("need n >= 1")
    if abs(mu) > n ** (1.0 / 12.0):
        raise ValueError("mu outside the admissible window")
    return round((n / 2.0) * (1.0 + mu * n ** (-1.0 / 3.0)))
