"""Log-space asymptotic formulas with exact-series harnesses.

Every estimate is carried as a natural logarithm (factorials via
log-gamma), because the quantities themselves overflow floats at tiny
sizes.  Exact reference values arrive as arbitrary-precision rationals
and are converted to logs by splitting off a power of two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import exp, factorial, lgamma, log, pi, sqrt

from scipy.special import lambertw

from .errors import ResourceLimitError
from .series import tree_polynomial

_LN2 = log(2)
_E = exp(1)


# -- exact values into log space ----------------------------------------


def ln_big(value: int) -> float:
    """Natural log of a positive integer of any size."""
    if value <= 0:
        raise ValueError("ln_big needs a positive integer")
    bits = value.bit_length()
    if bits <= 900:
        return log(value)
    shift = bits - 900
    return log(value >> shift) + shift * _LN2


def ln_fraction(value) -> float:
    """Natural log of a positive rational of any size."""
    q = Fraction(value)
    if q <= 0:
        raise ValueError("ln_fraction needs a positive value")
    return ln_big(q.numerator) - ln_big(q.denominator)


def tn_exact_log(n: int, y: int) -> float:
    """ln t_n(y) from the exact rational tree polynomial."""
    return ln_fraction(tree_polynomial(n, y))


# -- saddle point ---------------------------------------------------------


@dataclass(frozen=True)
class SaddleContext:
    """Saddle point for the exponent rate a: the minimum of h on (0, 1)."""

    a: float
    u0: float
    rho: float


def saddle_context(a: float) -> SaddleContext:
    if not 0 < a < 1:
        raise ValueError("exponent rate a must lie in (0, 1)")
    u0 = 1 + a / 2 - sqrt(a * (1 + a / 4))
    rho = u0 * (1 + a - 2 * u0 + u0 * u0) / (1 - u0) ** 2
    return SaddleContext(a, u0, rho)


def saddle_h(u: float, a: float) -> float:
    return u - log(u) - a * log(1 - u)


def saddle_h_prime(u: float, a: float) -> float:
    return 1 - 1 / u + a / (1 - u)


def saddle_h_second(u: float, a: float) -> float:
    return 1 / (u * u) + a / (1 - u) ** 2


def tn_saddle(n: int, a: float, beta: float) -> float:
    """ln of the saddle-point estimate of t_n(a*n + beta)."""
    if not 0 < a < 1:
        raise ValueError("exponent rate a must lie in (0, 1)")
    if a * n + beta < 1:
        raise ValueError("total exponent a*n + beta must be >= 1")
    u0 = saddle_context(a).u0
    return (
        lgamma(n + 1)
        - log(2 * sqrt(pi * n))
        + n * u0
        + (1 - beta) * log(1 - u0)
        - n * log(u0)
        - a * n * log(1 - u0)
    )


def tn_fixed(n: int, y: float) -> float:
    """ln of the fixed-exponent estimate of t_n(y)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if y <= 0:
        raise ValueError("y must be positive")
    return 0.5 * log(2 * pi) + (n - 0.5 + y / 2) * log(n) - (y / 2) * _LN2 - lgamma(y / 2)


def c_asymptotic(n: int, k: int) -> float:
    """ln of the asymptotic count of connected (n, n+k) graphs."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    return (
        -log(2 * pi)
        + 0.5 * log(3 * pi)
        + (k / 2) * (1 - log(12 * k))
        + (n + (3 * k - 1) / 2) * log(n)
    )


def driver_ratio(n: int, k: int | None = None) -> float:
    """Exact k * t_n(3k-1) / t_n(3k); k defaults to floor(n**0.2)."""
    if k is None:
        k = int(n ** 0.2)
    return float(k * Fraction(tree_polynomial(n, 3 * k - 1), tree_polynomial(n, 3 * k)))


# -- the tree function near its singularity ------------------------------


def tree_value(z: float, method: str = "newton") -> float:
    """T(z) for 0 <= z < 1/e, where T satisfies T = z * exp(T)."""
    if not 0 <= z < 1 / _E:
        raise ValueError("z must lie in [0, 1/e)")
    if method == "newton":
        # Near z = 1/e the root is almost double, so the step sequence
        # levels off at the rounding floor instead of reaching 1e-16.
        t = z
        prev = 1.0
        for _ in range(200):
            g = t - z * exp(t)
            step = g / (1 - z * exp(t))
            t -= step
            s = abs(step)
            if s <= 1e-16 * (1 + abs(t)) or (s < 1e-10 and s >= prev):
                return t
            prev = s
        raise ResourceLimitError("tree value iteration did not converge")
    if method == "lambertw":
        return float(-lambertw(-z).real)
    if method == "series":
        total = 0.0
        term = z
        n = 1
        while term > 1e-17 * (total + 1):
            total += term
            term *= z * (1 + 1 / n) ** (n - 1)
            n += 1
            if n > 2_000_000:
                raise ResourceLimitError("tree value series needs too many terms here")
        return total
    raise ValueError("method must be newton, lambertw or series")


_SINGULAR_COEFFS = (1.0, -sqrt(2), 2 / 3, -11 * sqrt(2) / 36)


def singular_expansion_check(terms: int = 4, deltas=(1e-2, 5e-3, 2.5e-3, 1.25e-3)) -> dict:
    """Verify the expansion of T in delta = sqrt(1 - e z) near z = 1/e.

    Evaluates T at z = (1 - delta^2)/e by two independent routes, then
    checks that the residual after j expansion terms shrinks like
    delta^j: each normalized residual must stay bounded as delta halves,
    and the order-2 coefficient must come out at 2/3.
    """
    if not 1 <= terms <= 4:
        raise ValueError("the displayed expansion has at most four terms")
    ratios = {j: [] for j in range(1, terms + 1)}
    route_gap = 0.0
    for delta in deltas:
        z = (1 - delta * delta) / _E
        t = tree_value(z, "newton")
        route_gap = max(route_gap, abs(t - tree_value(z, "lambertw")))
        partial = 0.0
        for j in range(terms):
            partial += _SINGULAR_COEFFS[j] * delta ** j
            ratios[j + 1].append((t - partial) / delta ** (j + 1))
    second = ratios[2][-1] if terms >= 2 else None
    ok = route_gap < 1e-9
    for j, row in ratios.items():
        bound = 2 * max(1.0, abs(_SINGULAR_COEFFS[j]) if j < len(_SINGULAR_COEFFS) else 1.0)
        ok = ok and all(abs(r) <= bound for r in row)
    if terms >= 2:
        ok = ok and abs(second - 2 / 3) < 0.01
    return {
        "ok": ok,
        "ratios": ratios,
        "route_gap": route_gap,
        "second_coefficient": second,
    }


def d_sequence(kmax: int):
    """Diagnostic d_k = b_k / ((3/2)^k (k-1)!), approaching 1/(2 pi)."""
    from .census import wright_constants

    table = wright_constants(kmax)
    return [
        float(table.b[k] / (Fraction(3, 2) ** k * factorial(k - 1)))
        for k in range(1, kmax + 1)
    ]


def saddle_error(n: int, an: int, beta: int) -> float:
    """|estimate/exact - 1| for t_n(an + beta), exact side in rationals."""
    if an + beta < 1:
        raise ValueError("total exponent must be >= 1")
    approx = tn_saddle(n, an / n, beta)
    exact = tn_exact_log(n, an + beta)
    return abs(exp(approx - exact) - 1)
