"""Exact truncated power series over the rationals.

A :class:`Series` stores coefficients c_0 .. c_N of sum c_n z^n with every
c_n a ``fractions.Fraction``.  For exponential generating functions the
labelled count on n vertices is n! * c_n; :meth:`Series.count` applies that
normalisation.

The module also provides the Cayley tree function T(z) = sum n^{n-1} z^n/n!,
integer powers of 1/(1-T), and the tree polynomials
t_n(y) = n! [z^n] (1-T)^{-y}, which are computed by coefficient extraction
through the implicit equation T = z e^T rather than by convolution so that
single values stay cheap for n in the thousands.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Fraction

_Scalar = Union[int, Fraction]


class SeriesError(ValueError):
    """Raised for undefined series operations (bad inversion, log, ...)."""


def _as_fraction(x: _Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class Series:
    """Truncated power series with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[_Scalar]):
        cs = tuple(_as_fraction(c) for c in coeffs)
        if not cs:
            raise SeriesError("a series needs at least the constant term")
        self.coeffs = cs

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls([Fraction(0)] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls([Fraction(1)] + [Fraction(0)] * order)

    @classmethod
    def monomial(cls, n: int, order: int, coeff: _Scalar = 1) -> "Series":
        cs = [Fraction(0)] * (order + 1)
        if n <= order:
            cs[n] = _as_fraction(coeff)
        return cls(cs)

    # -- basics --------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError(n)
        return self.coeffs[n] if n <= self.order else Fraction(0)

    def count(self, n: int) -> Fraction:
        """n! times the z^n coefficient (labelled count for an EGF)."""
        return self[n] * math.factorial(n)

    def truncate(self, order: int) -> "Series":
        if order >= self.order:
            return self
        return Series(self.coeffs[: order + 1])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        n = max(self.order, other.order)
        return all(self[i] == other[i] for i in range(n + 1))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.order > 5 else ""
        return f"Series([{head}{tail}]; order={self.order})"

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        return Series([self[i] + other[i] for i in range(n + 1)])

    def __sub__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        return Series([self[i] - other[i] for i in range(n + 1)])

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs])

    def scale(self, a: _Scalar) -> "Series":
        a = _as_fraction(a)
        return Series([a * c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Series):
            n = min(self.order, other.order)
            out = [Fraction(0)] * (n + 1)
            for i, ci in enumerate(self.coeffs[: n + 1]):
                if ci == 0:
                    continue
                for j in range(n + 1 - i):
                    cj = other.coeffs[j] if j < len(other.coeffs) else None
                    if cj:
                        out[i + j] += ci * cj
            return Series(out)
        return self.scale(other)

    __rmul__ = __mul__

    def inverse(self) -> "Series":
        """Multiplicative inverse; requires a nonzero constant term."""
        a0 = self.coeffs[0]
        if a0 == 0:
            raise SeriesError("series with zero constant term has no inverse")
        n = self.order
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / a0
        for m in range(1, n + 1):
            s = Fraction(0)
            for j in range(1, m + 1):
                if self[j]:
                    s += self[j] * inv[m - j]
            inv[m] = -s / a0
        return Series(inv)

    def pow(self, e: int) -> "Series":
        if e < 0:
            return self.inverse().pow(-e)
        result = Series.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def log(self) -> "Series":
        """Formal logarithm; requires constant term exactly 1."""
        if self.coeffs[0] != 1:
            raise SeriesError("log needs constant term 1")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for m in range(1, n + 1):
            s = Fraction(0)
            for j in range(1, m):
                s += j * out[j] * self[m - j]
            out[m] = self[m] - s / m
        return Series(out)

    def exp(self) -> "Series":
        """Formal exponential; requires constant term exactly 0."""
        if self.coeffs[0] != 0:
            raise SeriesError("exp needs constant term 0")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        out[0] = Fraction(1)
        for m in range(1, n + 1):
            s = Fraction(0)
            for j in range(1, m + 1):
                if self[j]:
                    s += j * self[j] * out[m - j]
            out[m] = s / m
        return Series(out)

    def theta(self) -> "Series":
        """Pointing operator z d/dz (multiplies c_n by n)."""
        return Series([n * c for n, c in enumerate(self.coeffs)])


@lru_cache(maxsize=None)
def cayley_tree_series(order: int) -> Series:
    """T(z) = sum_{n>=1} n^{n-1} z^n / n!, the EGF of rooted labelled trees."""
    return Series(
        [Fraction(0)]
        + [Fraction(n ** (n - 1), math.factorial(n)) for n in range(1, order + 1)]
    )


@lru_cache(maxsize=None)
def x_power_series(t: int, order: int) -> Series:
    """(1 - T(z))^{-t} as a truncated series, for any integer t."""
    one_minus_t = Series.one(order) - cayley_tree_series(order)
    return one_minus_t.pow(-t)


@lru_cache(maxsize=None)
def log_inv_x_series(order: int) -> Series:
    """ln 1/(1 - T(z)) as a truncated series."""
    return x_power_series(1, order).log()


def _tree_power_count(n: int, i: int) -> Fraction:
    """n! [z^n] T^i via coefficient extraction: (i/n) n^{n-i} n!/(n-i)!."""
    if i == 0:
        return Fraction(1 if n == 0 else 0)
    if n < i:
        return Fraction(0)
    return Fraction(i * n ** (n - i) * math.factorial(n), n * math.factorial(n - i))


def tree_polynomial(n: int, y: int) -> Fraction:
    """t_n(y) = n! [z^n] (1-T)^{-y}, exactly, for any integer y.

    For y >= 1 the value comes from extraction through T = z e^T:
    t_n(y) = y sum_{j<n} binom(y+j, j) n^{n-1-j} (n-1)!/(n-1-j)!,
    an integer computed in O(n) big-integer operations.  For y <= 0 the
    power (1-T)^{-y} is a polynomial in T and is expanded binomially.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fraction(1)
    if y == 0:
        return Fraction(0)
    if y < 0:
        d = -y
        total = Fraction(0)
        for i in range(d + 1):
            term = math.comb(d, i) * _tree_power_count(n, i)
            total += term if i % 2 == 0 else -term
        return total
    total = 0
    npow = n ** (n - 1)  # n^{n-1-j}, divided down as j grows
    falling = 1  # (n-1)!/(n-1-j)!
    for j in range(n):
        total += math.comb(y + j, j) * npow * falling
        if j < n - 1:
            npow //= n
            falling *= n - 1 - j
    return Fraction(y * total)


def log_inv_x_count(n: int) -> Fraction:
    """n! [z^n] ln 1/(1-T) = sum_{i=1..n} n^{n-i-1} n!/(n-i)!."""
    if n == 0:
        return Fraction(0)
    total = Fraction(0)
    for i in range(1, n + 1):
        total += Fraction(n ** (n - i - 1) * math.factorial(n), math.factorial(n - i)) if i < n \
            else Fraction(math.factorial(n), n)
    return total


class BivariateSeries:
    """Truncated series in z whose z^n coefficient is a polynomial in w.

    Coefficients are stored as dicts mapping the w-degree m to a Fraction.
    Every operation truncates the w-degree of the z^n coefficient at
    n + excess_cap, which is the only window the connected-count
    extraction ever reads.
    """

    __slots__ = ("rows", "excess_cap")

    def __init__(self, rows: Sequence[dict], excess_cap: int):
        self.rows = [dict(r) for r in rows]
        self.excess_cap = excess_cap

    @property
    def order(self) -> int:
        return len(self.rows) - 1

    def coefficient(self, n: int, m: int) -> Fraction:
        if n > self.order:
            raise IndexError(n)
        return self.rows[n].get(m, Fraction(0))

    def _trim(self) -> "BivariateSeries":
        for n, row in enumerate(self.rows):
            for m in [m for m in row if m > n + self.excess_cap or row[m] == 0]:
                del row[m]
        return self

    def __mul__(self, other: "BivariateSeries") -> "BivariateSeries":
        order = min(self.order, other.order)
        cap = min(self.excess_cap, other.excess_cap)
        rows = [dict() for _ in range(order + 1)]
        for i, ri in enumerate(self.rows[: order + 1]):
            if not ri:
                continue
            for j in range(order + 1 - i):
                rj = other.rows[j]
                if not rj:
                    continue
                target = rows[i + j]
                cutoff = i + j + cap
                for mi, ci in ri.items():
                    for mj, cj in rj.items():
                        m = mi + mj
                        if m <= cutoff:
                            target[m] = target.get(m, Fraction(0)) + ci * cj
        return BivariateSeries(rows, cap)._trim()

    def log(self) -> "BivariateSeries":
        """Formal log in z; the constant row must equal the constant 1."""
        if self.rows[0] != {0: Fraction(1)}:
            raise SeriesError("bivariate log needs constant term 1")
        order = self.order
        cap = self.excess_cap
        out = [dict() for _ in range(order + 1)]
        for n in range(1, order + 1):
            acc = dict(self.rows[n])
            for j in range(1, n):
                cj = out[j]
                gj = self.rows[n - j]
                if not cj or not gj:
                    continue
                cutoff = n + cap
                for mi, ci in cj.items():
                    jci = j * ci
                    for mj, cg in gj.items():
                        m = mi + mj
                        if m <= cutoff:
                            acc[m] = acc.get(m, Fraction(0)) - jci * cg / n
                # note: division by n folded into the inner update above
            out[n] = {m: v for m, v in acc.items() if v != 0 and m <= n + cap}
        return BivariateSeries(out, cap)
