"""Exact Laurent arithmetic over X = 1 - T and the excess pipeline operators.

An XExpr is a finite combination ``sum_t c_t X**(-t) + L ln(1/X)``.  Read
with X = 1 - T, where T is the Cayley tree function, it encodes exponential
generating functions of connected graphs indexed by excess; read with
X = 1 - z it encodes their smooth counterparts (minimum degree two after
pruning).  All ring operations are the same under either reading; only the
pointing operators below commit to one of them.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import ConsistencyError, PinError, XRingError
from .series import (
    Series,
    log_inv_x_count,
    log_inv_x_series,
    tree_polynomial,
    x_power_series,
)

_ZERO = Fraction(0)


def _frac(value):
    if isinstance(value, float):
        raise XRingError("refusing inexact float coefficient %r" % (value,))
    return value if isinstance(value, Fraction) else Fraction(value)


class XExpr:
    """Finite Laurent expression in X with an optional ln(1/X) term."""

    __slots__ = ("terms", "log_coeff")

    def __init__(self, terms=None, log_coeff=0):
        clean = {}
        if terms:
            for t, c in terms.items():
                c = _frac(c)
                if c:
                    clean[int(t)] = c
        self.terms = clean
        self.log_coeff = _frac(log_coeff)

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def x_power(cls, t, coeff=1):
        """coeff * X**(-t)."""
        return cls({t: coeff})

    @classmethod
    def log_inv_x(cls, coeff=1):
        """coeff * ln(1/X)."""
        return cls(None, coeff)

    @classmethod
    def from_t_polynomial(cls, coeffs):
        """Polynomial in T = 1 - X rewritten over powers of X.

        `coeffs` is a sequence of coefficients by degree or a
        {degree: coefficient} mapping.
        """
        items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
        terms = {}
        for i, a in items:
            a = _frac(a)
            if not a:
                continue
            for j in range(i + 1):
                terms[-j] = terms.get(-j, _ZERO) + a * comb(i, j) * (-1) ** j
        return cls(terms)

    # -- queries -----------------------------------------------------

    def coeff(self, t):
        """Coefficient of X**(-t)."""
        return self.terms.get(t, _ZERO)

    @property
    def is_zero(self):
        return not self.terms and not self.log_coeff

    def is_constant(self):
        return not self.log_coeff and set(self.terms) <= {0}

    def max_t(self):
        return max(self.terms) if self.terms else None

    def min_t(self):
        return min(self.terms) if self.terms else None

    def leading(self, count=1):
        """The `count` highest (t, coefficient) pairs, descending in t."""
        return [(t, self.terms[t]) for t in sorted(self.terms, reverse=True)[:count]]

    def as_t_polynomial(self):
        """Coefficient list over powers of T; requires no negative t and no log."""
        if self.log_coeff:
            raise XRingError("expression has a ln(1/X) part")
        if any(t > 0 for t in self.terms):
            raise XRingError("expression has negative powers of X")
        deg = max((-t for t in self.terms), default=0)
        out = [_ZERO] * (deg + 1)
        for t, c in self.terms.items():
            for i in range(-t + 1):
                out[i] += c * comb(-t, i) * (-1) ** i
        while len(out) > 1 and not out[-1]:
            out.pop()
        return out

    def __eq__(self, other):
        if isinstance(other, XExpr):
            return self.terms == other.terms and self.log_coeff == other.log_coeff
        if isinstance(other, (int, Fraction)):
            return self == XExpr({0: other})
        return NotImplemented

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.log_coeff))

    def __repr__(self):
        bits = []
        if self.log_coeff:
            bits.append("(%s)*ln(1/X)" % (self.log_coeff,))
        for t in sorted(self.terms, reverse=True):
            bits.append("(%s)*X^(%d)" % (self.terms[t], -t))
        return "XExpr[%s]" % (" + ".join(bits) if bits else "0")

    # -- ring operations ----------------------------------------------

    def _coerce(self, other):
        if isinstance(other, XExpr):
            return other
        if isinstance(other, (int, Fraction)):
            return XExpr({0: other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for t, c in o.terms.items():
            terms[t] = terms.get(t, _ZERO) + c
        return XExpr(terms, self.log_coeff + o.log_coeff)

    __radd__ = __add__

    def __neg__(self):
        return XExpr({t: -c for t, c in self.terms.items()}, -self.log_coeff)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            return XExpr({t: v * c for t, v in self.terms.items()}, self.log_coeff * c)
        if not isinstance(other, XExpr):
            return NotImplemented
        if self.log_coeff and other.log_coeff:
            raise XRingError("product of two logarithmic expressions leaves the ring")
        if self.log_coeff and not other.is_constant():
            raise XRingError("logarithm times a non-constant expression leaves the ring")
        if other.log_coeff and not self.is_constant():
            raise XRingError("logarithm times a non-constant expression leaves the ring")
        terms = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in other.terms.items():
                t = t1 + t2
                terms[t] = terms.get(t, _ZERO) + c1 * c2
        log = self.log_coeff * other.coeff(0) + other.log_coeff * self.coeff(0)
        return XExpr(terms, log)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _frac(other))
        return NotImplemented

    def times_x_power(self, shift):
        """Multiply by X**(-shift)."""
        if self.log_coeff and shift:
            raise XRingError("cannot shift a logarithmic expression by a power of X")
        return XExpr({t + shift: c for t, c in self.terms.items()}, self.log_coeff)

    def div_tree_power(self, power=1):
        """Exact division by T**power (smooth reading: by z**power).

        Dividing by T = 1 - X is a descending prefix sum over the X
        coefficients; it is exact iff the expression vanishes at X = 1.
        """
        if power < 0:
            raise XRingError("negative division power")
        if self.log_coeff:
            raise XRingError("cannot divide a logarithmic expression by T")
        cur = self.terms
        for _ in range(power):
            if not cur:
                break
            if sum(cur.values()):
                raise XRingError("not divisible by T: nonzero value at X = 1")
            out = {}
            run = _ZERO
            for t in range(max(cur), min(cur) - 1, -1):
                run += cur.get(t, _ZERO)
                if run:
                    out[t] = run
            cur = out
        return XExpr(cur)

    # -- pointing and folding operators --------------------------------

    def theta_z(self):
        """z d/dz in the tree reading: X**(-t) -> t(X**(-t-2) - X**(-t-1))."""
        out = {}

        def add(t, c):
            if c:
                out[t] = out.get(t, _ZERO) + c

        for t, c in self.terms.items():
            if t:
                add(t + 2, t * c)
                add(t + 1, -t * c)
        if self.log_coeff:
            add(2, self.log_coeff)
            add(1, -self.log_coeff)
        return XExpr(out)

    def theta_smooth(self):
        """z d/dz in the smooth reading: X**(-t) -> t(X**(-t-1) - X**(-t))."""
        out = {}

        def add(t, c):
            if c:
                out[t] = out.get(t, _ZERO) + c

        for t, c in self.terms.items():
            if t:
                add(t + 1, t * c)
                add(t, -t * c)
        if self.log_coeff:
            add(1, self.log_coeff)
            add(0, -self.log_coeff)
        return XExpr(out)

    def delta_apply(self, kappa):
        """2*kappa + 2*T*d/dT: X**(-t) -> 2t X**(-t-1) + 2(kappa - t) X**(-t)."""
        if self.log_coeff:
            raise XRingError("delta is only applied to log-free expressions")
        out = {}
        for t, c in self.terms.items():
            if t:
                out[t + 1] = out.get(t + 1, _ZERO) + 2 * t * c
            v = 2 * (kappa - t) * c
            if v:
                out[t] = out.get(t, _ZERO) + v
        return XExpr(out)

    # -- evaluation -----------------------------------------------------

    def eval_series(self, order):
        """Exact power series in z of the tree reading, up to z**order."""
        s = Series.zero(order)
        for t in sorted(self.terms):
            s = s + self.terms[t] * x_power_series(t, order)
        if self.log_coeff:
            s = s + self.log_coeff * log_inv_x_series(order)
        return s

    def count(self, n):
        """n! [z^n] of the tree reading, computed exactly without a series."""
        total = _ZERO
        for t, c in self.terms.items():
            total += c * tree_polynomial(n, t)
        if self.log_coeff:
            total += self.log_coeff * log_inv_x_count(n)
        return total


# -- module level operator interface --------------------------------------


def xexpr_eval(expr, order):
    return expr.eval_series(order)


def theta_z(expr):
    return expr.theta_z()


def theta_smooth(expr):
    return expr.theta_smooth()


def delta_apply(expr, kappa):
    return expr.delta_apply(kappa)


def delta_invert(kappa, rhs, pin):
    """Solve Delta_kappa W = rhs for the unique finite Laurent solution.

    Coefficients are matched descending from the top power.  Matching at
    X**(-1) must hold identically, the coefficient of X**0 is a free
    constant, and the requirement that the expansion terminates below the
    support of `rhs` fixes that constant; the full residual is then checked
    exactly.  `pin` = (n, value) is an independently obtained count
    n! [z^n] W verified as a final spot check.
    """
    if kappa < 1:
        raise XRingError("delta_invert requires kappa >= 1")
    if rhs.log_coeff:
        raise XRingError("right-hand side must be free of ln(1/X)")
    r = rhs.terms
    top = max(r) if r else 0
    w = {}
    for u in range(max(top, 1), 1, -1):
        w[u - 1] = (r.get(u, _ZERO) - 2 * (kappa - u) * w.get(u, _ZERO)) / (2 * (u - 1))
    if r.get(1, _ZERO) != 2 * (kappa - 1) * w.get(1, _ZERO):
        raise ConsistencyError(
            "delta_invert: coefficient matching fails at X^(-1) for kappa=%d" % kappa
        )
    lo_stop = min(0, min(r)) if r else 0
    aff = {0: (_ZERO, Fraction(1))}
    prev = aff[0]
    for u in range(0, lo_stop - 1, -1):
        ca, cb = prev
        den = 2 * (u - 1)
        prev = (
            (r.get(u, _ZERO) - 2 * (kappa - u) * ca) / den,
            (-2 * (kappa - u) * cb) / den,
        )
        aff[u - 1] = prev
    na, nb = prev
    if not nb:
        raise XRingError("delta_invert: degenerate tail while fixing the free constant")
    const = -na / nb
    for t, (ca, cb) in aff.items():
        if t == lo_stop - 1:
            continue
        val = ca + cb * const
        if val:
            w[t] = val
    result = XExpr(w)
    if result.delta_apply(kappa) != rhs:
        raise ConsistencyError("delta_invert: residual is nonzero")
    n_pin, value = pin
    got = result.count(n_pin)
    if got != value:
        raise PinError(
            "delta_invert: pin mismatch at n=%d: computed %s, oracle %s"
            % (n_pin, got, value)
        )
    return result


def base_rhs(w0, model="graph"):
    """Source term of the first pipeline step, where the (0,0) product enters once."""
    th = w0.theta_z()
    out = th.theta_z() + th * th
    if model == "graph":
        out = out - 3 * th
    elif model != "multigraph":
        raise ValueError("model must be 'graph' or 'multigraph'")
    return out


def omega_apply(w, k, base_pointed, model="graph"):
    """Folded linear operator sending W_k to the source of W_{k+1}, for k >= 1.

    `base_pointed` is theta_z of the excess-zero generating function of the
    same family, entering through the mixed (0,k) product.
    """
    if k < 1:
        raise XRingError("omega_apply requires k >= 1; the base step is base_rhs")
    th = w.theta_z()
    out = th.theta_z() + 2 * (base_pointed * th)
    if model == "graph":
        out = out - 3 * th - (2 * k) * w
    elif model != "multigraph":
        raise ValueError("model must be 'graph' or 'multigraph'")
    return out


def lambda_sum(ws):
    """Convolution source sum_t (theta W_t)(theta W_{k-t}), ws = [W_1 .. W_{k-1}]."""
    th = [w.theta_z() for w in ws]
    k = len(ws) + 1
    total = XExpr()
    for t in range(1, k):
        total = total + th[t - 1] * th[k - 1 - t]
    return total


# -- smooth world gluing rules ---------------------------------------------


class SmoothFamily:
    """Smooth-world EGF together with the metadata the gluing rules need.

    `two_connected` refers to the graphs of the family itself and controls
    whether compositions attaching it are exact or only upper bounds.
    """

    __slots__ = ("expr", "excess", "two_connected", "exact")

    def __init__(self, expr, excess, two_connected=False, exact=True):
        self.expr = expr
        self.excess = int(excess)
        self.two_connected = bool(two_connected)
        self.exact = bool(exact)

    def __repr__(self):
        return "SmoothFamily(excess=%d, two_connected=%s, exact=%s, expr=%r)" % (
            self.excess,
            self.two_connected,
            self.exact,
            self.expr,
        )


def compose_serial(f, h, with_path=False):
    """Join an f-graph and an h-graph at a cutpoint, or through a path.

    EGF rule: theta(f) theta(h) / z, times an extra 1/(1-z) when a
    connecting path of any positive length is also allowed.  The total
    excess always grows by one.  The count is exact when the attached
    family is two-connected and an upper bound otherwise.
    """
    prod = f.expr.theta_smooth() * h.expr.theta_smooth()
    if with_path:
        prod = prod.times_x_power(1)
    expr = prod.div_tree_power(1)
    return SmoothFamily(
        expr,
        f.excess + h.excess + 1,
        False,
        f.exact and h.exact and h.two_connected,
    )


def compose_parallel(f, h):
    """Glue an f-graph and an h-graph along an oriented edge.

    EGF rule: 2 ((ex_f + theta) f) ((ex_h + theta) h) / z**2, where
    (ex + theta) marks one of the m = n + ex edges.  The shared edge raises
    the total excess by one.  Exactness as for compose_serial.
    """
    a = f.excess * f.expr + f.expr.theta_smooth()
    b = h.excess * h.expr + h.expr.theta_smooth()
    expr = (2 * (a * b)).div_tree_power(2)
    return SmoothFamily(
        expr,
        f.excess + h.excess + 1,
        False,
        f.exact and h.exact and h.two_connected,
    )
