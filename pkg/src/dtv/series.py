"""Truncated Laurent series at a base point.

A :class:`LaurentSeries` stores the coefficients of ``(z - base_point)**k`` for
``k = min_degree .. trunc_order``; everything above ``trunc_order`` is unknown.
Coefficients are exact rationals (``Fraction`` / ``GaussianRational``) or
complex floats; mixing promotes to floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import scalars
from .errors import DomainError, TruncationError
from .scalars import DEFAULT_EPS, is_exact, render_scalar

DEFAULT_TRUNC = 64


def _norm(c):
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    return c


@dataclass(frozen=True)
class LaurentSeries:
    base_point: object
    min_degree: int
    coeffs: tuple
    trunc_order: int

    def __post_init__(self):
        coeffs = tuple(_norm(c) for c in self.coeffs)
        lo = self.min_degree
        # strip exactly-zero leading terms (float noise is removed with chop)
        start = 0
        while start < len(coeffs) - 1 and coeffs[start] == 0:
            start += 1
        if coeffs and start == len(coeffs) - 1 and coeffs[start] == 0:
            coeffs = (coeffs[start],)
            lo = self.trunc_order
        else:
            coeffs = coeffs[start:]
            lo += start
        if not coeffs:
            coeffs = (Fraction(0),)
            lo = self.trunc_order
        if self.trunc_order < lo:
            raise DomainError("trunc_order must be >= min_degree")
        if len(coeffs) != self.trunc_order - lo + 1:
            raise DomainError(
                f"expected {self.trunc_order - lo + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "min_degree", lo)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_dict(cls, coeffs: dict, trunc_order: int, base_point=0):
        """Build from ``{degree: coefficient}``; missing degrees are zero."""
        if not coeffs:
            return cls.zero(trunc_order, base_point)
        lo = min(coeffs)
        if trunc_order < lo:
            raise DomainError("trunc_order below lowest listed degree")
        values = [coeffs.get(k, Fraction(0)) for k in range(lo, trunc_order + 1)]
        return cls(base_point, lo, tuple(values), trunc_order)

    @classmethod
    def from_list(cls, coeffs, min_degree=0, trunc_order=None, base_point=0):
        coeffs = list(coeffs)
        if trunc_order is None:
            trunc_order = min_degree + len(coeffs) - 1
        need = trunc_order - min_degree + 1
        coeffs = coeffs[:need] + [Fraction(0)] * (need - len(coeffs))
        return cls(base_point, min_degree, tuple(coeffs), trunc_order)

    @classmethod
    def zero(cls, trunc_order=DEFAULT_TRUNC, base_point=0):
        return cls(base_point, trunc_order, (Fraction(0),), trunc_order)

    @classmethod
    def constant(cls, c, trunc_order=DEFAULT_TRUNC, base_point=0):
        return cls.from_dict({0: c}, trunc_order, base_point)

    @classmethod
    def monomial(cls, degree, c=1, trunc_order=DEFAULT_TRUNC, base_point=0):
        return cls.from_dict({degree: c}, max(trunc_order, degree), base_point)

    # -- access --------------------------------------------------------------

    def __getitem__(self, k):
        """Coefficient of degree ``k``; zero below ``min_degree``."""
        if k > self.trunc_order:
            raise TruncationError(
                f"coefficient of degree {k} beyond truncation {self.trunc_order}", k)
        if k < self.min_degree:
            return Fraction(0)
        return self.coeffs[k - self.min_degree]

    def items(self):
        for i, c in enumerate(self.coeffs):
            yield self.min_degree + i, c

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def is_zero(self, eps=DEFAULT_EPS) -> bool:
        if self.exact:
            return all(c == 0 for c in self.coeffs)
        scale = self.scale()
        return scale == 0 or all(abs(c) <= eps * scale for c in self.coeffs)

    def scale(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def local_scale(self, window: int = 8) -> float:
        """max |c| over the lowest ``window`` stored degrees.

        Taylor coefficients grow like R^-k, so leading-term zero tests
        compare against this instead of the global ``scale``.
        """
        return max((abs(c) for c in self.coeffs[:window]), default=0.0)

    def valuation(self):
        """Lowest degree with a nonzero coefficient, or None for the zero series."""
        if self.coeffs[0] == 0:
            return None
        return self.min_degree

    # -- structural ------------------------------------------------------------

    def truncate(self, n):
        if n > self.trunc_order:
            raise TruncationError(f"cannot raise truncation {self.trunc_order} -> {n}",
                                  n)
        if n < self.min_degree:
            return LaurentSeries.zero(n, self.base_point)
        return LaurentSeries(self.base_point, self.min_degree,
                             self.coeffs[: n - self.min_degree + 1], n)

    def map(self, f):
        return LaurentSeries(self.base_point, self.min_degree,
                             tuple(f(c) for c in self.coeffs), self.trunc_order)

    def to_float(self):
        return self.map(scalars.to_float_backend)

    def chop(self, eps=DEFAULT_EPS, scale=None):
        """Zero every coefficient with ``|c| <= eps * scale`` (float mode only)."""
        if self.exact:
            return self
        s = self.scale() if scale is None else scale
        return self.map(lambda c: 0.0 if abs(c) <= eps * s else c)

    def shift_degree(self, k):
        """Multiply by ``(z - base_point)**k``."""
        return LaurentSeries(self.base_point, self.min_degree + k, self.coeffs,
                             self.trunc_order + k)

    def rescale(self, rho):
        """Series in ``t`` with ``z - base_point = rho * t``."""
        out = []
        for k, c in self.items():
            out.append(c * rho ** k if k >= 0 else c / rho ** (-k))
        return LaurentSeries(self.base_point, self.min_degree, tuple(out), self.trunc_order)

    def __call__(self, z):
        """Evaluate the truncated sum at ``z`` (absolute coordinate)."""
        t = z - self.base_point
        return sum(c * t ** k for k, c in self.items())

    # -- arithmetic ------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            raise TypeError("expected LaurentSeries")
        if other.base_point != self.base_point:
            raise DomainError(
                f"base points differ: {self.base_point!r} vs {other.base_point!r}")

    def _lift(self, other):
        if isinstance(other, LaurentSeries):
            self._check(other)
            return other
        return LaurentSeries.constant(other, max(self.trunc_order, 0), self.base_point)

    def __add__(self, other):
        other = self._lift(other)
        n = min(self.trunc_order, other.trunc_order)
        lo = min(self.min_degree, other.min_degree)
        if n < lo:
            return LaurentSeries.zero(n, self.base_point)
        vals = [self[k] + other[k] for k in range(lo, n + 1)]
        return LaurentSeries(self.base_point, lo, tuple(vals), n)

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.map(lambda c: c * other)
        self._check(other)
        a, b = self, other
        lo = a.min_degree + b.min_degree
        n = min(a.trunc_order + b.min_degree, b.trunc_order + a.min_degree)
        na, nb = len(a.coeffs), len(b.coeffs)
        out = []
        for k in range(n - lo + 1):
            s = 0
            for i in range(max(0, k - nb + 1), min(k, na - 1) + 1):
                s += a.coeffs[i] * b.coeffs[k - i]
            out.append(s)
        return LaurentSeries(a.base_point, lo, tuple(out), n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.map(lambda c: c / other)
        return divide(self, other)

    def __rtruediv__(self, other):
        return divide(self._lift(other), self)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("only nonnegative integer powers are supported")
        if n == 0:
            return LaurentSeries.constant(1, self.trunc_order - self.min_degree,
                                          self.base_point)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def derivative(self, times=1):
        s = self
        for _ in range(times):
            s = differentiate(s)
        return s

    def to_json(self):
        return {
            "base_point": render_scalar(self.base_point),
            "min_degree": self.min_degree,
            "trunc_order": self.trunc_order,
            "coeffs": [render_scalar(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, doc):
        try:
            coeffs = [scalars.parse_scalar(c) for c in doc["coeffs"]]
            lo = int(doc["min_degree"])
            n = int(doc.get("trunc_order", lo + len(coeffs) - 1))
            base = scalars.parse_scalar(doc.get("base_point", "0"))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed series document: {exc}") from exc
        return cls.from_list(coeffs, lo, n, base)

    def __repr__(self):
        terms = ", ".join(f"{k}: {render_scalar(c)}" for k, c in self.items() if c != 0)
        return f"LaurentSeries({{{terms}}}, O^{self.trunc_order + 1}, at {self.base_point!r})"


# ---------------------------------------------------------------------------

def series_arith(kind: str, a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise DomainError(f"unknown series operation {kind!r}")


def differentiate(a: LaurentSeries) -> LaurentSeries:
    vals = {k - 1: k * c for k, c in a.items() if k != 0}
    n = a.trunc_order - 1
    if not vals or all(v == 0 for v in vals.values()):
        return LaurentSeries.zero(n, a.base_point)
    lo = min(vals)
    if n < lo:
        return LaurentSeries.zero(n, a.base_point)
    return LaurentSeries.from_dict({k: v for k, v in vals.items() if k <= n}, n, a.base_point)


def integrate(a: LaurentSeries, constant=0) -> LaurentSeries:
    """Antiderivative with value ``constant`` at the base point."""
    vals = {}
    for k, c in a.items():
        if k == -1:
            if c != 0:
                raise DomainError("cannot integrate a series with a z^-1 term")
            continue
        vals[k + 1] = c / (k + 1)
    vals[0] = vals.get(0, 0) + constant
    return LaurentSeries.from_dict(vals, a.trunc_order + 1, a.base_point)


def divide(a: LaurentSeries, b: LaurentSeries, eps=DEFAULT_EPS) -> LaurentSeries:
    """``c`` with ``c * b == a`` through the common valid range."""
    a._check(b)
    if b.exact:
        nz = [i for i, c in enumerate(b.coeffs) if c != 0]
    else:
        s = b.local_scale()
        nz = [i for i, c in enumerate(b.coeffs) if abs(c) > eps * s] if s > 0 else []
    if not nz:
        raise ZeroDivisionError("division by a series that vanishes to its truncation")
    j0 = nz[0]
    bq = b.coeffs[j0:]
    mb = b.min_degree + j0
    ma = a.min_degree
    rel = min(a.trunc_order - ma, b.trunc_order - mb)
    lo = ma - mb
    lead = bq[0]
    num = list(a.coeffs[: rel + 1])
    out = []
    for k in range(rel + 1):
        s = num[k]
        for i in range(1, min(k, len(bq) - 1) + 1):
            s -= bq[i] * out[k - i]
        out.append(s / lead)
    return LaurentSeries(a.base_point, lo, tuple(out), lo + rel)


def sqrt(a: LaurentSeries) -> LaurentSeries:
    """Square root with leading coefficient sqrt(c0) (principal branch).

    The valuation must be even; exact inputs stay exact when the leading
    coefficient is a perfect square in Q(i).
    """
    v = a.valuation()
    if v is None:
        return LaurentSeries.zero(a.trunc_order // 2 if a.trunc_order >= 0 else a.trunc_order,
                                  a.base_point)
    if v % 2:
        raise DomainError("square root of a series with odd valuation")
    c0 = a.coeffs[0]
    r0 = scalars.exact_sqrt(c0) if is_exact(c0) else None
    if r0 is None:
        r0 = complex(c0) ** 0.5
        coeffs = [scalars.to_float_backend(c) for c in a.coeffs]
    else:
        coeffs = list(a.coeffs)
    rel = a.trunc_order - v
    out = [r0]
    for k in range(1, rel + 1):
        s = coeffs[k]
        for i in range(1, k):
            s -= out[i] * out[k - i]
        out.append(s / (2 * r0))
    return LaurentSeries(a.base_point, v // 2, tuple(out), v // 2 + rel)


def binomial_shift(poly_coeffs, shift):
    """Re-expand ``sum c_k x^k`` in powers of ``(x - shift)``."""
    n = len(poly_coeffs)
    out = [0] * n
    for k, c in enumerate(poly_coeffs):
        for j in range(k + 1):
            out[j] += c * comb(k, j) * shift ** (k - j)
    return out


def geometric_inverse_power(power: int, center, base_point, trunc_order, coeff=1):
    """Taylor series of ``coeff / (z - center)**power`` at a regular ``base_point``.

    With ``d = base_point - center``: ``(d + t)^-p = d^-p sum C(-p, k) (t/d)^k``.
    """
    d = base_point - center
    if d == 0:
        raise DomainError("base point coincides with the pole")
    exact = is_exact(d) and is_exact(coeff)
    if not exact:
        d = complex(d)
    vals = {}
    inv = Fraction(1) / d if exact and not isinstance(d, scalars.GaussianRational) else 1 / d
    term = coeff * inv ** power
    for k in range(trunc_order + 1):
        vals[k] = term
        term = term * (-(power + k)) * inv / (k + 1)
    return LaurentSeries.from_dict(vals, trunc_order, base_point)
