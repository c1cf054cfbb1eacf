"""Scalar backends: exact rationals (optionally Gaussian) and complex floats.

Exact scalars are ``int``, ``Fraction`` or :class:`GaussianRational`.
Everything else is treated as floating (``float``/``complex``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import DomainError

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, Rational):
            return GaussianRational(Fraction(x), Fraction(0))
        return NotImplemented

    def simplify(self):
        """Collapse to a plain Fraction when the imaginary part vanishes."""
        return self.re if self.im == 0 else self

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return complex(self) + other
        return GaussianRational(self.re + o.re, self.im + o.im).simplify()

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return complex(self) * other
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re).simplify()

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return complex(self) / other
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        p = self * o.conjugate()
        if not isinstance(p, GaussianRational):
            p = GaussianRational(p)
        return GaussianRational(p.re / n, p.im / n).simplify()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return other / complex(self)
        return o / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"GaussianRational({render_scalar(self)!r})"


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational)) and not isinstance(x, bool)


def all_exact(values) -> bool:
    return all(is_exact(v) for v in values)


def exact_or_none(x):
    """Return ``x`` as an exact scalar when it is exact, else None."""
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, GaussianRational)):
        return x
    return None


def to_complex(x) -> complex:
    return complex(x)


def to_float_backend(x):
    """Convert any scalar to the floating backend."""
    if isinstance(x, (int, Fraction)):
        return float(x)
    if isinstance(x, GaussianRational):
        return complex(x)
    return x


def exact_real_part(x):
    if isinstance(x, GaussianRational):
        return x.re
    return Fraction(x)


def exact_imag_part(x):
    if isinstance(x, GaussianRational):
        return x.im
    return Fraction(0)


def fraction_sqrt(q: Fraction):
    """Exact square root of a nonnegative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def exact_sqrt(x):
    """Exact square root of a rational or Gaussian rational, None if not in Q(i)."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        if x >= 0:
            return fraction_sqrt(x)
        r = fraction_sqrt(-x)
        return None if r is None else GaussianRational(0, r)
    if isinstance(x, GaussianRational):
        # (p + qi)^2 = a + bi  ->  p^2 = (a + |x|)/2
        a, b = x.re, x.im
        nrm = fraction_sqrt(a * a + b * b)
        if nrm is None:
            return None
        p = fraction_sqrt((a + nrm) / 2)
        if p is None:
            return None
        if p == 0:
            q = fraction_sqrt((nrm - a) / 2)
            return None if q is None else GaussianRational(0, q)
        return GaussianRational(p, b / (2 * p)).simplify()
    return None


def is_zero(x, scale=0.0, eps=DEFAULT_EPS) -> bool:
    """Zero test: exact equality for exact scalars, else ``|x| <= eps * scale``."""
    if is_exact(x):
        return x == 0
    return abs(x) <= eps * scale


# ---------------------------------------------------------------------------
# text rendering / parsing

def _render_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _render_float(v: float) -> str:
    if v == 0:
        return "0.0"
    return repr(float(v))


def render_scalar(x) -> str:
    """Render exact scalars as ``p/q`` (``a+bi`` for Gaussian) and floats as decimals."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return _render_fraction(x)
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return _render_fraction(x.re)
        im = x.im
        sign = "-" if im < 0 else "+"
        mag = "" if abs(im) == 1 else _render_fraction(abs(im))
        if x.re == 0:
            return f"{'-' if im < 0 else ''}{mag}i"
        return f"{_render_fraction(x.re)}{sign}{mag}i"
    z = complex(x)
    if z.imag == 0 and not isinstance(x, complex):
        return _render_float(z.real)
    if z.imag == 0:
        return _render_float(z.real)
    sign = "-" if z.imag < 0 or (z.imag == 0 and math.copysign(1, z.imag) < 0) else "+"
    return f"{_render_float(z.real)}{sign}{_render_float(abs(z.imag))}i"


_REAL = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_COMPLEX_RE = re.compile(
    rf"^\s*(?P<re>[+-]?{_REAL})?\s*(?:(?P<isign>[+-])?\s*(?P<im>{_REAL})?\s*(?P<i>[ij]))?\s*$"
)


def _parse_real(text: str):
    if "/" in text:
        num, den = text.split("/")
        if any(c in num for c in ".eE") or any(c in den for c in ".eE"):
            return float(num) / float(den)
        return Fraction(int(num), int(den))
    if any(c in text for c in ".eE"):
        return float(text)
    return Fraction(int(text))


def parse_scalar(text: str):
    """Parse ``"3"``, ``"-1/2"``, ``"0.25"``, ``"i"``, ``"1/2-3/4i"``, ``"2.5e-1+1i"``.

    Literals without a decimal point or exponent parse to exact scalars.
    """
    if isinstance(text, (int, float, complex, Fraction, GaussianRational)) and not isinstance(text, bool):
        return text
    m = _COMPLEX_RE.match(str(text))
    if not m or (m.group("re") is None and m.group("i") is None):
        raise DomainError(f"cannot parse scalar {text!r}")
    re_part = _parse_real(m.group("re")) if m.group("re") else Fraction(0)
    if m.group("i") is None:
        return re_part
    if m.group("re") is not None and m.group("isign") is None:
        # "2i" is caught with re='2'; reinterpret as a pure imaginary literal
        if m.group("im") is not None:
            raise DomainError(f"cannot parse scalar {text!r}")
        im_part, re_part = re_part, Fraction(0)
    else:
        im_part = _parse_real(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("isign") == "-":
            im_part = -im_part
    if isinstance(re_part, Fraction) and isinstance(im_part, Fraction):
        return GaussianRational(re_part, im_part).simplify()
    return complex(float(re_part), float(im_part))


def to_json_scalar(x):
    return render_scalar(x)
