"""Lattices, the Weierstrass function and Jacobi sn/cn/dn.

Conventions: the period lattice is ``2*omega1*Z + 2*omega2*Z`` with
``Im(omega2/omega1) > 0``, ``omega3 = omega1 + omega2`` and
``e_i = wp(omega_i)``.  Half-period classes are numbered 0..3 (0 is the
lattice itself) so that the class of ``omega_i - omega_j`` is ``i ^ j``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import scalars
from .errors import DegenerateLatticeError, DomainError, PoleError
from .reduction import gauss_reduce_complex
from .scalars import is_exact, render_scalar
from .series import LaurentSeries

CENTER_NAMES = {"0": 0, "w1": 1, "w2": 2, "w3": 3, "omega1": 1, "omega2": 2, "omega3": 3}
EISENSTEIN_CUTOFF = 40


def center_index(center) -> int:
    if isinstance(center, int) and 0 <= center <= 3:
        return center
    try:
        return CENTER_NAMES[str(center)]
    except KeyError:
        raise DomainError(f"unknown half-period class {center!r}") from None


# ---------------------------------------------------------------------------
# arithmetic-geometric mean and complete elliptic integrals

def agm(a, b, tol=1e-16, max_iter=64):
    """Optimal AGM: each square root is the one closer to the arithmetic mean."""
    a, b = complex(a), complex(b)
    for _ in range(max_iter):
        a1 = (a + b) / 2
        r = cmath.sqrt(a * b)
        if abs(a1 - r) > abs(a1 + r):
            r = -r
        a, b = a1, r
        if abs(a - b) <= tol * abs(a):
            break
    return (a + b) / 2


def ellipk(m) -> complex:
    """Complete elliptic integral of the first kind K(m), m = k^2."""
    m = complex(m)
    if m == 1:
        raise DomainError("K(1) diverges")
    return math.pi / (2 * agm(1, cmath.sqrt(1 - m)))


# ---------------------------------------------------------------------------
# invariants

def _cubic_roots(g2, g3):
    g2c, g3c = complex(g2), complex(g3)
    roots = np.roots([4, 0, -g2c, -g3c]).astype(complex)
    polished = []
    for r in roots:
        for _ in range(4):
            f = 4 * r ** 3 - g2c * r - g3c
            df = 12 * r ** 2 - g2c
            if df == 0:
                break
            r = r - f / df
        polished.append(complex(r))
    return polished


def _sort_desc(values):
    return sorted(values, key=lambda z: (complex(z).real, complex(z).imag), reverse=True)


def _snap(x, tol=1e-13):
    """Drop floating noise in real/imaginary parts."""
    x = complex(x)
    re = 0.0 if abs(x.real) <= tol * max(1.0, abs(x)) else x.real
    im = 0.0 if abs(x.imag) <= tol * max(1.0, abs(x)) else x.imag
    return complex(re, im)


def _exact_roots(g2, g3, float_roots):
    """Rational roots of 4t^3 - g2 t - g3 when all three are rational."""
    if not (is_exact(g2) and is_exact(g3)):
        return None
    if isinstance(g2, scalars.GaussianRational) or isinstance(g3, scalars.GaussianRational):
        return None
    out = []
    for r in float_roots:
        if abs(r.imag) > 1e-9 * max(1.0, abs(r)):
            return None
        q = Fraction(r.real).limit_denominator(10 ** 8)
        if 4 * q ** 3 - g2 * q - g3 != 0:
            return None
        out.append(q)
    return out


def half_period_values(g2, g3):
    """Roots of 4t^3 - g2 t - g3, descending by (real, imag); exact if rational."""
    roots = _cubic_roots(g2, g3)
    exact = _exact_roots(g2, g3, roots)
    if exact is not None:
        return tuple(sorted(exact, reverse=True))
    return tuple(_snap(r) for r in _sort_desc(roots))


def eisenstein_q_invariants(omega1: complex, omega2: complex):
    """(g2, g3) of 2*omega1*Z + 2*omega2*Z from the q-expansions of E4, E6."""
    p1, p2 = gauss_reduce_complex(2 * complex(omega1), 2 * complex(omega2))
    tau = p2 / p1
    w = p1 / 2
    q = cmath.exp(2j * math.pi * tau)
    e4 = 1.0 + 0j
    e6 = 1.0 + 0j
    qn = 1.0 + 0j
    for n in range(1, 40):
        qn *= q
        if abs(qn) < 1e-20:
            break
        s3 = sum(d ** 3 for d in range(1, n + 1) if n % d == 0)
        s5 = sum(d ** 5 for d in range(1, n + 1) if n % d == 0)
        e4 += 240 * s3 * qn
        e6 -= 504 * s5 * qn
    a = math.pi / w
    return a ** 4 / 12 * e4, a ** 6 / 216 * e6


def eisenstein_sums(omega1: complex, omega2: complex, cutoff: int = EISENSTEIN_CUTOFF):
    """Direct lattice sums (g2, g3, tail) over max(|m|,|n|) <= cutoff.

    The truncated sums converge like cutoff**-2; the values returned are
    Richardson-corrected from cutoff/2 and cutoff and ``tail`` estimates the
    remaining error of the correction.
    """
    def raw(n):
        m = np.arange(-n, n + 1)
        mm, nn = np.meshgrid(m, m)
        w = 2 * complex(omega1) * mm + 2 * complex(omega2) * nn
        w = w[(mm != 0) | (nn != 0)]
        return 60 * np.sum(w ** -4), 140 * np.sum(w ** -6)

    h2, h3 = raw(cutoff // 2)
    f2, f3 = raw(cutoff)
    g2 = (4 * f2 - h2) / 3
    g3 = (4 * f3 - h3) / 3
    tail = max(abs(g2 - f2), abs(g3 - f3)) / (cutoff / 2) ** 2
    return g2, g3, tail


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    omega1: complex
    omega2: complex
    g2: object
    g3: object
    e: tuple
    discriminant: object = field(default=None)

    def __post_init__(self):
        if self.discriminant is None:
            object.__setattr__(self, "discriminant", self.g2 ** 3 - 27 * self.g3 ** 2)

    @property
    def omega3(self) -> complex:
        return self.omega1 + self.omega2

    @property
    def half_periods(self):
        return (0j, complex(self.omega1), complex(self.omega2), complex(self.omega3))

    @property
    def exact(self) -> bool:
        """True when g2, g3 and all e_i are exact rationals."""
        return all(is_exact(x) for x in (self.g2, self.g3, *self.e))

    @property
    def invariants_exact(self) -> bool:
        return is_exact(self.g2) and is_exact(self.g3)

    @cached_property
    def reduced_periods(self):
        return gauss_reduce_complex(2 * self.omega1, 2 * self.omega2)

    @cached_property
    def _reduce_matrix(self):
        p1, p2 = self.reduced_periods
        return np.linalg.inv(np.array([[p1.real, p2.real], [p1.imag, p2.imag]]))

    @cached_property
    def _pole_coeffs(self):
        s = wp_series(self, 0, 2 * 24)
        return np.array([complex(s[2 * j]) for j in range(1, 25)])

    def __hash__(self):
        return hash((complex(self.omega1), complex(self.omega2), str(self.g2), str(self.g3)))

    def __eq__(self, other):
        return isinstance(other, Lattice) and hash(self) == hash(other)

    def to_json(self):
        return {
            "omega1": render_scalar(complex(self.omega1)),
            "omega2": render_scalar(complex(self.omega2)),
            "g2": render_scalar(self.g2),
            "g3": render_scalar(self.g3),
            "e": [render_scalar(x) for x in self.e],
            "discriminant": render_scalar(self.discriminant),
        }

    @classmethod
    def from_json(cls, doc):
        if "g2" in doc and "g3" in doc and "omega1" not in doc:
            return lattice_from_invariants(scalars.parse_scalar(doc["g2"]),
                                           scalars.parse_scalar(doc["g3"]))
        try:
            g2 = scalars.parse_scalar(doc["g2"])
            g3 = scalars.parse_scalar(doc["g3"])
            w1 = complex(scalars.parse_scalar(doc["omega1"]))
            w2 = complex(scalars.parse_scalar(doc["omega2"]))
            e = tuple(scalars.parse_scalar(x) for x in doc["e"])
        except KeyError as exc:
            raise DomainError(f"lattice document missing {exc}") from exc
        return cls(w1, w2, g2, g3, e)


def _lattice_from_roles(g2, g3, e, wa, wb):
    """Assign omega1/omega2 so that wp(omega_i) = e_i."""
    prov = Lattice(wa, wb, g2, g3, tuple(e))
    reps = [wa, wb, wa + wb]
    vals = [complex(wp_eval(prov, w)) for w in reps]
    ec = [complex(x) for x in e]
    pick = []
    for target in ec[:2]:
        j = int(np.argmin([abs(v - target) for v in vals]))
        pick.append(reps[j])
    w1, w2 = pick
    if abs((w2 / w1).imag) < 1e-12:
        raise DomainError("half-period assignment failed")
    if (w2 / w1).imag < 0:
        w2 = -w2
    return Lattice(complex(w1), complex(w2), g2, g3, tuple(e))


@lru_cache(maxsize=256)
def lattice_from_invariants(g2, g3) -> Lattice:
    """Lattice with invariants (g2, g3); e_i descending by (real, imag)."""
    g2 = scalars.exact_or_none(g2) if is_exact(g2) else complex(g2)
    g3 = scalars.exact_or_none(g3) if is_exact(g3) else complex(g3)
    if isinstance(g2, complex) and g2.imag == 0:
        g2 = g2.real
    if isinstance(g3, complex) and g3.imag == 0:
        g3 = g3.real
    disc = g2 ** 3 - 27 * g3 ** 2
    scale = max(abs(g2) ** 3, 27 * abs(g3) ** 2, 1e-300)
    if (is_exact(disc) and disc == 0) or abs(disc) <= 1e-12 * scale:
        raise DegenerateLatticeError(
            "g2^3 - 27 g3^2 = 0: the curve is singular; use the trigonometric "
            "(one period infinite) or rational (both infinite) family instead")
    e = half_period_values(g2, g3)
    ec = [complex(x) for x in e]
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    g2c, g3c = complex(g2), complex(g3)
    for i, j, k in perms:
        m = (ec[j] - ec[k]) / (ec[i] - ec[k])
        s = cmath.sqrt(ec[i] - ec[k])
        try:
            wa = ellipk(m) / s
            wb = 1j * ellipk(1 - m) / s
        except DomainError:
            continue
        if abs((wb / wa).imag) < 1e-12:
            continue
        h2, h3 = eisenstein_q_invariants(wa, wb)
        if abs(h2 - g2c) <= 1e-9 * max(1.0, abs(g2c)) and abs(h3 - g3c) <= 1e-9 * max(1.0, abs(g3c)):
            return _lattice_from_roles(g2, g3, e, wa, wb)
    raise DomainError("failed to compute periods for the given invariants")


def lattice_from_periods(omega1, omega2) -> Lattice:
    """Lattice with half-periods (omega1, omega2); e_i = wp(omega_i)."""
    w1, w2 = complex(omega1), complex(omega2)
    if w1 == 0 or w2 == 0:
        raise DomainError("half-periods must be nonzero")
    ratio = (w2 / w1).imag
    if abs(ratio) <= 1e-12 * abs(w2 / w1):
        raise DomainError("real period ratio: the periods do not span a lattice")
    if ratio < 0:
        raise DomainError("half-periods must satisfy Im(omega2/omega1) > 0")
    g2, g3 = eisenstein_q_invariants(w1, w2)
    g2, g3 = _snap(g2), _snap(g3)
    g2 = g2.real if g2.imag == 0 else g2
    g3 = g3.real if g3.imag == 0 else g3
    roots = _cubic_roots(g2, g3)
    prov = Lattice(w1, w2, g2, g3, tuple(roots))
    e = []
    for w in (w1, w2, w1 + w2):
        v = complex(wp_eval(prov, w))
        e.append(_snap(min(roots, key=lambda r: abs(r - v))))
    return Lattice(w1, w2, g2, g3, tuple(e))


def lattice_from_modulus(k) -> Lattice:
    """Lattice of wp(z) = e3 + 1/sn(z, k)^2: omega1 = K, omega2 = K + iK'."""
    k = float(k)
    if not 0 < k < 1:
        raise DomainError("modulus must satisfy 0 < k < 1")
    m = k * k
    K = ellipk(m).real
    Kp = ellipk(1 - m).real
    e = ((2 - m) / 3, (2 * m - 1) / 3, -(1 + m) / 3)
    g2 = 2 * sum(x * x for x in e)
    g3 = 4 * e[0] * e[1] * e[2]
    return Lattice(complex(K), complex(K, Kp), g2, g3, e)


# ---------------------------------------------------------------------------
# series

def wp_taylor(g2, p0, p1, order: int, base_point=0) -> LaurentSeries:
    """Taylor series of wp at a regular point from wp(z*) = p0, wp'(z*) = p1."""
    b = [p0, p1]
    for n in range(0, order - 1):
        s = 0
        for i in range(n + 1):
            s += b[i] * b[n - i]
        rhs = 6 * s - (g2 / 2 if n == 0 else 0)
        b.append(rhs / ((n + 2) * (n + 1)))
    return LaurentSeries.from_list(b[: order + 1], 0, order, base_point)


def _wp_pole_series(g2, g3, order: int) -> LaurentSeries:
    """Laurent series of wp at a lattice point through degree ``order``."""
    a = {-2: Fraction(1), -1: Fraction(0), 0: Fraction(0), 1: Fraction(0)}
    a[2] = g2 / 20
    a[3] = Fraction(0)
    a[4] = g3 / 28
    for k in range(5, order + 1):
        if k % 2:
            a[k] = Fraction(0)
            continue
        s = 0
        for i in range(0, k - 1):
            j = k - 2 - i
            if j < 0:
                break
            s += a[i] * a[j]
        a[k] = 6 * s / ((k - 4) * (k + 3))
    return LaurentSeries.from_dict({d: c for d, c in a.items() if d <= order}, order)


def wp_series(lat: Lattice, center=0, order: int = 64) -> LaurentSeries:
    """Expansion of wp about a half-period class, in the local variable t.

    Center 0 gives the Laurent series 1/t^2 + g2/20 t^2 + g3/28 t^4 + ...;
    center omega_i gives the even Taylor series seeded by (e_i, 0).
    """
    if order < 2:
        raise DomainError("order must be >= 2")
    idx = center_index(center)
    return _wp_series_cached(lat.g2, lat.g3, lat.e[idx - 1] if idx else None, order)


@lru_cache(maxsize=1024)
def _wp_series_cached(g2, g3, e, order):
    if e is None:
        return _wp_pole_series(g2, g3, order)
    zero = Fraction(0) if is_exact(e) else 0.0
    g2_ = g2 if is_exact(e) else complex(g2)
    return wp_taylor(g2_, e, zero, order)


# ---------------------------------------------------------------------------
# pointwise evaluation

_DOUBLING_RADIUS = 0.2


def _wp_small(lat, w):
    c = lat._pole_coeffs
    w2 = w * w
    p = np.zeros_like(w)
    dp = np.zeros_like(w)
    for j in range(len(c) - 1, -1, -1):
        p = p * w2 + c[j]
        dp = dp * w2 + 2 * (j + 1) * c[j]
    p = p * w2 + 1 / w2
    dp = dp * w - 2 / (w2 * w)
    return p, dp


def wp_eval_with_derivative(lat: Lattice, z):
    """(wp(z), wp'(z)) by lattice reduction, series evaluation and doubling."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    p1, p2 = lat.reduced_periods
    inv = lat._reduce_matrix
    xy = inv @ np.vstack([z.real, z.imag])
    zr = z - np.round(xy[0]) * p1 - np.round(xy[1]) * p2
    best = zr.copy()
    for a in (-1, 0, 1):
        for b in (-1, 0, 1):
            cand = zr + a * p1 + b * p2
            best = np.where(np.abs(cand) < np.abs(best), cand, best)
    zr = best
    R = abs(p1)
    if np.any(np.abs(zr) <= 1e-10 * R):
        raise PoleError("wp evaluated at a lattice point")
    ratio = np.max(np.abs(zr)) / (_DOUBLING_RADIUS * R)
    k = max(0, math.ceil(math.log2(ratio))) if ratio > 1 else 0
    w = zr / 2 ** k
    p, dp = _wp_small(lat, w)
    g2, g3 = complex(lat.g2), complex(lat.g3)
    for _ in range(k):
        num = p ** 4 + g2 / 2 * p ** 2 + 2 * g3 * p + g2 ** 2 / 16
        den = 4 * p ** 3 - g2 * p - g3
        dnum = 4 * p ** 3 + g2 * p + 2 * g3
        dden = 12 * p ** 2 - g2
        p, dp = num / den, dp * (dnum * den - num * dden) / (2 * den ** 2)
    if scalar:
        return complex(p[0]), complex(dp[0])
    return p, dp


def wp_eval(lat: Lattice, z):
    """Weierstrass wp(z); accepts scalars or numpy arrays."""
    return wp_eval_with_derivative(lat, z)[0]


def wp_prime_eval(lat: Lattice, z):
    return wp_eval_with_derivative(lat, z)[1]


# ---------------------------------------------------------------------------
# Jacobi elliptic functions

def _jacobi_real(x, m):
    """sn, cn, dn for real x and 0 <= m <= 1 by the descending Landen/AGM scheme."""
    x = np.asarray(x, dtype=float)
    if m == 0:
        return np.sin(x), np.cos(x), np.ones_like(x)
    if m == 1:
        sech = 1 / np.cosh(x)
        return np.tanh(x), sech, sech
    a = [1.0]
    c = [math.sqrt(m)]
    b = math.sqrt(1 - m)
    while abs(c[-1]) > 1e-17:
        an = a[-1]
        a.append((an + b) / 2)
        c.append((an - b) / 2)
        b = math.sqrt(an * b)
        if len(a) > 60:
            break
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * x
    prev = phi
    for j in range(n, 0, -1):
        prev = phi
        phi = (phi + np.arcsin(c[j] * np.sin(phi) / a[j])) / 2
    sn, cn = np.sin(phi), np.cos(phi)
    dn = cn / np.cos(prev - phi) if n > 0 else np.ones_like(x)
    return sn, cn, dn


def jacobi_eval(k, z):
    """(sn, cn, dn)(z, k) for real modulus 0 <= k <= 1 and complex z.

    Complex arguments use Jacobi's imaginary transformation with the
    complementary parameter 1 - k^2.
    """
    k = float(k)
    if not 0 <= k <= 1:
        raise DomainError("jacobi_eval supports real moduli 0 <= k <= 1")
    m = k * k
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    s, c, d = _jacobi_real(x, m)
    if not np.any(y):
        out = (s.astype(complex), c.astype(complex), d.astype(complex))
    else:
        s1, c1, d1 = _jacobi_real(y, 1 - m)
        den = c1 ** 2 + m * s ** 2 * s1 ** 2
        sn = (s * d1 + 1j * c * d * s1 * c1) / den
        cn = (c * c1 - 1j * s * d * s1 * d1) / den
        dn = (d * c1 * d1 - 1j * m * s * c * s1) / den
        out = (sn, cn, dn)
    if scalar:
        return tuple(complex(v) for v in out)
    return out
