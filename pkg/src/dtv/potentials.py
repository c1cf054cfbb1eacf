"""The potential families: elliptic (DTV), trigonometric, rational, multi-site trigonometric.

Every family is described by an immutable spec.  Pole classes are orbit
representatives: ``"0", "w1", "w2", "w3"`` for DTV (attached coefficients
alpha4, alpha1, alpha2, alpha3), ``"0"`` and ``"pi/2a"`` for Trig
(alpha1 on 1/sin^2, alpha2 on 1/cos^2), ``"0"`` for Rat and the site index
for TrigMulti.  ``shift`` translates the whole potential: u(z) = u0(z - shift).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from . import elliptic, scalars
from .elliptic import Lattice, center_index, jacobi_eval, wp_eval, wp_series
from .errors import DomainError, PoleError, TruncationError
from .scalars import is_exact, render_scalar
from .series import LaurentSeries, geometric_inverse_power

POLE_TOL = 1e-9


def triangular(m: int) -> int:
    return m * (m + 1)


def _zero_like(x):
    return Fraction(0) if is_exact(x) else 0.0


# ---------------------------------------------------------------------------
# specs

@dataclass(frozen=True)
class PotentialSpec:
    """Common base; use the concrete subclasses."""

    variant = "abstract"

    def pole_classes(self):
        raise NotImplementedError

    def attached(self, pole):
        raise NotImplementedError

    def pole_position(self, pole):
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError


@dataclass(frozen=True)
class DTV(PotentialSpec):
    """alpha4 wp(z) + sum_i alpha_i wp(z - omega_i) + alpha0 on ``lattice``."""

    lattice: Lattice
    alpha: tuple  # (alpha0, alpha1, alpha2, alpha3, alpha4)
    m: tuple = None  # (m0, m1, m2, m3) when the alphas are m(m+1)
    shift: object = Fraction(0)

    variant = "dtv"

    def __post_init__(self):
        if len(self.alpha) != 5:
            raise DomainError("DTV needs five coefficients alpha0..alpha4")
        object.__setattr__(self, "alpha", tuple(scalars.exact_or_none(a) if is_exact(a) else a
                                                for a in self.alpha))

    def pole_classes(self):
        return ["0", "w1", "w2", "w3"]

    def attached(self, pole):
        idx = center_index(pole)
        return self.alpha[4] if idx == 0 else self.alpha[idx]

    def class_coefficients(self):
        """Coefficient of wp(z - omega_j) for j = 0..3."""
        return (self.alpha[4], self.alpha[1], self.alpha[2], self.alpha[3])

    def pole_position(self, pole):
        return complex(self.shift) + self.lattice.half_periods[center_index(pole)]

    @property
    def exact(self):
        return (self.lattice.exact and all(is_exact(a) for a in self.alpha)
                and is_exact(self.shift))

    def to_json(self):
        doc = {
            "variant": "dtv",
            "lattice": self.lattice.to_json(),
            "alpha": [render_scalar(a) for a in self.alpha],
            "shift": render_scalar(self.shift),
        }
        if self.m is not None:
            doc["m"] = list(self.m)
        return doc


@dataclass(frozen=True)
class Trig(PotentialSpec):
    """alpha1 a^2/sin^2(az) + alpha2 a^2/cos^2(az) + alpha0."""

    a: object
    alpha: tuple  # (alpha0, alpha1, alpha2)
    m: tuple = None
    shift: object = Fraction(0)

    variant = "trig"

    def __post_init__(self):
        if len(self.alpha) != 3:
            raise DomainError("Trig needs coefficients alpha0, alpha1, alpha2")
        if self.a == 0:
            raise DomainError("Trig needs a != 0")

    def pole_classes(self):
        return ["0", "pi/2a"]

    def _idx(self, pole):
        if pole in (0, "0"):
            return 0
        if pole in (1, "pi/2a"):
            return 1
        raise DomainError(f"unknown trigonometric pole class {pole!r}")

    def attached(self, pole):
        return self.alpha[1 + self._idx(pole)]

    def pole_position(self, pole):
        return complex(self.shift) + self._idx(pole) * math.pi / (2 * complex(self.a))

    @property
    def period(self):
        return math.pi / complex(self.a)

    @property
    def exact(self):
        return all(is_exact(x) for x in (self.a, *self.alpha, self.shift))

    def to_json(self):
        doc = {"variant": "trig", "a": render_scalar(self.a),
               "alpha": [render_scalar(a) for a in self.alpha],
               "shift": render_scalar(self.shift)}
        if self.m is not None:
            doc["m"] = list(self.m)
        return doc


@dataclass(frozen=True)
class Rat(PotentialSpec):
    """alpha1 / z^2 + alpha0."""

    alpha: tuple  # (alpha0, alpha1)
    m: int = None
    shift: object = Fraction(0)

    variant = "rat"

    def __post_init__(self):
        if len(self.alpha) != 2:
            raise DomainError("Rat needs coefficients alpha0, alpha1")

    def pole_classes(self):
        return ["0"]

    def attached(self, pole):
        if pole not in (0, "0"):
            raise DomainError(f"unknown rational pole class {pole!r}")
        return self.alpha[1]

    def pole_position(self, pole):
        return complex(self.shift)

    @property
    def exact(self):
        return all(is_exact(x) for x in (*self.alpha, self.shift))

    def to_json(self):
        doc = {"variant": "rat", "alpha": [render_scalar(a) for a in self.alpha],
               "shift": render_scalar(self.shift)}
        if self.m is not None:
            doc["m"] = self.m
        return doc


@dataclass(frozen=True)
class TrigMulti(PotentialSpec):
    """sum_i m_i(m_i+1) a^2 / sin^2(a(z - z_i)) + const."""

    a: object
    sites: tuple
    m: tuple
    const: object = Fraction(0)

    variant = "trig_multi"

    def __post_init__(self):
        if len(self.sites) != len(self.m):
            raise DomainError("one integer label per site is required")
        if any(int(mi) < 0 for mi in self.m):
            raise DomainError("labels must be nonnegative")
        period = math.pi / complex(self.a)
        for i, zi in enumerate(self.sites):
            for zj in self.sites[:i]:
                r = (complex(zi) - complex(zj)) / period
                if abs(r.imag) < 1e-12 and abs(r.real - round(r.real)) < 1e-12:
                    raise DomainError("sites must be distinct modulo pi/a")

    def pole_classes(self):
        return list(range(len(self.sites)))

    def attached(self, pole):
        return Fraction(triangular(int(self.m[int(pole)])))

    def pole_position(self, pole):
        return complex(self.sites[int(pole)])

    @property
    def exact(self):
        return False

    def to_json(self):
        return {"variant": "trig_multi", "a": render_scalar(self.a),
                "sites": [render_scalar(s) for s in self.sites],
                "m": [int(x) for x in self.m], "const": render_scalar(self.const)}


def spec_from_json(doc) -> PotentialSpec:
    """Inverse of ``spec.to_json()``; lattices may be given by g2/g3 only."""
    p = scalars.parse_scalar
    try:
        variant = doc["variant"]
        if variant == "dtv":
            lat = Lattice.from_json(doc["lattice"])
            return DTV(lat, tuple(p(a) for a in doc["alpha"]),
                       tuple(doc["m"]) if doc.get("m") is not None else None,
                       p(doc.get("shift", "0")))
        if variant == "trig":
            return Trig(p(doc["a"]), tuple(p(a) for a in doc["alpha"]),
                        tuple(doc["m"]) if doc.get("m") is not None else None,
                        p(doc.get("shift", "0")))
        if variant == "rat":
            return Rat(tuple(p(a) for a in doc["alpha"]), doc.get("m"),
                       p(doc.get("shift", "0")))
        if variant == "trig_multi":
            return TrigMulti(p(doc["a"]), tuple(p(s) for s in doc["sites"]),
                             tuple(int(x) for x in doc["m"]), p(doc.get("const", "0")))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed potential document: {exc}") from exc
    raise DomainError(f"unknown potential variant {doc.get('variant')!r}")


# ---------------------------------------------------------------------------
# constructors

def dtv_build(m, lat: Lattice, alpha0=Fraction(0)) -> DTV:
    """DTV potential with alpha_i = m_i(m_i + 1); ``m = (m0, m1, m2, m3)``."""
    m = tuple(int(x) for x in m)
    if len(m) != 4:
        raise DomainError("four integer labels m0..m3 are required")
    if any(x < 0 for x in m):
        raise DomainError("labels must be >= 0 (replace m by -m-1 first)")
    m0, m1, m2, m3 = m
    alpha = (alpha0, Fraction(triangular(m1)), Fraction(triangular(m2)),
             Fraction(triangular(m3)), Fraction(triangular(m0)))
    return DTV(lat, alpha, m)


def trig_build(m1: int, m2: int, a=Fraction(1), alpha0=Fraction(0)) -> Trig:
    """Poeschl-Teller potential m1(m1+1)a^2/sin^2 + m2(m2+1)a^2/cos^2."""
    if m1 < 0 or m2 < 0:
        raise DomainError("labels must be >= 0")
    return Trig(a, (alpha0, Fraction(triangular(m1)), Fraction(triangular(m2))), (m1, m2))


def rat_build(m: int, alpha0=Fraction(0)) -> Rat:
    if m < 0:
        raise DomainError("label must be >= 0")
    return Rat((alpha0, Fraction(triangular(m))), m)


def jacobi_potential(m, k, z):
    """The Jacobi-form potential

    m0(m0+1)/sn^2 + m1(m1+1) dn^2/cn^2 + m2(m2+1) k^2 cn^2/dn^2 + m3(m3+1) k^2 sn^2
    """
    sn, cn, dn = jacobi_eval(k, z)
    k2 = float(k) ** 2
    t = [triangular(int(x)) for x in m]
    out = 0
    if t[0]:
        out = out + t[0] / sn ** 2
    if t[1]:
        out = out + t[1] * dn ** 2 / cn ** 2
    if t[2]:
        out = out + t[2] * k2 * cn ** 2 / dn ** 2
    if t[3]:
        out = out + t[3] * k2 * sn ** 2
    return out + 0 * sn


def jacobi_to_weierstrass(m, k):
    """Weierstrass form of the Jacobi-form potential with labels ``m``.

    The identification is wp(z) = e3 + 1/sn^2(z, k) with e1 - e3 = 1, so the
    change of variable is the identity and the four Jacobi terms are
    wp(z - omega_j) - e3 for omega_0 = 0, omega_1 = K, omega_2 = K + iK',
    omega_3 = iK' (mod periods).  Returns ``(spec, lambda_shift)`` with
    jacobi_potential(z) = potential_eval(spec, z) + lambda_shift.
    """
    k = float(k)
    if not 0 < k < 1:
        raise DomainError("modulus must satisfy 0 < k < 1")
    lat = elliptic.lattice_from_modulus(k)
    spec = dtv_build(m, lat)
    total = sum(spec.alpha[1:])
    shift = -lat.e[2] * float(total)
    return spec, (0.0 if total == 0 else shift)


def jacobi_weierstrass_discrepancy(m, k, points):
    """Max |jacobi_potential - (potential_eval + lambda_shift)| over ``points``."""
    spec, lam = jacobi_to_weierstrass(m, k)
    pts = np.asarray(points, dtype=complex)
    return float(np.max(np.abs(jacobi_potential(m, k, pts) - (potential_eval(spec, pts) + lam))))


# ---------------------------------------------------------------------------
# local expansions

def sin_series(a, order, base=0):
    vals = {}
    exact = is_exact(a)
    for j in range((order + 1) // 2 + 1):
        d = 2 * j + 1
        if d > order:
            break
        c = (-1) ** j * a ** d
        vals[d] = c / factorial(d) if exact else complex(c) / factorial(d)
    return LaurentSeries.from_dict(vals, order, base)


def cos_series(a, order, base=0):
    vals = {}
    exact = is_exact(a)
    for j in range(order // 2 + 1):
        d = 2 * j
        c = (-1) ** j * a ** d
        vals[d] = c / factorial(d) if exact else complex(c) / factorial(d)
    return LaurentSeries.from_dict(vals, order, base)


@lru_cache(maxsize=256)
def csc2_series(a, order, base=0):
    """Laurent series of a^2 / sin^2(a t) through degree ``order``."""
    s = sin_series(a, order + 4, base)
    a2 = LaurentSeries.constant(a * a, order + 4, base)
    return (a2 / (s * s)).truncate(order)


@lru_cache(maxsize=256)
def sec2_series(a, order, base=0):
    """Taylor series of a^2 / cos^2(a t) through degree ``order``."""
    c = cos_series(a, order + 2, base)
    a2 = LaurentSeries.constant(a * a, order + 2, base)
    return (a2 / (c * c)).truncate(order)


def _shifted_csc2(a, delta, order, base):
    """Taylor series of a^2 / sin^2(a (delta + t)) at a regular point."""
    a = complex(a)
    sd, cd = cmath.sin(a * delta), cmath.cos(a * delta)
    if abs(sd) < POLE_TOL:
        raise PoleError("expansion point coincides with a 1/sin^2 pole")
    s = sin_series(a, order + 2, base) * cd + cos_series(a, order + 2, base) * sd
    a2 = LaurentSeries.constant(a * a, order + 2, base)
    return (a2 / (s * s)).truncate(order)


def _quarter_series(a, order, sign, base):
    """a^2 / sin^2(pi/4 + a t) (sign=+1) or a^2 / cos^2(pi/4 + a t) (sign=-1).

    Uses sin^2(pi/4 + x) = (1 + sin 2x)/2, exact whenever ``a`` is rational.
    """
    s2 = sin_series(2 * a, order + 1, base)
    den = LaurentSeries.constant(1, order + 1, base) + s2 * sign
    num = LaurentSeries.constant(2 * a * a, order + 1, base)
    return (num / den).truncate(order)


def _relabel(series: LaurentSeries, base):
    return LaurentSeries(base, series.min_degree, series.coeffs, series.trunc_order)


def _dtv_local(spec: DTV, idx: int, order: int, base):
    lat = spec.lattice
    total = LaurentSeries.constant(spec.alpha[0], order)
    for j, coef in enumerate(spec.class_coefficients()):
        if coef == 0:
            continue
        total = total + wp_series(lat, idx ^ j, order) * coef
    return _relabel(total.truncate(order), base)


def potential_series_at_pole(spec: PotentialSpec, pole, order: int = 64) -> LaurentSeries:
    """Local expansion in t = z - pole_position(pole) through degree ``order``."""
    if order < 2:
        raise TruncationError("expansion order must be at least 2", 2)
    if isinstance(spec, DTV):
        idx = center_index(pole)
        base = spec.shift if idx == 0 else spec.pole_position(pole)
        return _dtv_local(spec, idx, order, base)
    if isinstance(spec, Trig):
        i = spec._idx(pole)
        base = spec.shift if i == 0 else spec.pole_position(pole)
        sing, reg = csc2_series(spec.a, order), sec2_series(spec.a, order)
        if i == 1:
            sing, reg = reg, sing
        total = sing * spec.alpha[1] + reg * spec.alpha[2] + spec.alpha[0]
        return _relabel(total, base)
    if isinstance(spec, Rat):
        s = LaurentSeries.from_dict({-2: spec.alpha[1], 0: spec.alpha[0]}, order)
        return _relabel(s, spec.shift)
    if isinstance(spec, TrigMulti):
        j = int(pole)
        zj = complex(spec.sites[j])
        total = LaurentSeries.constant(spec.const, order)
        for i, (zi, mi) in enumerate(zip(spec.sites, spec.m)):
            t = triangular(int(mi))
            if t == 0:
                continue
            if i == j:
                term = csc2_series(complex(spec.a), order)
            else:
                term = _shifted_csc2(spec.a, zj - complex(zi), order, 0)
            total = total + term * t
        return _relabel(total, zj)
    raise DomainError(f"unsupported potential {type(spec).__name__}")


def default_base_point(spec: PotentialSpec, prefer_exact: bool = True):
    """Deterministic regular expansion point.

    Exact DTV specs with a zero-coefficient half-period class use that class
    (all its Taylor coefficients are rational) unless ``prefer_exact`` is
    off; Trig uses the quarter point pi/(4a); Rat uses shift + 1; otherwise
    (omega1 + omega2)/5 + shift.
    """
    if isinstance(spec, DTV):
        if spec.exact and prefer_exact:
            for idx in (1, 2, 3, 0):
                if spec.class_coefficients()[idx] == 0:
                    return ["0", "w1", "w2", "w3"][idx]
        return complex(spec.shift) + (spec.lattice.omega1 + spec.lattice.omega2) / 5
    if isinstance(spec, Trig):
        return "quarter"
    if isinstance(spec, Rat):
        return spec.shift + 1
    if isinstance(spec, TrigMulti):
        period = math.pi / complex(spec.a)
        z0 = complex(spec.sites[0])
        best, dist = None, -1.0
        for k in range(1, 12):
            cand = z0 + period * k / 12
            d = min(_dist_mod(cand - complex(zi), period) for zi in spec.sites)
            if d > dist:
                best, dist = cand, d
        return best
    raise DomainError(f"unsupported potential {type(spec).__name__}")


def _dist_mod(w, period):
    r = w / period
    r = r - round(r.real)
    return abs(r * period)


def potential_series_at(spec: PotentialSpec, point, order: int = 64) -> LaurentSeries:
    """Taylor series at a regular point (number or class label) in t = z - point."""
    if isinstance(point, str) and isinstance(spec, DTV):
        idx = center_index(point)
        if spec.class_coefficients()[idx] != 0:
            raise PoleError(f"{point} is a pole of the potential")
        return potential_series_at_pole(spec, point, order)
    if isinstance(spec, Trig) and point == "quarter":
        base = complex(spec.shift) + math.pi / (4 * complex(spec.a))
        sq = _quarter_series(spec.a, order, 1, 0)
        cq = _quarter_series(spec.a, order, -1, 0)
        total = sq * spec.alpha[1] + cq * spec.alpha[2] + spec.alpha[0]
        return _relabel(total, base)
    if isinstance(point, str):
        raise DomainError(f"unknown expansion point {point!r}")
    if isinstance(spec, DTV):
        lat = spec.lattice
        zc = complex(point)
        total = LaurentSeries.constant(spec.alpha[0], order, point)
        for j, coef in enumerate(spec.class_coefficients()):
            if coef == 0:
                continue
            w = zc - complex(spec.shift) - lat.half_periods[j]
            p0, p1 = elliptic.wp_eval_with_derivative(lat, w)
            total = total + elliptic.wp_taylor(complex(lat.g2), p0, p1, order, point) * coef
        return total
    if isinstance(spec, Trig):
        d = point - spec.shift
        total = LaurentSeries.constant(spec.alpha[0], order, point)
        if spec.alpha[1] != 0:
            total = total + _relabel(_shifted_csc2(spec.a, complex(d), order, 0), point) * spec.alpha[1]
        if spec.alpha[2] != 0:
            d2 = complex(d) + math.pi / (2 * complex(spec.a))
            total = total + _relabel(_shifted_csc2(spec.a, d2, order, 0), point) * spec.alpha[2]
        return total
    if isinstance(spec, Rat):
        s = geometric_inverse_power(2, spec.shift, point, order, spec.alpha[1])
        return s + spec.alpha[0]
    if isinstance(spec, TrigMulti):
        total = LaurentSeries.constant(spec.const, order, point)
        for zi, mi in zip(spec.sites, spec.m):
            t = triangular(int(mi))
            if t:
                total = total + _relabel(
                    _shifted_csc2(spec.a, complex(point) - complex(zi), order, 0), point) * t
        return total
    raise DomainError(f"unsupported potential {type(spec).__name__}")


# ---------------------------------------------------------------------------
# evaluation

def potential_eval(spec: PotentialSpec, z):
    """Pointwise value; accepts scalars or numpy arrays."""
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if isinstance(spec, DTV):
        w = zz - complex(spec.shift)
        out = np.full(zz.shape, complex(spec.alpha[0]))
        for j, coef in enumerate(spec.class_coefficients()):
            if coef != 0:
                out = out + complex(coef) * wp_eval(spec.lattice, w - spec.lattice.half_periods[j])
    elif isinstance(spec, Trig):
        a = complex(spec.a)
        x = a * (zz - complex(spec.shift))
        out = np.full(zz.shape, complex(spec.alpha[0]))
        if spec.alpha[1] != 0:
            s = np.sin(x)
            if np.any(np.abs(s) < POLE_TOL):
                raise PoleError("evaluation at a 1/sin^2 pole")
            out = out + complex(spec.alpha[1]) * a * a / s ** 2
        if spec.alpha[2] != 0:
            c = np.cos(x)
            if np.any(np.abs(c) < POLE_TOL):
                raise PoleError("evaluation at a 1/cos^2 pole")
            out = out + complex(spec.alpha[2]) * a * a / c ** 2
    elif isinstance(spec, Rat):
        w = zz - complex(spec.shift)
        out = np.full(zz.shape, complex(spec.alpha[0]))
        if spec.alpha[1] != 0:
            if np.any(np.abs(w) < POLE_TOL):
                raise PoleError("evaluation at the rational pole")
            out = out + complex(spec.alpha[1]) / w ** 2
    elif isinstance(spec, TrigMulti):
        a = complex(spec.a)
        out = np.full(zz.shape, complex(spec.const))
        for zi, mi in zip(spec.sites, spec.m):
            t = triangular(int(mi))
            if t:
                s = np.sin(a * (zz - complex(zi)))
                if np.any(np.abs(s) < POLE_TOL):
                    raise PoleError("evaluation at a multi-site pole")
                out = out + t * a * a / s ** 2
    else:
        raise DomainError(f"unsupported potential {type(spec).__name__}")
    return complex(out[0]) if scalar else out


def is_pole(spec: PotentialSpec, z, tol=POLE_TOL) -> bool:
    """Whether ``z`` belongs to the singular set of ``spec``."""
    z = complex(z)
    if isinstance(spec, DTV):
        lat = spec.lattice
        p1, p2 = lat.reduced_periods
        for j, coef in enumerate(spec.class_coefficients()):
            if coef == 0:
                continue
            w = z - complex(spec.shift) - lat.half_periods[j]
            x, y = lat._reduce_matrix @ np.array([w.real, w.imag])
            if abs(x - round(x)) < tol and abs(y - round(y)) < tol:
                return True
        return False
    if isinstance(spec, Trig):
        period = spec.period
        for i, coef in enumerate(spec.alpha[1:]):
            if coef == 0:
                continue
            r = (z - spec.pole_position(i)) / period
            if abs(r.imag) < tol and abs(r.real - round(r.real)) < tol:
                return True
        return False
    if isinstance(spec, Rat):
        return spec.alpha[1] != 0 and abs(z - complex(spec.shift)) < tol
    if isinstance(spec, TrigMulti):
        period = math.pi / complex(spec.a)
        for zi, mi in zip(spec.sites, spec.m):
            if mi == 0:
                continue
            r = (z - complex(zi)) / period
            if abs(r.imag) < tol and abs(r.real - round(r.real)) < tol:
                return True
        return False
    raise DomainError(f"unsupported potential {type(spec).__name__}")


# ---------------------------------------------------------------------------

def degenerate(spec: DTV, direction: str) -> PotentialSpec:
    """Limit of a DTV potential when one or both periods go to infinity.

    ``one_period`` keeps omega1 finite (a = pi/(2 omega1)): wp(z) tends to
    a^2/sin^2(az) - a^2/3, wp(z - omega1) to a^2/cos^2(az) - a^2/3 and the
    terms at omega2, omega3 to the constant -a^2/3.  ``both_periods`` keeps
    only the 1/z^2 part of the z = 0 term.
    """
    if not isinstance(spec, DTV):
        raise DomainError("degenerate() expects a DTV spec")
    if spec.m is None:
        raise DomainError("degenerate() expects a DTV spec with integer labels")
    a0, a1, a2, a3, a4 = spec.alpha
    if direction == "both_periods":
        return Rat((a0, a4), spec.m[0], spec.shift)
    if direction == "one_period":
        a = math.pi / (2 * complex(spec.lattice.omega1))
        a = a.real if a.imag == 0 else a
        const = complex(a0) - (a * a / 3) * complex(a1 + a2 + a3 + a4)
        const = const.real if const.imag == 0 else const
        return Trig(a, (const, a4, a1), (spec.m[0], spec.m[1]), spec.shift)
    raise DomainError("direction must be 'one_period' or 'both_periods'")


def with_alpha(spec: PotentialSpec, index: int, value) -> PotentialSpec:
    """Copy of ``spec`` with alpha[index] replaced (integer labels dropped)."""
    alpha = list(spec.alpha)
    alpha[index] = value
    return replace(spec, alpha=tuple(alpha), m=None)
