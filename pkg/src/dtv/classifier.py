"""Singular sets symmetric about each of their points.

A finite generating set {z_0, ..., z_k} determines the smallest shifted
lattice z_0 + Lambda containing it, Lambda being the additive group
generated by z_i - z_0.  Every reflection z -> 2p - z about a point of the
set maps it into itself.  Depending on Lambda we get a single point, a
one-dimensional lattice, a two-dimensional lattice, or a dense set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from . import elliptic
from .errors import DomainError
from .potentials import DTV, Rat, Trig
from .reduction import gauss_reduce, integer_hnf_rows
from .scalars import GaussianRational, is_exact, render_scalar

CUTOFF = 10 ** 6
RANK_TOL = 1e-9
MEMBER_TOL = 1e-9

TAGS = ("Rational", "Trigonometric", "Elliptic", "NonDiscrete")


@dataclass(frozen=True)
class SingularClass:
    tag: str
    z0: object = None
    omega: object = None  # Trigonometric step
    omega1: object = None  # Elliptic reduced basis
    omega2: object = None
    cutoff_hit: bool = False
    cutoff: int = CUTOFF

    def __post_init__(self):
        if self.tag not in TAGS:
            raise DomainError(f"unknown class tag {self.tag!r}")
        if self.tag == "Trigonometric" and self.omega == 0:
            raise DomainError("a one-dimensional lattice needs omega != 0")
        if self.tag == "Elliptic":
            r = complex(self.omega2) / complex(self.omega1)
            if abs(r.imag) <= RANK_TOL * abs(r):
                raise DomainError("omega1/omega2 must not be real")

    def to_json(self):
        doc = {"tag": self.tag, "commensurability_cutoff_hit": self.cutoff_hit,
               "cutoff": self.cutoff}
        if self.z0 is not None:
            doc["z0"] = render_scalar(self.z0)
        if self.tag == "Trigonometric":
            doc["omega"] = render_scalar(self.omega)
        if self.tag == "Elliptic":
            doc["omega1"] = render_scalar(self.omega1)
            doc["omega2"] = render_scalar(self.omega2)
        return doc

    def contains(self, z, tol=MEMBER_TOL) -> bool:
        """Membership of ``z`` in the described singular set."""
        if self.tag == "NonDiscrete":
            raise DomainError("a non-discrete set has no membership test")
        w = complex(z) - complex(self.z0)
        if self.tag == "Rational":
            return abs(w) <= tol * max(1.0, abs(complex(self.z0)))
        if self.tag == "Trigonometric":
            r = w / complex(self.omega)
            return abs(r.imag) <= tol * max(1.0, abs(r)) and abs(r.real - round(r.real)) <= tol * max(1.0, abs(r))
        x, y = _coords(w, complex(self.omega1), complex(self.omega2))
        s = max(1.0, abs(x), abs(y))
        return abs(x - round(x)) <= tol * s and abs(y - round(y)) <= tol * s


def _coords(w, b1, b2):
    m = np.array([[b1.real, b2.real], [b1.imag, b2.imag]])
    x, y = np.linalg.solve(m, np.array([w.real, w.imag]))
    return float(x), float(y)


# ---------------------------------------------------------------------------
# rationalization

def rationalize(x: float, cutoff: int = CUTOFF):
    """Continued-fraction reading p/q of ``x``; None if the denominator passes ``cutoff``.

    The expansion stops when a partial quotient exceeds ``cutoff``: such a
    tiny remainder is read as rounding noise.  Float inputs that are ratios
    of small integers (denominators up to about 1e4) are recovered reliably.
    """
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    r = x
    for _ in range(96):
        a = math.floor(r)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > cutoff:
            return None
        frac = r - a
        if frac == 0 or 1 / frac > cutoff:
            return Fraction(h1, k1)
        r = 1 / frac
    return None


def _lcm(a, b):
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------

def _as_pair(z):
    """(re, im) as exact Fractions when possible, else floats."""
    if isinstance(z, GaussianRational):
        return (z.re, z.im)
    if isinstance(z, (int, Fraction)):
        return (Fraction(z), Fraction(0))
    z = complex(z)
    return (z.real, z.imag)


def _to_complex_exact(pair):
    re, im = pair
    if is_exact(re) and is_exact(im):
        return re if im == 0 else GaussianRational(re, im)
    return complex(re, im)


def _orient(w):
    """Sign convention for a one-dimensional step: Re > 0, or Re == 0 and Im > 0."""
    re, im = _as_pair(w)
    if re < 0 or (re == 0 and im < 0):
        return -w
    return w


def _orient_pair(b1, b2):
    """Reduced basis with Im(b2/b1) > 0."""
    c1, c2 = complex(b1), complex(b2)
    if (c2 / c1).imag < 0:
        return b1, -b2
    return b1, b2


def _exact_class(z0, gens):
    """All generators in Q(i): rank and lattice are decided exactly."""
    den = 1
    for re, im in gens:
        den = _lcm(den, _lcm(re.denominator, im.denominator))
    rows = [[int(re * den), int(im * den)] for re, im in gens]
    basis = integer_hnf_rows(rows)
    if not basis:
        return SingularClass("Rational", z0)
    if len(basis) == 1:
        re, im = basis[0]
        step = _to_complex_exact((Fraction(re, den), Fraction(im, den)))
        return SingularClass("Trigonometric", z0, omega=_orient(step))
    u = tuple(Fraction(x, den) for x in basis[0])
    v = tuple(Fraction(x, den) for x in basis[1])
    b1, b2 = gauss_reduce(u, v)
    w1, w2 = _orient_pair(_to_complex_exact(b1), _to_complex_exact(b2))
    return SingularClass("Elliptic", z0, omega1=w1, omega2=w2)


def _float_class(z0, gens, cutoff, tol):
    vecs = np.array([[float(re), float(im)] for re, im in gens])
    norms = np.hypot(vecs[:, 0], vecs[:, 1])
    scale = norms.max()
    s = np.linalg.svd(vecs / scale, compute_uv=False)
    rank = int(np.sum(s > tol))
    if rank == 0:
        return SingularClass("Rational", z0)
    if rank == 1:
        ref = complex(*vecs[int(np.argmax(norms))])
        step = ref
        for x, y in vecs:
            t = complex(x, y) / step
            if abs(t) <= tol:
                continue
            q = rationalize(t.real, cutoff)
            if q is None:
                return SingularClass("NonDiscrete", z0, cutoff_hit=True, cutoff=cutoff)
            # <step, step * p/q> = (step/q) Z for p/q in lowest terms
            step = step / q.denominator
        return SingularClass("Trigonometric", z0, omega=_orient(_snap(step)), cutoff=cutoff)
    # rank 2: express every generator in the best-conditioned pair
    best, pair = -1.0, (0, 1)
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            d = abs(np.linalg.det(vecs[[i, j]] / scale))
            if d > best:
                best, pair = d, (i, j)
    b = vecs[list(pair)].T
    den = 1
    fracs = []
    for x, y in vecs:
        cx, cy = np.linalg.solve(b, np.array([x, y]))
        qx, qy = rationalize(float(cx), cutoff), rationalize(float(cy), cutoff)
        if qx is None or qy is None:
            return SingularClass("NonDiscrete", z0, cutoff_hit=True, cutoff=cutoff)
        fracs.append((qx, qy))
        den = _lcm(den, _lcm(qx.denominator, qy.denominator))
        if den > cutoff:
            return SingularClass("NonDiscrete", z0, cutoff_hit=True, cutoff=cutoff)
    rows = [[int(fx * den), int(fy * den)] for fx, fy in fracs]
    basis = integer_hnf_rows(rows)
    e1 = complex(*b[:, 0])
    e2 = complex(*b[:, 1])
    lat = [(r[0] * e1 + r[1] * e2) / den for r in basis]
    u, v = gauss_reduce((lat[0].real, lat[0].imag), (lat[1].real, lat[1].imag))
    w1, w2 = _orient_pair(_snap(complex(*u)), _snap(complex(*v)))
    return SingularClass("Elliptic", z0, omega1=w1, omega2=w2, cutoff=cutoff)


def _snap(z, eps=1e-14):
    z = complex(z)
    s = max(abs(z), 1e-300)
    re = 0.0 if abs(z.real) < eps * s else z.real
    im = 0.0 if abs(z.imag) < eps * s else z.imag
    return complex(re, im)


def classify_singular_set(points, cutoff: int = CUTOFF, tol: float = RANK_TOL) -> SingularClass:
    """Classify the smallest shifted lattice containing ``points``."""
    pts = list(points)
    if not pts:
        raise DomainError("at least one point is required")
    pairs = [_as_pair(p) for p in pts]
    if len(set(pairs)) != len(pairs):
        raise DomainError("points must be pairwise distinct")
    z0 = pts[0]
    exact = all(is_exact(x) for pair in pairs for x in pair)
    gens = [(re - pairs[0][0], im - pairs[0][1]) for re, im in pairs[1:]]
    if exact:
        z0 = _to_complex_exact(pairs[0])
        return _exact_class(z0, gens) if gens else SingularClass("Rational", z0)
    z0 = complex(z0)
    if not gens:
        return SingularClass("Rational", z0, cutoff=cutoff)
    spread = max(math.hypot(re, im) for re, im in gens)
    if spread <= tol * max(1.0, abs(z0)):
        raise DomainError("points must be pairwise distinct")
    return _float_class(z0, gens, cutoff, tol)


def reflection_closure(points, depth: int = 3):
    """Breadth-first closure under z -> 2p - z, ``depth`` rounds (an explicit oracle)."""
    cur = {_key(p): p for p in points}
    for _ in range(depth):
        vals = list(cur.values())
        new = dict(cur)
        for p in vals:
            for q in vals:
                r = 2 * p - q
                new.setdefault(_key(r), r)
        cur = new
    return list(cur.values())


def _key(z):
    if is_exact(z):
        return _as_pair(z)
    z = complex(z)
    return (round(z.real, 9), round(z.imag, 9))


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyTemplate:
    """Maximal family attached to a singular class; ``spec`` has unit coefficients."""

    family: str
    parameters: tuple
    spec: object

    def instantiate(self, alpha):
        """Spec of the family with the given coefficients (ordered as ``parameters``)."""
        alpha = tuple(alpha)
        if len(alpha) != len(self.parameters):
            raise DomainError(f"{self.family} template takes {len(self.parameters)} coefficients")
        return type(self.spec)(**{**self.spec.__dict__, "alpha": alpha, "m": None})

    def to_json(self):
        doc = {"family": self.family, "parameters": list(self.parameters),
               "spec": self.spec.to_json()}
        return doc


def family_template(cls: SingularClass) -> FamilyTemplate:
    """Rational, trigonometric or elliptic template whose pole set is the class's set.

    Trigonometric: the two reflection orbits z0 + 2k omega and
    z0 + (2k + 1) omega carry 1/sin^2 and 1/cos^2 with a = pi / (2 omega).
    Elliptic: omega1, omega2 become the half-periods, so the four orbits
    are the classes 0, omega1, omega2, omega3.
    """
    one = Fraction(1)
    if cls.tag == "NonDiscrete":
        raise DomainError("a non-discrete singular set admits no finite-gap family")
    if cls.tag == "Rational":
        return FamilyTemplate("rat", ("alpha0", "alpha1"), Rat((one, one), None, cls.z0))
    if cls.tag == "Trigonometric":
        w = cls.omega
        a = math.pi / (2 * complex(w))
        a = a.real if a.imag == 0 else a
        return FamilyTemplate("trig", ("alpha0", "alpha1", "alpha2"),
                              Trig(a, (one, one, one), None, cls.z0))
    lat = elliptic.lattice_from_periods(complex(cls.omega1), complex(cls.omega2))
    return FamilyTemplate("dtv", ("alpha0", "alpha1", "alpha2", "alpha3", "alpha4"),
                          DTV(lat, (one,) * 5, None, cls.z0))


def sample_singular_points(cls: SingularClass, radius: int = 2):
    """Points z0 + k1 w1 + k2 w2 (or z0 + k w) with |k| <= radius."""
    z0 = complex(cls.z0)
    if cls.tag == "Rational":
        return [z0]
    if cls.tag == "Trigonometric":
        return [z0 + k * complex(cls.omega) for k in range(-radius, radius + 1)]
    if cls.tag == "Elliptic":
        w1, w2 = complex(cls.omega1), complex(cls.omega2)
        return [z0 + i * w1 + j * w2 for i in range(-radius, radius + 1)
                for j in range(-radius, radius + 1)]
    raise DomainError("a non-discrete class has no point samples")
