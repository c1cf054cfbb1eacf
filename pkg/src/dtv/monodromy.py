"""Trivial-monodromy certification at second-order poles.

``dg_check`` tests the Laurent-coefficient conditions c_{-2} = m(m+1) and
c_{2k-1} = 0 (k = 1..m); ``frobenius_solve`` builds the local solutions of
-phi'' + (u - lambda) phi = 0 and reports whether a logarithm is forced at
the resonant step.  The two must agree for generic lambda.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import potentials, scalars
from .errors import DomainError, MalformedPoleError, TruncationError
from .potentials import PotentialSpec
from .scalars import DEFAULT_EPS, is_exact, render_scalar
from .series import LaurentSeries

TRIANGULAR_TOL = 1e-8
VERDICTS = ("trivial", "fails_triangular", "fails_odd_coefficient")


@dataclass(frozen=True)
class PoleVerdict:
    pole: object
    c_minus2: object
    m: int | None
    odd_residuals: tuple  # ((k, c_{2k-1}), ...)
    verdict: str
    pole_class: object = None

    @property
    def trivial(self) -> bool:
        return self.verdict == "trivial"

    def to_json(self):
        return {
            "pole": render_scalar(self.pole),
            "pole_class": None if self.pole_class is None else str(self.pole_class),
            "c_minus2": render_scalar(self.c_minus2),
            "m": self.m,
            "odd_residuals": [[k, render_scalar(c)] for k, c in self.odd_residuals],
            "max_residual": max((float(abs(c)) for _, c in self.odd_residuals), default=0.0),
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class MonodromyReport:
    spec: PotentialSpec
    verdicts: tuple
    overall: bool
    seed: int = 0
    mode: str = "exact"

    def to_json(self):
        return {
            "spec": self.spec.to_json(),
            "verdicts": [v.to_json() for v in self.verdicts],
            "overall": self.overall,
            "seed": self.seed,
            "mode": self.mode,
        }


@dataclass(frozen=True)
class FrobeniusBasis:
    """Local solutions phi = z^{-mu} (1 + sum xi_i z^i) at a regular singular point.

    ``xi`` holds the normalized power series 1 + xi_1 z + ...; when both
    exponents are integers ``solutions`` holds the actual Laurent series.
    ``obstruction`` is the coefficient that must vanish at the resonant step
    (None if there is no resonance).
    """

    exponents: tuple
    xi: tuple
    log_required: bool
    obstruction: object = None
    resonance: int | None = None
    solutions: tuple = field(default=())


# ---------------------------------------------------------------------------

def triangular_root(c):
    """Nonnegative integer m with m(m+1) = c, or None.

    Exact inputs are decided exactly; floats accept m when |m - round(m)| <=
    1e-8 and re-verify with the rounded integer.
    """
    if is_exact(c):
        if isinstance(c, scalars.GaussianRational):
            if c.im != 0:
                return None
            c = c.re
        c = Fraction(c)
        r = scalars.fraction_sqrt(1 + 4 * c)
        if r is None:
            return None
        m = (r - 1) / 2
        if m.denominator != 1 or m < 0:
            return None
        return int(m)
    c = complex(c)
    scale = max(1.0, abs(c))
    if abs(c.imag) > TRIANGULAR_TOL * scale:
        return None
    disc = 1 + 4 * c.real
    if disc < 0:
        return None
    m = (-1 + math.sqrt(disc)) / 2
    mi = round(m)
    if mi < 0 or abs(m - mi) > TRIANGULAR_TOL:
        return None
    if abs(mi * (mi + 1) - c) > TRIANGULAR_TOL * scale:
        return None
    return int(mi)


def _check_pole_shape(u: LaurentSeries, eps):
    if u.min_degree < -2:
        lead = u.coeffs[0]
        if is_exact(lead) or abs(lead) > eps * u.local_scale():
            raise MalformedPoleError(
                f"pole of order {-u.min_degree} > 2; finite-gap potentials have double poles")
    c_m1 = u[-1]
    if c_m1 != 0 and (is_exact(c_m1) or abs(c_m1) > eps * max(u.local_scale(), 1e-300)):
        raise MalformedPoleError("nonzero residue c_{-1}")


def dg_check(u_local: LaurentSeries, eps=DEFAULT_EPS, pole=None, pole_class=None) -> PoleVerdict:
    """Laurent-coefficient test for trivial monodromy at the base point of ``u_local``."""
    _check_pole_shape(u_local, eps)
    if pole is None:
        pole = u_local.base_point
    c2 = u_local[-2] if u_local.trunc_order >= -2 else Fraction(0)
    m = triangular_root(c2)
    if m is None:
        return PoleVerdict(pole, c2, None, (), "fails_triangular", pole_class)
    need = 2 * m - 1
    if m > 0 and u_local.trunc_order < need:
        raise TruncationError(
            f"m = {m} needs coefficients through degree {need}", need)
    odd = tuple((k, u_local[2 * k - 1]) for k in range(1, m + 1))
    if u_local.exact:
        ok = all(c == 0 for _, c in odd)
    else:
        window = [abs(u_local[j]) for j in range(-2, 2 * m + 1) if j <= u_local.trunc_order]
        scale = max(window + [1e-300])
        ok = all(abs(c) <= eps * scale for _, c in odd)
    return PoleVerdict(pole, c2, m, odd, "trivial" if ok else "fails_odd_coefficient",
                       pole_class)


def _exponent_roots(c2):
    """Roots rho of rho(rho - 1) = c2 (phi ~ z^rho), larger first."""
    m = triangular_root(c2)
    if m is not None:
        return (m + 1, -m), True
    if is_exact(c2):
        r = scalars.exact_sqrt(1 + 4 * c2)
        if r is not None and not isinstance(r, scalars.GaussianRational):
            r = Fraction(r)
            return ((1 + r) / 2, (1 - r) / 2), True
    d = complex(1 + 4 * complex(c2)) ** 0.5
    r1, r2 = (1 + d) / 2, (1 - d) / 2
    if r1.real < r2.real:
        r1, r2 = r2, r1
    return (r1, r2), False


def _solve_branch(coef, rho, c2, order, resonance=None, eps=DEFAULT_EPS):
    """Frobenius recursion xi_k[(k+rho)(k+rho-1) - c2] = sum_{n>=0} c'_n xi_{k-2-n}."""
    xi = [Fraction(1) if is_exact(rho) and is_exact(c2) else 1.0]
    obstruction = None
    for k in range(1, order + 1):
        rhs = 0
        for n in range(0, k - 1):
            rhs += coef(n) * xi[k - 2 - n]
        ind = (k + rho) * (k + rho - 1) - c2
        if resonance is not None and k == resonance:
            obstruction = rhs
            xi.append(0 * rhs)
            continue
        xi.append(rhs / ind)
    return xi, obstruction


def frobenius_solve(u_local: LaurentSeries, lam, order: int = 16, eps=DEFAULT_EPS) -> FrobeniusBasis:
    """Both local solutions of -phi'' + (u - lam) phi = 0 at the base point."""
    _check_pole_shape(u_local, eps)
    c2 = u_local[-2] if u_local.trunc_order >= -2 else Fraction(0)
    if u_local.exact and is_exact(lam):
        lam = scalars.exact_or_none(lam)
    else:
        lam = complex(lam)

    def coef(n):
        c = u_local[n] if n <= u_local.trunc_order else None
        if c is None:
            raise TruncationError("potential truncated below the recursion depth", order)
        return c - lam if n == 0 else c

    if u_local.trunc_order < order - 2:
        raise TruncationError(f"order {order} needs the potential through degree {order - 2}",
                              order - 2)
    (r1, r2), integer_gap = _exponent_roots(c2)
    gap = r1 - r2
    resonance = None
    if is_exact(gap):
        if Fraction(gap).denominator == 1 and gap > 0:
            resonance = int(gap)
    else:
        g = complex(gap)
        if abs(g.imag) < 1e-9 and abs(g.real - round(g.real)) < 1e-9 and round(g.real) > 0:
            resonance = int(round(g.real))
    xi1, _ = _solve_branch(coef, r1, c2, order)
    log_required = False
    obstruction = None
    if resonance is not None and resonance <= order:
        xi2, obstruction = _solve_branch(coef, r2, c2, order, resonance)
        if is_exact(obstruction):
            log_required = obstruction != 0
        else:
            ref = max([abs(x) for x in xi2[:resonance]] + [abs(coef(n)) for n in range(resonance - 1)]
                      + [1.0])
            log_required = abs(obstruction) > eps * ref
    else:
        xi2, _ = _solve_branch(coef, r2, c2, order)
    base = u_local.base_point
    series = (LaurentSeries.from_list(xi1, 0, order, base),
              LaurentSeries.from_list(xi2, 0, order, base))
    sols = ()
    if is_exact(r1) and Fraction(r1).denominator == 1 and is_exact(r2) \
            and Fraction(r2).denominator == 1:
        sols = tuple(s.shift_degree(int(r)) for s, r in zip(series, (r1, r2)))
    mu = (-r1, -r2)
    return FrobeniusBasis(mu, series, log_required, obstruction, resonance, sols)


def lambda_samples(seed: int, count: int = 8, exact=True):
    """Seeded spectral-parameter samples for the DG/Frobenius agreement check."""
    rng = random.Random(seed)
    if exact:
        return [Fraction(rng.randint(-999, 999), rng.randint(1, 97)) for _ in range(count)]
    return [complex(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(count)]


# ---------------------------------------------------------------------------

def _required_order(spec: PotentialSpec, pole):
    c = spec.attached(pole)
    m = triangular_root(c)
    return max(2, 2 * m + 2) if m is not None else 2


def trivial_monodromy_report(spec: PotentialSpec, order: int | None = None, eps=DEFAULT_EPS,
                             seed: int = 0, force_float: bool = False) -> MonodromyReport:
    """dg_check at every pole-class representative of ``spec``.

    Series are exact whenever the data allow it; ``force_float`` converts
    them to complex floats first.
    """
    if not isinstance(spec, (potentials.DTV, potentials.Trig, potentials.Rat,
                             potentials.TrigMulti)):
        raise DomainError(f"unsupported potential {type(spec).__name__}")
    verdicts = []
    exact = True
    for pole in spec.pole_classes():
        need = _required_order(spec, pole)
        n = need if order is None else order
        if n < need:
            raise TruncationError(f"pole {pole} needs truncation order >= {need}", need)
        u = potentials.potential_series_at_pole(spec, pole, n)
        if force_float:
            u = u.to_float()
        exact = exact and u.exact
        verdicts.append(dg_check(u, eps, pole=spec.pole_position(pole), pole_class=pole))
    overall = all(v.trivial for v in verdicts)
    return MonodromyReport(spec, tuple(verdicts), overall, seed, "exact" if exact else "float")

