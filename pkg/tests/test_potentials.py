import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtv.elliptic import lattice_from_invariants, lattice_from_periods
from dtv.errors import DomainError, PoleError
from dtv.potentials import (DTV, Rat, Trig, TrigMulti, csc2_series, default_base_point,
                            degenerate, dtv_build, is_pole, jacobi_weierstrass_discrepancy,
                            jacobi_to_weierstrass, potential_eval, potential_series_at,
                            potential_series_at_pole, rat_build, sec2_series, spec_from_json,
                            trig_build, with_alpha)

SQUARE = lattice_from_invariants(4, 0)


def test_csc2_series_coefficients():
    # 1/sin^2 z = z^-2 + 1/3 + z^2/15 + 2 z^4/189 + ...
    s = csc2_series(Fraction(1), 6)
    assert [s[k] for k in (-2, -1, 0, 1, 2, 3, 4)] == [1, 0, Fraction(1, 3), 0, Fraction(1, 15),
                                                        0, Fraction(2, 189)]
    # a^2/sin^2(a z) has the same singular part
    s2 = csc2_series(Fraction(3), 4)
    assert s2[-2] == 1 and s2[0] == 3


def test_sec2_series_coefficients():
    # 1/cos^2 z = 1 + z^2 + 2 z^4/3 + ...
    s = sec2_series(Fraction(1), 4)
    assert [s[k] for k in range(5)] == [1, 0, 1, 0, Fraction(2, 3)]


def test_dtv_build_labels():
    spec = dtv_build((1, 2, 0, 3), SQUARE)
    assert spec.alpha == (0, 6, 0, 12, 2)
    assert spec.attached("0") == 2 and spec.attached("w1") == 6 and spec.attached("w3") == 12
    with pytest.raises(DomainError):
        dtv_build((1, -1, 0, 0), SQUARE)
    with pytest.raises(DomainError):
        dtv_build((1, 0, 0), SQUARE)


@pytest.mark.parametrize("pole", ["0", "w1", "w2", "w3"])
def test_series_at_pole_matches_evaluation(pole):
    spec = dtv_build((1, 2, 1, 3), SQUARE)
    s = potential_series_at_pole(spec, pole, 40)
    assert s.exact
    w = spec.pole_position(pole)
    for t in (0.1, 0.07j, 0.05 - 0.05j):
        ref = potential_eval(spec, w + t)
        assert abs(s(w + t) - ref) <= 1e-11 * abs(ref)


def test_series_at_regular_point_matches_evaluation():
    spec = dtv_build((1, 1, 0, 2), lattice_from_invariants(8, 4))
    z0 = 0.4 + 0.3j
    s = potential_series_at(spec, z0, 40)
    for t in (0.05, 0.03j):
        ref = potential_eval(spec, z0 + t)
        assert abs(s(z0 + t) - ref) <= 1e-11 * abs(ref)


def test_regular_label_expansion_requires_zero_coefficient():
    spec = dtv_build((1, 0, 2, 0), SQUARE)
    assert potential_series_at(spec, "w1", 8).min_degree >= 0
    with pytest.raises(PoleError):
        potential_series_at(spec, "w2", 8)
    assert default_base_point(spec) == "w1"


def test_trig_series_and_evaluation():
    spec = trig_build(2, 1, a=Fraction(1, 2))
    for pole in ("0", "pi/2a"):
        s = potential_series_at_pole(spec, pole, 30)
        assert s.exact and s[-2] == spec.attached(pole) and s[-1] == 0
        w = spec.pole_position(pole)
        ref = potential_eval(spec, w + 0.2)
        assert abs(s(w + 0.2) - ref) <= 1e-12 * abs(ref)
    q = potential_series_at(spec, "quarter", 30)
    z = q.base_point + 0.1
    assert abs(q(z) - potential_eval(spec, z)) < 1e-11


def test_trig_multi():
    spec = TrigMulti(1.0, (0.0, 0.9), (1, 2), 0.5)
    s = potential_series_at_pole(spec, 1, 30)
    assert abs(s[-2] - 6) < 1e-14
    ref = potential_eval(spec, 0.9 + 0.1)
    assert abs(s(1.0) - ref) < 1e-10 * abs(ref)
    with pytest.raises(DomainError):
        TrigMulti(1.0, (0.0, math.pi), (1, 1))


def test_rat_series():
    s = potential_series_at_pole(rat_build(2, Fraction(1, 3)), "0", 6)
    assert s[-2] == 6 and s[0] == Fraction(1, 3) and s[2] == 0


def test_is_pole():
    spec = dtv_build((1, 0, 0, 2), SQUARE)
    assert is_pole(spec, 0) and is_pole(spec, 2 * SQUARE.omega1)
    assert is_pole(spec, SQUARE.omega3 + 2 * SQUARE.omega2)
    assert not is_pole(spec, SQUARE.omega1) and not is_pole(spec, SQUARE.omega2)
    trig = trig_build(1, 0)
    assert is_pole(trig, math.pi) and not is_pole(trig, math.pi / 2)


def test_eval_at_pole_raises():
    with pytest.raises(PoleError):
        potential_eval(trig_build(1, 1), math.pi / 2)
    with pytest.raises(PoleError):
        potential_eval(rat_build(1), 0)


def test_spec_json_roundtrip():
    for spec in (dtv_build((1, 0, 2, 1), SQUARE), trig_build(1, 2, Fraction(3)), rat_build(3)):
        back = spec_from_json(spec.to_json())
        assert back.to_json() == spec.to_json()
        assert back.alpha == spec.alpha


def test_spec_from_json_rejects_unknown():
    with pytest.raises(DomainError):
        spec_from_json({"variant": "nope"})


def test_with_alpha_drops_labels():
    spec = with_alpha(dtv_build((1, 1, 1, 1), SQUARE), 2, Fraction(5, 2))
    assert spec.m is None and spec.alpha[2] == Fraction(5, 2)


def test_one_period_degeneration():
    # a very long second period: wp -> a^2/sin^2(a z) - a^2/3 with a = pi/(2 omega1)
    lat = lattice_from_periods(1.0, 9.0j)
    spec = DTV(lat, (Fraction(0), Fraction(6), Fraction(0), Fraction(0), Fraction(2)), (1, 2, 0, 0))
    limit = degenerate(spec, "one_period")
    assert isinstance(limit, Trig)
    for z in (0.3, 0.45 + 0.2j, 1.7 - 0.1j):
        assert abs(potential_eval(spec, z) - potential_eval(limit, z)) < 1e-8


def test_both_periods_degeneration():
    spec = dtv_build((2, 1, 0, 0), SQUARE)
    limit = degenerate(spec, "both_periods")
    assert isinstance(limit, Rat) and limit.alpha[1] == 6
    with pytest.raises(DomainError):
        degenerate(spec, "sideways")


@pytest.mark.parametrize("m", [(1, 0, 0, 0), (1, 1, 1, 1), (2, 0, 1, 3)])
def test_jacobi_form_identification(m):
    rng = np.random.default_rng(5)
    k = 0.6
    pts = rng.uniform(0.2, 0.9, 20) + 1j * rng.uniform(0.1, 0.6, 20)
    assert jacobi_weierstrass_discrepancy(m, k, pts) < 1e-9
    spec, shift = jacobi_to_weierstrass(m, k)
    assert spec.m == m
    with pytest.raises(DomainError):
        jacobi_to_weierstrass(m, 1.0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=4, max_size=4),
       st.floats(0.1, 0.9), st.floats(0.1, 0.9), st.integers(0, 3))
def test_reflection_symmetry_property(m, s, t, i):
    spec = dtv_build(m, SQUARE)
    w = SQUARE.half_periods[i]
    z = 0.37 * s * SQUARE.omega1 + 0.61 * t * SQUARE.omega2 + 0.05
    if any(is_pole(spec, x, tol=1e-3) for x in (z, 2 * w - z)):
        return
    a, b = potential_eval(spec, z), potential_eval(spec, 2 * w - z)
    assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.fractions(Fraction(1, 4), 3, max_denominator=6))
def test_trig_symmetry_property(m1, m2, a):
    spec = trig_build(m1, m2, a)
    z = 0.123 / float(a) + 0.05j
    for p in (0.0, math.pi / (2 * float(a))):
        v, w = potential_eval(spec, z), potential_eval(spec, 2 * p - z)
        assert abs(v - w) <= 1e-9 * max(1.0, abs(v))
