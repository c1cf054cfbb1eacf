from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtv.elliptic import lattice_from_invariants, wp_series
from dtv.errors import DomainError, MalformedPoleError, TruncationError
from dtv.monodromy import (dg_check, frobenius_solve, lambda_samples, triangular_root,
                           trivial_monodromy_report)
from dtv.potentials import TrigMulti, dtv_build, rat_build, trig_build, with_alpha
from dtv.series import LaurentSeries

SQUARE = lattice_from_invariants(4, 0)


def test_lame_two_is_trivial():
    u = wp_series(SQUARE, order=12) * 6
    v = dg_check(u)
    assert v.trivial and v.m == 2 and v.c_minus2 == 6
    assert [k for k, _ in v.odd_residuals] == [1, 2]


def test_odd_coefficient_failure():
    u = LaurentSeries.from_dict({-2: 2, 1: 1}, 8)
    v = dg_check(u)
    assert v.verdict == "fails_odd_coefficient" and v.m == 1


def test_non_triangular_failure():
    v = dg_check(LaurentSeries.from_dict({-2: 1}, 8))
    assert v.verdict == "fails_triangular" and v.m is None


def test_regular_point_is_trivial():
    v = dg_check(LaurentSeries.from_dict({0: 3, 1: 5}, 8))
    assert v.trivial and v.m == 0


def test_malformed_poles():
    with pytest.raises(MalformedPoleError):
        dg_check(LaurentSeries.from_dict({-3: 1, -2: 2}, 8))
    with pytest.raises(MalformedPoleError):
        dg_check(LaurentSeries.from_dict({-2: 2, -1: 1}, 8))


def test_truncation_too_short():
    u = LaurentSeries.from_dict({-2: 12}, 4)  # m = 3 needs degree 5
    with pytest.raises(TruncationError) as exc:
        dg_check(u)
    assert exc.value.hint() == {"required_trunc_order": 5}


def test_float_series_verdicts():
    u = (wp_series(SQUARE, order=12) * 6).to_float()
    assert dg_check(u).trivial
    bad = LaurentSeries.from_dict({-2: 6.0, 0: 1.0, 3: 1e-3}, 10)
    assert dg_check(bad).verdict == "fails_odd_coefficient"
    near = LaurentSeries.from_dict({-2: 6.0 + 1e-12, 0: 1.0}, 10)
    assert dg_check(near).m == 2


@pytest.mark.parametrize("c,m", [(0, 0), (2, 1), (6, 2), (12, 3), (Fraction(20), 4),
                                 (3, None), (-2, None), (Fraction(5, 2), None), (2.0, 1),
                                 (2.5, None)])
def test_triangular_root(c, m):
    assert triangular_root(c) == m


@given(st.integers(0, 500))
def test_triangular_root_inverts(m):
    assert triangular_root(m * (m + 1)) == m
    assert triangular_root(m * (m + 1) + 1) is None


def test_frobenius_free_particle():
    # u = 0, lam = 1: exponents rho = 1, 0 (mu = -1, 0) give sin z and cos z
    basis = frobenius_solve(LaurentSeries.zero(20), Fraction(1), order=10)
    assert basis.exponents == (-1, 0)
    sin_like, cos_like = basis.solutions
    assert [sin_like[k] for k in range(1, 6)] == [1, 0, Fraction(-1, 6), 0, Fraction(1, 120)]
    assert [cos_like[k] for k in range(0, 5)] == [1, 0, Fraction(-1, 2), 0, Fraction(1, 24)]
    assert not basis.log_required


def test_frobenius_obstruction_value():
    # 2/z^2 + z: rho = -1 branch, xi_3 equation reads 0 * xi_3 = c_1 = 1
    u = LaurentSeries.from_dict({-2: 2, 1: 1}, 20)
    basis = frobenius_solve(u, Fraction(3, 7), order=12)
    assert basis.resonance == 3
    assert basis.obstruction == 1 and basis.log_required


def test_frobenius_half_integer_exponents():
    # 3/(4 z^2) - 1 is the Bessel equation of order 1 for sqrt(z) J_1, sqrt(z) Y_1;
    # Y_1 carries a logarithm, so the resonance at gap 2 is obstructed
    u = LaurentSeries.from_dict({-2: Fraction(3, 4)}, 20)
    basis = frobenius_solve(u, Fraction(1), order=8)
    assert basis.exponents == (Fraction(-3, 2), Fraction(1, 2))
    assert basis.resonance == 2 and basis.log_required and basis.obstruction == -1
    # 2/z^2 - 1 is Bessel of order 3/2 and needs no logarithm
    assert not frobenius_solve(LaurentSeries.from_dict({-2: 2}, 20), Fraction(1), 8).log_required


def test_frobenius_solution_satisfies_equation():
    u = wp_series(SQUARE, order=30) * 6
    lam = Fraction(5, 3)
    basis = frobenius_solve(u, lam, order=20)
    assert not basis.log_required
    for phi in basis.solutions:
        resid = -phi.derivative(2) + u * phi - phi * lam
        assert all(c == 0 for _, c in resid.items())


def test_report_over_dtv_family():
    spec = dtv_build((2, 1, 0, 3), SQUARE)
    report = trivial_monodromy_report(spec)
    assert report.overall and report.mode == "exact"
    assert [v.m for v in report.verdicts] == [2, 1, 0, 3]
    bumped = with_alpha(spec, 3, Fraction(12) + Fraction(1, 2))
    verdicts = trivial_monodromy_report(bumped).verdicts
    assert [v.verdict for v in verdicts] == ["trivial", "trivial", "trivial", "fails_triangular"]


def test_report_requires_order():
    with pytest.raises(TruncationError):
        trivial_monodromy_report(dtv_build((4, 0, 0, 0), SQUARE), order=6)


def test_report_float_mode():
    report = trivial_monodromy_report(dtv_build((1, 2, 1, 0), SQUARE), force_float=True)
    assert report.overall and report.mode == "float"


def test_report_trig_rat_and_multi_site():
    assert trivial_monodromy_report(trig_build(3, 2)).overall
    assert trivial_monodromy_report(rat_build(4)).overall
    # a generic two-site configuration is not in the finite-gap class
    spec = TrigMulti(1.0, (0.0, 0.7), (1, 1))
    assert not trivial_monodromy_report(spec).overall


def test_report_json_shape():
    doc = trivial_monodromy_report(dtv_build((1, 0, 0, 0), SQUARE)).to_json()
    assert doc["overall"] is True
    assert doc["verdicts"][0]["verdict"] == "trivial"
    assert doc["verdicts"][0]["m"] == 1
    with pytest.raises(DomainError):
        trivial_monodromy_report(object())


def test_lambda_samples_are_seeded():
    assert lambda_samples(4) == lambda_samples(4)
    assert lambda_samples(4) != lambda_samples(5)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.lists(st.fractions(-5, 5, max_denominator=7), min_size=12,
                                   max_size=12),
       st.fractions(-10, 10, max_denominator=9))
def test_even_regular_part_never_needs_log(m, regular, lam):
    coeffs = {-2: Fraction(m * (m + 1))}
    for k, c in enumerate(regular):
        coeffs[k] = c if k % 2 == 0 else Fraction(0)
    u = LaurentSeries.from_dict(coeffs, 14)
    assert dg_check(u).trivial
    assert not frobenius_solve(u, lam, order=16).log_required
