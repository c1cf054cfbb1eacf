import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtv.errors import DomainError, TruncationError
from dtv.scalars import GaussianRational, exact_sqrt, parse_scalar, render_scalar
from dtv.series import (LaurentSeries, binomial_shift, divide, geometric_inverse_power,
                        integrate, series_arith, sqrt)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def exact_series(draw, lo=st.integers(-3, 2), length=st.integers(1, 8), nonzero_lead=False):
    m = draw(lo)
    coeffs = draw(st.lists(fractions, min_size=draw(length), max_size=8))
    if not coeffs:
        coeffs = [Fraction(1)]
    if nonzero_lead and coeffs[0] == 0:
        coeffs[0] = Fraction(1)
    return LaurentSeries.from_list(coeffs, m, m + 10)


def test_leading_zeros_are_stripped():
    s = LaurentSeries.from_list([0, 0, 3, 1], -2, 4)
    assert s.min_degree == 0
    assert s[-2] == 0 and s[0] == 3 and s[1] == 1 and s[4] == 0


def test_coefficient_beyond_truncation_raises():
    s = LaurentSeries.from_list([1, 2], 0, 3)
    with pytest.raises(TruncationError) as exc:
        s[4]
    assert exc.value.hint() == {"required_trunc_order": 4}


def test_product_truncation_follows_valuations():
    a = LaurentSeries.from_dict({-2: 1, 0: 1}, 4)
    b = LaurentSeries.from_dict({0: 1, 3: 2}, 6)
    c = a * b
    # known through min(4 + 0, 6 - 2)
    assert c.trunc_order == 4
    assert c[-2] == 1 and c[1] == 2 and c[3] == 2


def test_base_point_mismatch():
    a = LaurentSeries.constant(1, 4, 0)
    b = LaurentSeries.constant(1, 4, 1)
    with pytest.raises(DomainError):
        a + b


def test_geometric_series_of_one_over_one_minus_z():
    one = LaurentSeries.constant(1, 10)
    q = divide(one, LaurentSeries.from_list([1, -1], 0, 10))
    assert all(q[k] == 1 for k in range(11))


def test_inverse_power_matches_binomial_series():
    # 2/(z)^2 at z = 1: 2 sum (k+1)(-t)^k
    s = geometric_inverse_power(2, 0, Fraction(1), 8, 2)
    assert [s[k] for k in range(9)] == [2 * (k + 1) * (-1) ** k for k in range(9)]


def test_binomial_shift():
    # x^2 at x = 1 + t -> 1 + 2t + t^2
    assert binomial_shift([0, 0, 1], 1) == [1, 2, 1]


def test_integrate_rejects_residue():
    with pytest.raises(DomainError):
        integrate(LaurentSeries.from_dict({-1: 1}, 3))


def test_sqrt_exact_and_odd_valuation():
    s = LaurentSeries.from_list([4, 4, 1], 0, 6)  # (2 + t)^2
    r = sqrt(s)
    assert r.exact and [r[k] for k in range(3)] == [2, 1, 0]
    with pytest.raises(DomainError):
        sqrt(LaurentSeries.from_dict({1: 1}, 5))


def test_float_series_agree_with_exact():
    a = LaurentSeries.from_list([Fraction(1, 3), 2, Fraction(-5, 7)], -1, 6)
    b = LaurentSeries.from_list([3, Fraction(1, 2)], 0, 6)
    exact = (a * b + a) / b
    flt = (a.to_float() * b.to_float() + a.to_float()) / b.to_float()
    for k in range(exact.min_degree, exact.trunc_order + 1):
        assert abs(complex(exact[k]) - flt[k]) <= 1e-12 * max(1.0, abs(complex(exact[k])))


def test_evaluation_approximates_function():
    # exp(z) at base 0.5 evaluated near the base
    coeffs = [cmath.exp(0.5)]
    for k in range(1, 20):
        coeffs.append(coeffs[-1] / k)
    s = LaurentSeries.from_list(coeffs, 0, 19, base_point=0.5)
    assert abs(s(0.6) - cmath.exp(0.6)) < 1e-14


def test_json_roundtrip_exact():
    s = LaurentSeries.from_list([Fraction(1, 2), GaussianRational(Fraction(1), Fraction(-3, 4))],
                                -2, 3, base_point=Fraction(1, 3))
    back = LaurentSeries.from_json(s.to_json())
    assert back == s


def test_malformed_json():
    with pytest.raises(DomainError):
        LaurentSeries.from_json({"coeffs": ["1"]})


def test_series_arith_dispatch():
    a = LaurentSeries.from_list([1, 2], 0, 3)
    assert series_arith("sub", a, a).is_zero()
    with pytest.raises(DomainError):
        series_arith("pow", a, a)


@pytest.mark.parametrize("text,value", [
    ("3", Fraction(3)), ("-1/2", Fraction(-1, 2)), ("0.25", 0.25), ("i", GaussianRational(0, 1)),
    ("1/2-3/4i", GaussianRational(Fraction(1, 2), Fraction(-3, 4))), ("2i", GaussianRational(0, 2)),
    ("2.5e-1+1i", complex(0.25, 1.0)),
])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["", "abc", "1//2", "i2"])
def test_parse_scalar_rejects(bad):
    with pytest.raises(DomainError):
        parse_scalar(bad)


def test_exact_sqrt_gaussian():
    assert exact_sqrt(GaussianRational(0, 2)) == GaussianRational(1, 1)
    assert exact_sqrt(Fraction(-4, 9)) == GaussianRational(0, Fraction(2, 3))
    assert exact_sqrt(Fraction(2)) is None


@given(st.one_of(fractions, st.builds(GaussianRational, fractions, fractions)))
def test_render_parse_roundtrip(x):
    assert parse_scalar(render_scalar(x)) == x


@settings(max_examples=60)
@given(exact_series(), exact_series(), exact_series())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    lhs, rhs = a * (b + c), a * b + a * c
    n = min(lhs.trunc_order, rhs.trunc_order)
    assert lhs.truncate(n) == rhs.truncate(n)


@settings(max_examples=60)
@given(exact_series(), exact_series(nonzero_lead=True))
def test_division_inverts_multiplication(a, b):
    q = (a * b) / b
    n = min(q.trunc_order, a.trunc_order)
    assert q.truncate(n) == a.truncate(n)


@settings(max_examples=60)
@given(exact_series(), exact_series())
def test_leibniz_rule(a, b):
    lhs = (a * b).derivative()
    rhs = a.derivative() * b + a * b.derivative()
    n = min(lhs.trunc_order, rhs.trunc_order)
    assert lhs.truncate(n) == rhs.truncate(n)


@settings(max_examples=60)
@given(exact_series(lo=st.just(0)), fractions)
def test_integrate_differentiate(a, c):
    b = integrate(a, c)
    assert b[0] == c
    assert b.derivative() == a


@settings(max_examples=40)
@given(exact_series(lo=st.sampled_from([-2, 0, 2]), nonzero_lead=True))
def test_sqrt_squares_back(a):
    sq = a * a
    r = sqrt(sq)
    assert r * r == sq or (r * r).truncate(sq.trunc_order) == sq
