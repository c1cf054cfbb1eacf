import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dtv.classifier import (SingularClass, classify_singular_set, family_template,
                            rationalize, reflection_closure, sample_singular_points)
from dtv.errors import DomainError
from dtv.potentials import DTV, Rat, Trig, is_pole
from dtv.scalars import GaussianRational

I = GaussianRational(0, 1)


@pytest.mark.parametrize("x,q", [(0.5, Fraction(1, 2)), (-0.75, Fraction(-3, 4)),
                                 (355 / 113, Fraction(355, 113)), (3.0, Fraction(3)),
                                 (1234 / 5678, Fraction(617, 2839))])
def test_rationalize_recovers_small_fractions(x, q):
    assert rationalize(x) == q


@pytest.mark.parametrize("x", [math.sqrt(2), math.pi, math.e])
def test_rationalize_rejects_irrationals(x):
    assert rationalize(x) is None


def test_single_point_is_rational():
    cls = classify_singular_set([Fraction(5)])
    assert cls.tag == "Rational" and cls.z0 == 5


def test_exact_trigonometric():
    cls = classify_singular_set([Fraction(0), Fraction(1, 2), Fraction(3, 2)])
    assert cls.tag == "Trigonometric" and cls.omega == Fraction(1, 2)


def test_exact_trigonometric_gcd_step():
    # steps 4/3 and 2 generate (2/3) Z
    cls = classify_singular_set([Fraction(0), Fraction(4, 3), Fraction(2)])
    assert cls.omega == Fraction(2, 3)


def test_exact_elliptic():
    cls = classify_singular_set([Fraction(0), Fraction(1), I])
    assert cls.tag == "Elliptic"
    assert {complex(cls.omega1), complex(cls.omega2)} == {1, 1j}


def test_exact_elliptic_refines_lattice():
    # 1, i and (1 + i)/2 generate the lattice with basis (1 + i)/2, (1 - i)/2
    half = GaussianRational(Fraction(1, 2), Fraction(1, 2))
    cls = classify_singular_set([Fraction(0), Fraction(1), I, half])
    assert cls.tag == "Elliptic"
    assert abs(complex(cls.omega1)) == pytest.approx(math.sqrt(0.5))
    assert cls.contains(complex(half)) and not cls.contains(0.5)


def test_float_nondiscrete():
    cls = classify_singular_set([0.0, 1.0, math.sqrt(2)])
    assert cls.tag == "NonDiscrete" and cls.cutoff_hit
    with pytest.raises(DomainError):
        family_template(cls)
    with pytest.raises(DomainError):
        cls.contains(0)


def test_rank_three_is_nondiscrete():
    cls = classify_singular_set([0.0, 1.0, 1j, math.sqrt(3)])
    assert cls.tag == "NonDiscrete"


def test_input_validation():
    with pytest.raises(DomainError):
        classify_singular_set([])
    with pytest.raises(DomainError):
        classify_singular_set([1.0, 1.0])
    with pytest.raises(DomainError):
        SingularClass("Elliptic", 0, omega1=1, omega2=2)
    with pytest.raises(DomainError):
        SingularClass("Hyperbolic", 0)


def test_json_shape():
    doc = classify_singular_set([0.0, 0.5]).to_json()
    assert doc["tag"] == "Trigonometric" and doc["omega"] == "0.5"
    assert doc["commensurability_cutoff_hit"] is False


def test_templates():
    rat = family_template(classify_singular_set([Fraction(2)]))
    assert isinstance(rat.spec, Rat) and rat.spec.shift == 2
    trig = family_template(classify_singular_set([0.0, 0.5]))
    assert isinstance(trig.spec, Trig) and trig.spec.a == pytest.approx(math.pi)
    ell = family_template(classify_singular_set([0.0, 1.0, 1j]))
    assert isinstance(ell.spec, DTV)
    assert ell.spec.lattice.omega1 == pytest.approx(1.0)
    inst = ell.instantiate((0, 2, 0, 0, 6))
    assert inst.alpha == (0, 2, 0, 0, 6) and inst.m is None
    with pytest.raises(DomainError):
        ell.instantiate((1, 2))


def test_template_pole_sets_exact_class():
    cls = classify_singular_set([Fraction(1), Fraction(2), GaussianRational(1, 1)])
    spec = family_template(cls).spec
    for z in sample_singular_points(cls, radius=3):
        assert is_pole(spec, z)
    assert not is_pole(spec, 1.5) and not is_pole(spec, complex(1, 0.5))


def test_reflection_closure_stays_in_class():
    pts = [0.0, 1.0, 0.5j]
    cls = classify_singular_set(pts)
    closure = reflection_closure(pts, depth=2)
    assert len(closure) > 10
    assert all(cls.contains(z) for z in closure)


gauss = st.builds(GaussianRational, st.fractions(-5, 5, max_denominator=6),
                  st.fractions(-5, 5, max_denominator=6))


@settings(max_examples=60, deadline=None)
@given(st.lists(gauss, min_size=1, max_size=5, unique=True))
def test_exact_class_contains_inputs_and_reflections(points):
    cls = classify_singular_set(points)
    assert cls.tag != "NonDiscrete"
    for z in reflection_closure(points, depth=1):
        assert cls.contains(complex(z))


@settings(max_examples=60, deadline=None)
@given(st.lists(gauss, min_size=2, max_size=5, unique=True), gauss, gauss)
def test_exact_affine_equivariance(points, a, b):
    assume(a != 0)
    cls = classify_singular_set(points)
    moved = classify_singular_set([a * z + b for z in points])
    assert moved.tag == cls.tag
    for z in sample_singular_points(cls, radius=1):
        assert moved.contains(complex(a) * z + complex(b))
    for z in sample_singular_points(moved, radius=1):
        assert cls.contains((z - complex(b)) / complex(a))


@settings(max_examples=60, deadline=None)
@given(st.lists(gauss, min_size=1, max_size=4, unique=True))
def test_float_route_agrees_with_exact_route(points):
    exact = classify_singular_set(points)
    flt = classify_singular_set([complex(z) for z in points])
    assert flt.tag == exact.tag
    for z in sample_singular_points(exact, radius=1):
        assert flt.contains(z, tol=1e-8)
