from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from app.models.scalar import AlgebraicCoeff, Scalar
from app.services.expression_service import parse_scalar

small = st.integers(min_value=-4, max_value=4)
coeffs = st.builds(AlgebraicCoeff, small, small, small, small)
scalars = st.dictionaries(
    st.tuples(st.integers(min_value=-8, max_value=8), st.integers(min_value=0, max_value=2)),
    coeffs,
    max_size=3,
).map(Scalar)


@given(scalars, scalars)
def test_ring_commutative(x, y):
    assert x + y == y + x
    assert x * y == y * x


@given(scalars, scalars, scalars)
def test_ring_associative_and_distributive(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(scalars, scalars)
def test_star_is_involutive_ring_map(x, y):
    assert x.star().star() == x
    assert (x * y).star() == x.star() * y.star()
    assert (x + y).star() == x.star() + y.star()


@given(scalars, scalars)
def test_classical_limit_is_ring_map(x, y):
    assert (x * y).eval_at_omega_one() == x.eval_at_omega_one() * y.eval_at_omega_one()


@given(coeffs)
def test_nonzero_coefficients_have_nonzero_norm(c):
    assert (c.norm() == 0) == c.is_zero()


@given(scalars)
def test_render_parses_back(x):
    assert parse_scalar(x.render()) == x


def test_omega_and_imaginary_unit():
    assert Scalar.imag() * Scalar.imag() == Scalar.rational(-1)
    assert Scalar.sqrt2() * Scalar.sqrt2() == Scalar.rational(2)
    assert Scalar.omega(3) * Scalar.omega(-3) == Scalar.one()
    assert Scalar.omega(5).star() == Scalar.omega(-5)
    assert Scalar.omega(-8).eval_at_omega_one() == Scalar.one()


def test_kappa_terms():
    value = Scalar.one() + Scalar.imag() * Scalar.kappa_inv(2)
    assert value.drop_kappa() == Scalar.one()
    assert value.star() == Scalar.one() - Scalar.imag() * Scalar.kappa_inv(2)
    with pytest.raises(ValueError):
        Scalar({(0, -1): AlgebraicCoeff(1)})


def test_render_examples():
    assert Scalar.zero().render() == "0"
    assert Scalar.omega(-3).render() == "w^-3"
    assert Scalar.kappa_inv().render() == "1/k"
    assert (Scalar.sqrt2().times_omega(4) * Scalar.kappa_inv(2)).render() == "sqrt2*w^4/k^2"
    assert Scalar.rational(Fraction(-1, 2)).render() == "-1/2"
    assert (Scalar.rational(-1) + Scalar.imag()).render() == "((-1) + i)"


def test_parse_fractions_and_kappa():
    assert parse_scalar("1/2*w^-3") == Scalar.rational(Fraction(1, 2)).times_omega(-3)
    assert parse_scalar("-sqrt2") == -Scalar.sqrt2()
    assert parse_scalar("i/k^2") == Scalar.imag() * Scalar.kappa_inv(2)
    assert parse_scalar("(1 + i)~") == Scalar.one() - Scalar.imag()


def test_scalar_is_immutable():
    with pytest.raises(AttributeError):
        Scalar.one().x = 1
