import pytest

from app.models.derivation import Derivation, DerivationMode
from app.models.poly import Poly
from app.models.scalar import Scalar
from app.services.expression_service import (
    ExpressionContext,
    bracket_values,
    evaluate,
    parse_expression,
    parse_scalar,
    render_module_terms,
    render_poly,
    render_value,
)
from app.services.gauge_service import ModuleTerm
from app.services.starprod_service import star
from app.utils.exceptions import ExpressionParseError, UnboundIdentifierError


@pytest.fixture(scope="module")
def context(instanton):
    return ExpressionContext(instanton)


@pytest.mark.parametrize(
    "source, position, message",
    [
        ("z1 + + z2", (5, 6), "Se esperaba un operando"),
        ("z1 +", (4, 4), "Expresión incompleta"),
        ("(z1 + z2", (8, 8), "Se esperaba ')'"),
        ("z1 $ z2", (3, 4), "Símbolo desconocido"),
        ("z1 z2", (3, 5), "Símbolo inesperado"),
        ("z1^", (3, 3), "exponente entero"),
    ],
)
def test_parse_errors_carry_position(source, position, message):
    with pytest.raises(ExpressionParseError) as info:
        parse_expression(source)
    assert info.value.position == position
    assert message in info.value.message
    assert info.value.highlight().splitlines()[0] == source


def test_empty_expression():
    with pytest.raises(ExpressionParseError):
        parse_expression("   ")


def test_unknown_identifier(context):
    with pytest.raises(UnboundIdentifierError) as info:
        evaluate("z1 + n11", context)
    assert info.value.name == "n11"
    assert info.value.position == (5, 8)


def test_kappa_only_as_divisor(context):
    with pytest.raises(ExpressionParseError) as info:
        evaluate("z1 + k", context)
    assert info.value.position == (5, 6)
    assert evaluate("z1/k", context) == Poly.gen(context.spec.table, "z1").scale(Scalar.kappa_inv())
    assert parse_scalar("3/k^2") == Scalar.rational(3) * Scalar.kappa_inv(2)


def test_star_product_and_power(context, conv):
    table = context.spec.table
    z1, z3 = Poly.gen(table, "z1"), Poly.gen(table, "z3")
    assert evaluate("z1*z3", context) == star(z1, z3, conv)
    assert evaluate("z1^2", context) == star(z1, z1, conv)
    assert evaluate("w^4*z3*z1", context) == star(z1, z3, conv)


def test_unary_minus_covers_the_sum(context):
    table = context.spec.table
    z1, z2 = Poly.gen(table, "z1"), Poly.gen(table, "z2")
    assert evaluate("-z1 + z2", context) == -(z1 + z2)
    assert evaluate("(-z1) + z2", context) == z2 - z1


def test_conjugation(context):
    table = context.spec.table
    assert evaluate("z1~", context) == Poly.gen(table, "z1c")
    assert evaluate("(i*z1)~", context) == Poly.gen(table, "z1c").scale(-Scalar.imag())


@pytest.mark.parametrize("source", ["z1*z3c - 2*z2", "alpha*beta + x", "sqrt2*w^-3*z4*z4c", "1/2 + i*z3"])
def test_poly_rendering_parses_back(context, conv, source):
    p = context.as_poly(evaluate(source, context))
    assert context.as_poly(evaluate(render_poly(p, conv), context)) == p


def test_gauge_names_are_twisted(context):
    value = evaluate("W11", context)
    assert isinstance(value, Derivation)
    assert value.mode == DerivationMode.TWISTED
    assert value.label == "W11"


def test_invalid_operations(context):
    with pytest.raises(ExpressionParseError):
        evaluate("K1 + z1", context)
    with pytest.raises(ExpressionParseError):
        evaluate("K1*z1", context)
    with pytest.raises(ExpressionParseError):
        evaluate("z1/z2", context)
    with pytest.raises(ExpressionParseError):
        evaluate("z1^-2", context)


def test_braided_bracket_of_gauge_generators(context):
    spec = context.spec
    result = bracket_values(evaluate("W01", context), evaluate("W11", context), context)
    assert render_value(result, spec) == "sqrt2*beta*W11"
    same = bracket_values(evaluate("K1", context), evaluate("K1", context), context)
    assert render_value(same, spec) == "0"


def test_bracket_of_base_coordinates_vanishes(context):
    result = bracket_values(evaluate("alpha", context), evaluate("beta", context), context)
    assert render_value(result, context.spec) == "0"
    assert bracket_values(Scalar.imag(), evaluate("z1", context), context) == Scalar.zero()


def test_render_module_terms():
    terms = [
        ModuleTerm(Scalar.sqrt2(), ("beta",), "W11"),
        ModuleTerm(-Scalar.one(), ("alpha", "alpha"), "W01"),
    ]
    assert render_module_terms(terms) == "sqrt2*beta*W11 - alpha^2*W01"
    assert render_module_terms([]) == "0"
