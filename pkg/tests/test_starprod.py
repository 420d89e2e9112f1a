import pytest
from hypothesis import given, strategies as st

from app.models.poly import Generator, GeneratorTable, Poly
from app.models.scalar import Scalar
from app.models.weight import PhaseConvention, Weight
from app.schemas.report_schema import CheckStatus
from app.services.instanton_service import instanton_table
from app.services.starprod_service import commutation_table, star, star_power, verify_star_axioms
from app.utils.exceptions import GeneratorTableMismatch, InhomogeneousError, StarProductError

TABLE = instanton_table()

monomials = st.lists(st.integers(min_value=0, max_value=1), min_size=TABLE.size, max_size=TABLE.size).map(tuple)
coefficients = st.sampled_from([Scalar.one(), Scalar.rational(-2), Scalar.sqrt2(), Scalar.imag(), Scalar.omega(3)])
polys = st.lists(st.tuples(monomials, coefficients), max_size=3).map(
    lambda terms: sum((Poly.monomial(TABLE, mono, coeff) for mono, coeff in terms), Poly.zero(TABLE))
)


def z(name):
    return Poly.gen(TABLE, name)


@given(polys, polys, polys)
def test_star_is_associative(a, b, c):
    conv = PhaseConvention()
    assert star(star(a, b, conv), c, conv) == star(a, star(b, c, conv), conv)


@given(polys, polys)
def test_star_is_star_compatible_and_classical(a, b):
    conv = PhaseConvention()
    assert star(a, b, conv).star() == star(b.star(), a.star(), conv)
    assert star(a, b, conv).eval_at_omega_one() == (a * b).eval_at_omega_one()


@given(polys)
def test_weight_components_sum_back(p):
    total = Poly.zero(TABLE)
    for weight, component in p.weight_components().items():
        assert component.homogeneous_weight() == weight
        total = total + component
    assert total == p


def test_generator_commutation(conv):
    z1, z3 = z("z1"), z("z3")
    assert star(z1, z3, conv) == (z1 * z3).times_omega(2)
    assert star(z1, z3, conv) == star(z3, z1, conv).times_omega(4)
    assert star(z1, z("z1c"), conv) == z1 * z("z1c")


def test_star_power_has_no_phase(conv):
    assert star_power(z("z1"), 3, conv) == z("z1") ** 3
    assert star_power(z("z1"), 0, conv) == Poly.one(TABLE)


def test_commutation_table_of_base(instanton, conv):
    table = dict(commutation_table({name: instanton.base[name] for name in instanton.base_order}, conv))
    assert table[("alpha", "beta")] == -8
    assert table[("beta", "alpha")] == 8
    assert table[("alpha", "x")] == 0
    assert len(table) == 20


def test_commutation_table_rejects_inhomogeneous(conv):
    with pytest.raises(InhomogeneousError):
        commutation_table({"mixed": z("z1") + z("z2")}, conv)


def test_tables_must_match(conv):
    other = GeneratorTable("other", (Generator("y", Weight(0, 0)),))
    with pytest.raises(GeneratorTableMismatch):
        star(z("z1"), Poly.gen(other, "y"), conv)


def test_render_classical():
    p = (z("z1") * z("z3c")).scale(Scalar.rational(2)) - z("z2")
    assert p.render_classical() == "2*z1*z3c - z2"


@pytest.mark.parametrize("conv", [PhaseConvention(1, -1), PhaseConvention(2, 1)], ids=lambda c: c.label())
def test_star_axioms_on_instanton(conv):
    records = verify_star_axioms(TABLE, 3, conv)
    assert [r.name for r in records] == [
        "star.associativity", "star.unitality", "star.quasi_commutativity", "star.conjugation", "star.classical_limit",
    ]
    assert all(r.status == CheckStatus.PASS for r in records)


@pytest.mark.parametrize("degree", [0, 1, 2])
def test_star_axioms_reject_shallow_sampling(degree):
    with pytest.raises(StarProductError):
        verify_star_axioms(TABLE, degree, PhaseConvention(1, -1))
