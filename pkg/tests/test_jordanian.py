import pytest

from app.models.poly import Poly
from app.models.scalar import Scalar
from app.schemas.report_schema import CheckStatus
from app.services.jordanian_service import (
    TIME,
    U,
    binom_series,
    build_line_bundle,
    build_poincare_weyl,
    j_conjugate,
    j_rmatrix_act,
    jordanian_table,
    jstar,
    jstar_commutator,
    kappa_limit,
    p0_apply,
    tensor_of,
    verify_jordanian_suite,
)

I_OVER_KAPPA = Scalar.imag() * Scalar.kappa_inv()


@pytest.fixture(scope="module")
def table():
    return jordanian_table(2)


def test_table_layout():
    assert jordanian_table(2).names() == ["u", "x0", "x1", "x2"]
    assert len(jordanian_table(2, lorentz=True).names()) == 4 + 9
    with pytest.raises(ValueError):
        jordanian_table(0)


def test_p0_lowers_time_degree(table):
    x0, u = Poly.gen(table, TIME), Poly.gen(table, U)
    assert p0_apply(x0 * x0) == (x0 * u).scale(Scalar.rational(2) * Scalar.imag())
    assert p0_apply(Poly.gen(table, "x1")).is_zero()


def test_binomial_series_terminates(table):
    x0 = Poly.gen(table, TIME)
    u = Poly.gen(table, U)
    assert binom_series(x0, 0) == x0
    # (1 + P0/κ)^{-1} x0 = x0 - i·u/κ
    assert binom_series(x0, -1) == x0 - u.scale(I_OVER_KAPPA)
    assert binom_series(binom_series(x0 * x0, 2), -2) == x0 * x0


def test_u_and_time_relation(table):
    x0 = Poly.gen(table, TIME)
    u, u_inv = Poly.gen(table, U), Poly.gen(table, U, -1)
    assert jstar(u, u_inv) == Poly.one(table)
    assert jstar_commutator(x0, u_inv) == Poly.constant(table, -I_OVER_KAPPA)
    assert jstar_commutator(Poly.gen(table, "x1"), u_inv).is_zero()


def test_kappa_minkowski_coordinates(line_bundle):
    table = line_bundle.table
    kx0, kx1 = line_bundle.base["kx0"], line_bundle.base["kx1"]
    assert jstar_commutator(kx0, kx1) == kx1.scale(-I_OVER_KAPPA)
    assert j_conjugate(kx0) == kx0 + Poly.constant(table, I_OVER_KAPPA)
    assert j_conjugate(kx1) == kx1


def test_rmatrix_classical_limit(table):
    x0, u = Poly.gen(table, TIME), Poly.gen(table, U)
    tensor = j_rmatrix_act(u, x0)
    assert kappa_limit(tensor) == tensor_of([(u, x0)])
    assert tensor != tensor_of([(u, x0)])


def test_line_bundle_suite(line_bundle):
    records = verify_jordanian_suite(line_bundle)
    assert records[0].name == "jordanian.line_n2.binomial_series"
    assert records[-1].anchor == "abelian braided gauge algebra"
    assert all(r.status == CheckStatus.PASS for r in records), [r.name for r in records if r.status != CheckStatus.PASS]


@pytest.mark.slow
def test_poincare_weyl_suite(poincare_weyl):
    records = verify_jordanian_suite(poincare_weyl, degree=2)
    names = {r.name for r in records}
    assert "jordanian.poincare_weyl_n2.lorentz_closure" in names
    assert "jordanian.poincare_weyl_n2.gauge_count" in names
    assert all(r.status == CheckStatus.PASS for r in records), [r.name for r in records if r.status != CheckStatus.PASS]


def test_poincare_weyl_generator_count():
    spec = build_poincare_weyl(3)
    assert set(spec.gauge) == {"X0", "B1", "B2", "B3", "R12", "R13", "R23"}
    assert len(spec.relations.relations) == 10
    assert list(build_line_bundle(1).gauge) == ["X0"]
