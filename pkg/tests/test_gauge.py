import pytest

from app.models.derivation import DerivationMode
from app.models.scalar import Scalar
from app.models.weight import Weight
from app.schemas.report_schema import CheckStatus
from app.services.bundle_checks_service import twisted_gauge
from app.services.derivation_service import difference_bound, module_act
from app.services.dmap_service import d_apply, d_inverse, verify_d_isomorphism
from app.services.gauge_service import (
    ModuleTerm,
    base_monomials,
    express_in_basis,
    gauge_dimension,
    module_combination,
    ordering_phase,
    scalar_rank,
)


@pytest.mark.parametrize("n, expected", [(0, 10), (1, 35), (2, 81), (3, 154)])
def test_dimension_formula(n, expected):
    assert gauge_dimension(n) == expected


def test_dimension_rejects_negative_degree():
    with pytest.raises(ValueError):
        gauge_dimension(-1)


def test_gauge_generators_are_independent(instanton):
    assert scalar_rank(instanton.gauge) == 10
    doubled = {**instanton.gauge, "copy": instanton.gauge["K1"].scale(Scalar.sqrt2())}
    assert scalar_rank(doubled) == 10


def test_d_is_a_mode_change(instanton):
    for X in instanton.gauge.values():
        assert d_inverse(d_apply(X)) == X
        assert d_apply(X).mode == DerivationMode.TWISTED
    with pytest.raises(ValueError):
        d_apply(d_apply(instanton.gauge["K1"]))
    with pytest.raises(ValueError):
        d_inverse(instanton.gauge["K1"])


def test_d_isomorphism_on_subfamily(instanton, conv):
    family = {name: instanton.gauge[name] for name in ("K1", "K2", "W01", "W1m1")}
    samples = [instanton.base[name] for name in instanton.base_order]
    records = verify_d_isomorphism(family, samples, instanton.relations, conv, 4)
    assert [r.name for r in records] == ["dmap.inverse", "dmap.bracket", "dmap.module"]
    assert all(r.status == CheckStatus.PASS for r in records)


def test_express_single_module_term(instanton, conv):
    family = twisted_gauge(instanton)
    Z = module_act(instanton.base["beta"], family["W11"], conv)
    terms = express_in_basis(Z, family, instanton.base, instanton.relations, conv)
    assert terms == [ModuleTerm(Scalar.one(), ("beta",), "W11")]


def test_module_combination_round_trip(instanton, conv):
    family = twisted_gauge(instanton)
    terms = [
        ModuleTerm(Scalar.sqrt2().times_omega(4), ("alpha",), "W01"),
        ModuleTerm(Scalar.rational(-2), ("x",), "W11"),
    ]
    Z = module_combination(terms, family, instanton.base, conv)
    assert Z.require_weight() == Weight(2, 2)
    recovered = express_in_basis(Z, family, instanton.base, instanton.relations, conv)
    assert recovered is not None
    rebuilt = module_combination(recovered, family, instanton.base, conv)
    assert difference_bound(Z, rebuilt, instanton.relations, 4, conv) is not None


def test_base_monomials_and_ordering_phase(conv):
    assert base_monomials(["alpha", "beta"], 2) == [
        (), ("alpha",), ("beta",), ("alpha", "alpha"), ("alpha", "beta"), ("beta", "beta"),
    ]
    assert ordering_phase([Weight(2, 0), Weight(0, 2)], conv) == -4
    assert ordering_phase([Weight(2, 0)], conv) == 0
