from fractions import Fraction

import pytest

from app.models.derivation import Derivation, DerivationMode
from app.models.poly import Poly
from app.models.scalar import Scalar
from app.models.weight import Weight
from app.schemas.report_schema import CheckStatus
from app.services.bundle_checks_service import twisted_gauge
from app.services.derivation_service import (
    BracketCache,
    apply,
    braided_bracket,
    braided_bracket_by_composition,
    bracket_plain,
    bracket_twisted_F,
    derivation_star,
    module_act,
    plain_apply,
    verify_braided_lie_axioms,
)
from app.services.dmap_service import d_apply, d_inverse
from app.services.grading_service import star_phase
from app.services.starprod_service import star
from app.utils.exceptions import InhomogeneousError

SUBFAMILY = ("K1", "W01", "W11", "Wm1m1")


def by_name(records):
    return {record.name: record for record in records}


def test_plain_apply_is_leibniz(instanton):
    H1 = instanton.symmetry["H1"]
    z1, z3c = Poly.gen(instanton.table, "z1"), Poly.gen(instanton.table, "z3c")
    assert plain_apply(H1, z1 * z3c) == plain_apply(H1, z1) * z3c + z1 * plain_apply(H1, z3c)
    assert plain_apply(H1, z1) == z1.scale(Scalar.rational(Fraction(1, 2)))
    assert plain_apply(H1, z3c) == z3c.scale(Scalar.rational(Fraction(1, 2)))


def test_bracket_plain_is_antisymmetric(instanton):
    E10, E01 = instanton.symmetry["E10"], instanton.symmetry["E01"]
    assert bracket_plain(E10, E01) == -bracket_plain(E01, E10)
    assert bracket_plain(E10, E10).is_zero()


def test_weights_of_fields(instanton):
    assert instanton.symmetry["E1m1"].require_weight() == Weight(2, -2)
    assert instanton.gauge["W10"].require_weight() == Weight(2, 0)
    assert instanton.gauge["K1"].require_weight() == Weight(0, 0)
    mixed = instanton.symmetry["E10"] + instanton.symmetry["E01"]
    assert mixed.homogeneous_weight() is None
    with pytest.raises(InhomogeneousError):
        mixed.require_weight()


def test_twisted_bracket_routes_agree(instanton, conv):
    family = twisted_gauge(instanton)
    X, Y = family["W01"], family["W11"]
    via_composition = braided_bracket_by_composition(X, Y, conv)
    via_twist = bracket_twisted_F(X.with_mode(DerivationMode.PLAIN), Y.with_mode(DerivationMode.PLAIN), conv)
    assert via_composition == via_twist.with_mode(DerivationMode.TWISTED)
    assert braided_bracket(X, Y, conv) == via_composition


def test_braided_bracket_rejects_plain_fields(instanton, conv):
    with pytest.raises(ValueError):
        braided_bracket(instanton.gauge["K1"], instanton.gauge["K2"], conv)


def test_derivation_star_is_involutive(instanton):
    for X in list(instanton.gauge.values()) + list(instanton.symmetry.values()):
        assert derivation_star(derivation_star(X)) == X
        assert derivation_star(X).require_weight() == -X.require_weight()


def test_derivation_star_in_twisted_mode(instanton, conv):
    table = instanton.table
    for name in SUBFAMILY:
        Xt = twisted_gauge(instanton)[name]
        conjugate = derivation_star(Xt)
        assert conjugate.is_twisted
        assert conjugate == d_apply(derivation_star(d_inverse(Xt)))
        m = Xt.require_weight()
        for pos in range(table.size):
            g = Poly.gen(table, pos)
            (s,) = g.weight_components()
            naive = -apply(Xt, g.star(), conv).star()
            assert apply(conjugate, g, conv) == naive.times_omega(-2 * star_phase(m, s, conv))


def test_module_act_matches_star_action(instanton, conv):
    family = twisted_gauge(instanton)
    for b_name in ("alpha", "beta", "x"):
        b = instanton.base[b_name]
        for name in SUBFAMILY:
            X = family[name]
            bX = module_act(b, X, conv)
            for pos in range(instanton.table.size):
                g = Poly.gen(instanton.table, pos)
                assert apply(bX, g, conv) == star(b, apply(X, g, conv), conv)


def test_bracket_cache_reuses_results(instanton, conv):
    family = twisted_gauge(instanton)
    cache = BracketCache(conv)
    first = cache.bracket(family["K1"], family["W01"])
    assert cache.bracket(family["K1"], family["W01"]) is first


def test_braided_lie_axioms_on_gauge_subfamily(instanton, conv):
    family = {name: twisted_gauge(instanton)[name] for name in SUBFAMILY}
    samples = [instanton.base[name] for name in instanton.base_order]
    records = verify_braided_lie_axioms(family, instanton.relations, conv, 4, samples, "ordered")
    names = [r.name for r in records]
    assert names == [
        "braided.two_routes", "braided.bracket_weight", "braided.antisymmetry",
        "braided.jacobi", "braided.leibniz", "braided.conjugation",
    ]
    assert all(r.status == CheckStatus.PASS for r in records), [r for r in records if r.status != CheckStatus.PASS]
    assert by_name(records)["braided.jacobi"].note.startswith("64 ternas (ordered);")


def test_jacobi_modes(instanton, conv):
    family = {name: twisted_gauge(instanton)[name] for name in SUBFAMILY}
    default = verify_braided_lie_axioms(family, instanton.relations, conv, 4, [])
    assert by_name(default)["braided.jacobi"].note.startswith("64 ternas (ordered);")
    fast = verify_braided_lie_axioms(family, instanton.relations, conv, 4, [], "combinations")
    jacobi = by_name(fast)["braided.jacobi"]
    assert jacobi.status == CheckStatus.PASS
    assert jacobi.note.startswith("4 ternas (combinations);")
    with pytest.raises(ValueError):
        verify_braided_lie_axioms(family, instanton.relations, conv, 4, [], "permutations")


def test_zero_derivation(instanton):
    zero = Derivation.zero(instanton.table, DerivationMode.TWISTED)
    assert zero.is_zero()
    assert zero.require_weight() == Weight(0, 0)
    assert d_apply(instanton.gauge["K1"]).is_twisted
