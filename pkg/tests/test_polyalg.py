import pytest

from app.models.poly import Poly, RelationSet
from app.models.scalar import Scalar
from app.services.polyalg_service import ideal_member, monomials_up_to, reduce, vanishes_mod
from app.utils.exceptions import RelationError


def z(spec, name):
    return Poly.gen(spec.table, name)


def test_sphere_rule(instanton):
    rel = instanton.relations
    lead = z(instanton, "z4") * z(instanton, "z4c")
    expected = Poly.one(instanton.table)
    for name in ("z1", "z2", "z3"):
        expected = expected - z(instanton, name) * z(instanton, f"{name}c")
    assert reduce(lead, rel) == expected
    assert reduce(reduce(lead * lead, rel), rel) == reduce(lead * lead, rel)


def test_sphere_relation_vanishes(instanton):
    sphere = instanton.relations.relations[0]
    assert vanishes_mod(sphere, instanton.relations, 4) == 2
    assert vanishes_mod(sphere * z(instanton, "z1"), instanton.relations, 4) == 3
    assert vanishes_mod(z(instanton, "z1"), instanton.relations, 4) is None
    assert vanishes_mod(Poly.zero(instanton.table), instanton.relations, 4) == 0


def test_reduce_requires_substitution_mode(orthogonal):
    with pytest.raises(RelationError):
        reduce(Poly.one(orthogonal.table), orthogonal.relations)


def test_membership_witness(orthogonal):
    rel = orthogonal.relations
    p = rel.relations[0].scale(Scalar.sqrt2()) - rel.relations[3]
    witness = ideal_member(p, rel, 2)
    assert witness is not None
    assert witness.expand(rel) == p
    assert ideal_member(z(orthogonal, "n11"), rel, 2) is None


def test_membership_bound_below_degree(orthogonal):
    cubic = z(orthogonal, "n11") * z(orthogonal, "n12") * z(orthogonal, "n13")
    with pytest.raises(RelationError):
        ideal_member(cubic, orthogonal.relations, 2)


def test_non_terminating_rules_are_rejected(instanton):
    table = instanton.table
    z1 = z(instanton, "z1")
    with pytest.raises(RelationError):
        RelationSet(table, RelationSet.SUBSTITUTION, [z1], rules=[(z1.monomials()[0], z1 * z1)])
    with pytest.raises(RelationError):
        RelationSet(table, RelationSet.SUBSTITUTION, [z1])
    with pytest.raises(RelationError):
        RelationSet(table, "groebner", [z1])


def test_monomials_up_to():
    monos = monomials_up_to(3, 2)
    assert len(monos) == 10
    assert monos[0] == (0, 0, 0)
    assert all(sum(a) <= sum(b) for a, b in zip(monos, monos[1:]))


def sphere_in_base(spec):
    base = spec.base
    return (
        base["alpha"] * base["alphac"] + base["beta"] * base["betac"] + base["x"] * base["x"]
        - Poly.one(spec.table)
    )


def test_orthogonal_sphere_is_a_member(orthogonal):
    rel = orthogonal.relations
    witness = ideal_member(sphere_in_base(orthogonal), rel, 2)
    assert witness is not None
    assert witness.expand(rel) == sphere_in_base(orthogonal)


def test_orthogonal_sphere_without_constant_is_not_a_member(orthogonal):
    p = sphere_in_base(orthogonal) + Poly.one(orthogonal.table)
    assert not ideal_member(p, orthogonal.relations, 2)


def test_orthogonal_sphere_bound_below_degree(orthogonal):
    with pytest.raises(RelationError):
        ideal_member(sphere_in_base(orthogonal), orthogonal.relations, 1)
