import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from app.models.bundle import BundleSpec
from app.models.poly import Generator, GeneratorTable, Poly, RelationSet
from app.models.scalar import AlgebraicCoeff, Scalar
from app.models.weight import DEFAULT_CONVENTION, PhaseConvention, Weight
from app.services.gauge_service import HALF_SQRT2, build_gauge_generators, linear_field

# Configurar logger
logger = logging.getLogger(__name__)

ONE = AlgebraicCoeff(1)
HALF = AlgebraicCoeff(Fraction(1, 2))
I = AlgebraicCoeff(0, 0, 1)

# z_μ con peso duplicado (2H1, 2H2); el conjugado tiene el peso opuesto
Z_WEIGHTS = {"z1": Weight(1, -1), "z2": Weight(-1, 1), "z3": Weight(-1, -1), "z4": Weight(1, 1)}


def _field_rules(
    scale: AlgebraicCoeff, rules: List[Tuple[int, str, str]]
) -> List[Tuple[AlgebraicCoeff, str, str]]:
    return [(scale.scale(sign), target, source) for sign, target, source in rules]


# Campos invariantes a derecha: (signo, destino, origen) significa X(origen) = signo·escala·destino
SYMMETRY_RULES: Dict[str, List[Tuple[AlgebraicCoeff, str, str]]] = {
    "H1": _field_rules(HALF, [
        (1, "z1", "z1"), (-1, "z1c", "z1c"), (-1, "z2", "z2"), (1, "z2c", "z2c"),
        (-1, "z3", "z3"), (1, "z3c", "z3c"), (1, "z4", "z4"), (-1, "z4c", "z4c"),
    ]),
    "H2": _field_rules(HALF, [
        (-1, "z1", "z1"), (1, "z1c", "z1c"), (1, "z2", "z2"), (-1, "z2c", "z2c"),
        (-1, "z3", "z3"), (1, "z3c", "z3c"), (1, "z4", "z4"), (-1, "z4c", "z4c"),
    ]),
    "E10": _field_rules(HALF_SQRT2, [(1, "z1", "z3"), (-1, "z3c", "z1c"), (-1, "z4", "z2"), (1, "z2c", "z4c")]),
    "Em10": _field_rules(HALF_SQRT2, [(1, "z3", "z1"), (-1, "z1c", "z3c"), (-1, "z2", "z4"), (1, "z4c", "z2c")]),
    "E01": _field_rules(HALF_SQRT2, [(1, "z2", "z3"), (-1, "z3c", "z2c"), (1, "z4", "z1"), (-1, "z1c", "z4c")]),
    "E0m1": _field_rules(HALF_SQRT2, [(1, "z1", "z4"), (-1, "z4c", "z1c"), (1, "z3", "z2"), (-1, "z2c", "z3c")]),
    "E11": _field_rules(ONE, [(-1, "z4", "z3"), (1, "z3c", "z4c")]),
    "Em1m1": _field_rules(ONE, [(1, "z4c", "z3c"), (-1, "z3", "z4")]),
    "E1m1": _field_rules(ONE, [(-1, "z1", "z2"), (1, "z2c", "z1c")]),
    "Em11": _field_rules(ONE, [(-1, "z2", "z1"), (1, "z1c", "z2c")]),
}

# Acción a derecha de su(2): conmuta con los campos de simetría y anula la base
RIGHT_ACTION_RULES: Dict[str, List[Tuple[AlgebraicCoeff, str, str]]] = {
    "Y1": _field_rules(ONE, [
        (1, "z2c", "z1"), (-1, "z1c", "z2"), (1, "z4c", "z3"), (-1, "z3c", "z4"),
        (1, "z2", "z1c"), (-1, "z1", "z2c"), (1, "z4", "z3c"), (-1, "z3", "z4c"),
    ]),
    "Y2": _field_rules(I, [
        (1, "z2c", "z1"), (-1, "z1c", "z2"), (1, "z4c", "z3"), (-1, "z3c", "z4"),
        (-1, "z2", "z1c"), (1, "z1", "z2c"), (-1, "z4", "z3c"), (1, "z3", "z4c"),
    ]),
    "Y3": _field_rules(I, [
        (1, "z1", "z1"), (1, "z2", "z2"), (1, "z3", "z3"), (1, "z4", "z4"),
        (-1, "z1c", "z1c"), (-1, "z2c", "z2c"), (-1, "z3c", "z3c"), (-1, "z4c", "z4c"),
    ]),
}


def instanton_table() -> GeneratorTable:
    """z1..z4 seguidos de sus conjugados z1c..z4c"""
    names = list(Z_WEIGHTS)
    generators = [Generator(name, Z_WEIGHTS[name], star=pos + 4) for pos, name in enumerate(names)]
    generators += [Generator(f"{name}c", -Z_WEIGHTS[name], star=pos) for pos, name in enumerate(names)]
    return GeneratorTable("instanton", tuple(generators))


def _z(table: GeneratorTable, *names: str) -> Poly:
    result = Poly.one(table)
    for name in names:
        result = result * Poly.gen(table, name)
    return result


def sphere_relations(table: GeneratorTable) -> RelationSet:
    """z1z1* + z2z2* + z3z3* + z4z4* = 1 con líder z4z4*"""
    sphere = Poly.constant(table, -1)
    for name in Z_WEIGHTS:
        sphere = sphere + _z(table, name, f"{name}c")
    lead = _z(table, "z4", "z4c").monomials()[0]
    replacement = Poly.one(table) - _z(table, "z1", "z1c") - _z(table, "z2", "z2c") - _z(table, "z3", "z3c")
    priority = [table.index(name) for name in ("z4", "z4c", "z1", "z2", "z3", "z1c", "z2c", "z3c")]
    return RelationSet(
        table,
        RelationSet.SUBSTITUTION,
        [sphere],
        rules=[(lead, replacement)],
        priority=priority,
        labels=["sphere"],
    )


def instanton_base(table: GeneratorTable) -> Dict[str, Poly]:
    """α = 2(z1z3* + z2*z4), β = 2(z2z3* − z1*z4), x = z1z1* + z2z2* − z3z3* − z4z4*"""
    two = Scalar.rational(2)
    alpha = (_z(table, "z1", "z3c") + _z(table, "z2c", "z4")).scale(two)
    beta = (_z(table, "z2", "z3c") - _z(table, "z1c", "z4")).scale(two)
    x = _z(table, "z1", "z1c") + _z(table, "z2", "z2c") - _z(table, "z3", "z3c") - _z(table, "z4", "z4c")
    return {"alpha": alpha, "alphac": alpha.star(), "beta": beta, "betac": beta.star(), "x": x}


def build_instanton(convention: Optional[PhaseConvention] = None) -> BundleSpec:
    """
    Fibrado instantón SU(2) sobre la 4-esfera deformada.

    Retorna el BundleSpec con 8 generadores, la relación de la esfera en modo de
    sustitución, los 10 campos de simetría, las coordenadas base y los 10
    generadores gauge.
    """
    table = instanton_table()
    symmetry = {name: linear_field(table, rules, name) for name, rules in SYMMETRY_RULES.items()}
    base = instanton_base(table)
    gauge = build_gauge_generators(table, symmetry, base)
    right_action = {name: linear_field(table, rules, name) for name, rules in RIGHT_ACTION_RULES.items()}
    logger.info(f"Fibrado instantón construido: {table.size} generadores, {len(gauge)} generadores gauge")
    return BundleSpec(
        name="instanton",
        table=table,
        relations=sphere_relations(table),
        symmetry=symmetry,
        base=base,
        gauge=gauge,
        convention=convention or DEFAULT_CONVENTION,
        right_action=right_action,
    )
