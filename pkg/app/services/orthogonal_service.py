import logging
from typing import Dict, List, Optional, Tuple

from app.models.bundle import BundleSpec
from app.models.poly import Generator, GeneratorTable, Poly, RelationSet
from app.models.scalar import AlgebraicCoeff, Scalar
from app.models.weight import DEFAULT_CONVENTION, PhaseConvention, Weight
from app.services.gauge_service import SQRT2, build_gauge_generators, linear_field

# Configurar logger
logger = logging.getLogger(__name__)

INDICES = (1, 2, 3, 4, 5)
ROW_WEIGHTS = {1: Weight(2, 0), 2: Weight(0, 2), 3: Weight(-2, 0), 4: Weight(0, -2), 5: Weight(0, 0)}
# Involución de índices de Q: 1' = 3, 2' = 4, 5' = 5
PRIME = {1: 3, 2: 4, 3: 1, 4: 2, 5: 5}

# Acción de so(5) sobre filas: (signo, fila destino, fila origen) para cada columna K
ROW_RULES: Dict[str, List[Tuple[int, int, int]]] = {
    "H1": [(1, 1, 1), (-1, 3, 3)],
    "H2": [(1, 2, 2), (-1, 4, 4)],
    "E10": [(1, 5, 3), (-1, 1, 5)],
    "Em10": [(1, 3, 5), (-1, 5, 1)],
    "E01": [(1, 5, 4), (-1, 2, 5)],
    "E0m1": [(1, 4, 5), (-1, 5, 2)],
    "E11": [(1, 2, 3), (-1, 1, 4)],
    "Em1m1": [(1, 3, 2), (-1, 4, 1)],
    "E1m1": [(1, 4, 3), (-1, 1, 2)],
    "Em11": [(1, 3, 4), (-1, 2, 1)],
}
# Análogos sobre las columnas 1..4: generan so(4) y fijan la columna 5
COLUMN_FIELDS = ("H1", "H2", "E11", "Em1m1", "E1m1", "Em11")


def entry_name(row: int, column: int) -> str:
    return f"n{row}{column}"


def orthogonal_table() -> GeneratorTable:
    """n_JK en orden por filas; el peso lo determina la fila"""
    order = [(j, k) for j in INDICES for k in INDICES]
    position = {pair: pos for pos, pair in enumerate(order)}
    generators = tuple(
        Generator(entry_name(j, k), ROW_WEIGHTS[j], star=position[(PRIME[j], PRIME[k])]) for j, k in order
    )
    return GeneratorTable("orthogonal", generators)


def _n(table: GeneratorTable, row: int, column: int) -> Poly:
    return Poly.gen(table, entry_name(row, column))


def orthogonality_relations(table: GeneratorTable) -> RelationSet:
    """Entradas de N^tQN − Q y NQN^t − Q (simétricas, se toma K ≤ L); det(N) queda fuera"""
    relations = []
    labels = []
    for k in INDICES:
        for l in INDICES:
            if l < k:
                continue
            entry = Poly.zero(table)
            for j in INDICES:
                entry = entry + _n(table, j, k) * _n(table, PRIME[j], l)
            if PRIME[k] == l:
                entry = entry - Poly.one(table)
            relations.append(entry)
            labels.append(f"NtQN[{k}{l}]")
    for j in INDICES:
        for l in INDICES:
            if l < j:
                continue
            entry = Poly.zero(table)
            for k in INDICES:
                entry = entry + _n(table, j, k) * _n(table, l, PRIME[k])
            if PRIME[j] == l:
                entry = entry - Poly.one(table)
            relations.append(entry)
            labels.append(f"NQNt[{j}{l}]")
    return RelationSet(table, RelationSet.MEMBERSHIP, relations, labels=labels)


def _row_field(name: str) -> List[Tuple[AlgebraicCoeff, str, str]]:
    return [
        (AlgebraicCoeff(sign), entry_name(target, k), entry_name(source, k))
        for sign, target, source in ROW_RULES[name]
        for k in INDICES
    ]


def _column_field(name: str) -> List[Tuple[AlgebraicCoeff, str, str]]:
    return [
        (AlgebraicCoeff(sign), entry_name(j, target), entry_name(j, source))
        for sign, target, source in ROW_RULES[name]
        for j in INDICES
    ]


def orthogonal_base(table: GeneratorTable) -> Dict[str, Poly]:
    """α = √2 n15, β = √2 n25, α* = √2 n35, β* = √2 n45, x = n55"""
    s = Scalar.from_coeff(SQRT2)
    return {
        "alpha": _n(table, 1, 5).scale(s),
        "alphac": _n(table, 3, 5).scale(s),
        "beta": _n(table, 2, 5).scale(s),
        "betac": _n(table, 4, 5).scale(s),
        "x": _n(table, 5, 5),
    }


def build_orthogonal(convention: Optional[PhaseConvention] = None) -> BundleSpec:
    """
    Fibrado SO(5) → S⁴ deformado.

    Retorna el BundleSpec con 25 generadores, las relaciones de ortogonalidad en modo
    de pertenencia, la acción de so(5) por filas, las coordenadas base y los
    generadores gauge.
    """
    table = orthogonal_table()
    symmetry = {name: linear_field(table, _row_field(name), name) for name in ROW_RULES}
    base = orthogonal_base(table)
    gauge = build_gauge_generators(table, symmetry, base)
    right_action = {
        f"C{name}": linear_field(table, _column_field(name), f"C{name}") for name in COLUMN_FIELDS
    }
    logger.info(f"Fibrado ortogonal construido: {table.size} generadores, {len(gauge)} generadores gauge")
    return BundleSpec(
        name="orthogonal",
        table=table,
        relations=orthogonality_relations(table),
        symmetry=symmetry,
        base=base,
        gauge=gauge,
        convention=convention or DEFAULT_CONVENTION,
        right_action=right_action,
    )
