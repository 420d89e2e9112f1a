import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from app.models.poly import Monomial, Poly, RelationSet
from app.models.scalar import AlgebraicCoeff, Scalar
from app.models.weight import Weight
from app.utils.exceptions import EngineFault, RelationError

# Configurar logger
logger = logging.getLogger(__name__)


@dataclass
class MembershipWitness:
    """p = Σ relations[i]·multipliers[i] con grado total ≤ bound"""
    bound: int
    multipliers: Dict[int, Poly] = field(default_factory=dict)

    def expand(self, rel: RelationSet) -> Poly:
        total = Poly.zero(rel.table)
        for index, multiplier in sorted(self.multipliers.items()):
            total = total + rel.relations[index] * multiplier
        return total

    def describe(self, rel: RelationSet) -> str:
        if not self.multipliers:
            return "0"
        parts = []
        for index, multiplier in sorted(self.multipliers.items()):
            parts.append(f"({multiplier.render_classical()})·{rel.labels[index]}")
        return " + ".join(parts)


def reduce(p: Poly, rel: RelationSet) -> Poly:
    """
    Forma normal de p por las reglas de sustitución.

    Parámetros:
        p: polinomio sobre la tabla de las relaciones
        rel: conjunto de relaciones en modo sustitución

    Retorna la forma normal; es idempotente y congruente con p módulo el ideal.
    """
    if rel.mode != RelationSet.SUBSTITUTION:
        raise RelationError("reduce requiere relaciones en modo sustitución")
    if p.table != rel.table:
        raise RelationError(f"El polinomio no pertenece a la tabla {rel.table.name}")
    result = Poly.zero(p.table)
    for mono, coeff in p.raw_terms().items():
        result = result + rel.normal_form_of_monomial(mono).scale(coeff)
    return result


@lru_cache(maxsize=None)
def monomials_up_to(size: int, degree: int) -> Tuple[Monomial, ...]:
    """Todos los monomios de grado ≤ degree en `size` variables, en orden creciente de grado"""
    out: List[Monomial] = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(size), total):
            mono = [0] * size
            for pos in combo:
                mono[pos] += 1
            out.append(tuple(mono))
    return tuple(out)


def to_qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _multiplier_columns(
    rel: RelationSet, target_weights: List[Weight], bound: int
) -> List[Tuple[int, Monomial]]:
    table = rel.table
    columns = []
    for index, relation in enumerate(rel.relations):
        room = bound - relation.degree()
        if room < 0:
            continue
        relation_weight = relation.homogeneous_weight()
        for mono in monomials_up_to(table.size, room):
            if relation_weight is not None:
                if relation_weight + table.weight_of(mono) not in target_weights:
                    continue
            columns.append((index, mono))
    return columns


def ideal_member(p: Poly, rel: RelationSet, degree_bound: int) -> Optional[MembershipWitness]:
    """
    Pertenencia acotada por grado al ideal de las relaciones.

    Resuelve exactamente sobre ℚ el sistema p = Σ gᵢ·mᵢ con deg(gᵢmᵢ) ≤ degree_bound,
    separando p en componentes racionales (ω, κ, base de ℚ(i,√2)).

    Retorna el testigo o None si no existe a esa cota (no prueba la no pertenencia).
    """
    if rel.mode != RelationSet.MEMBERSHIP:
        raise RelationError("ideal_member requiere relaciones en modo pertenencia")
    if degree_bound < p.degree():
        raise RelationError(f"La cota {degree_bound} es menor que el grado {p.degree()} del polinomio")
    if p.is_zero():
        return MembershipWitness(bound=0)

    table = rel.table
    target_weights = list(p.weight_components())
    columns = _multiplier_columns(rel, target_weights, degree_bound)
    if not columns:
        return None

    # Componentes racionales de p: una columna aumentada por clave (ω, κ, slot)
    keys = sorted({key for _, coeff in p.raw_terms().items() for key in coeff.rational_components()})
    key_index = {key: pos for pos, key in enumerate(keys)}

    row_index: Dict[Monomial, int] = {}
    entries: Dict[int, Dict[int, object]] = {}

    def row_of(mono: Monomial) -> int:
        if mono not in row_index:
            row_index[mono] = len(row_index)
        return row_index[mono]

    for col, (index, mono) in enumerate(columns):
        for rel_mono, rel_coeff in rel.relations[index].raw_terms().items():
            value = rel_coeff.single_term()
            if value is None or value[0] or value[1] or not value[2].is_rational():
                raise RelationError(f"La relación {rel.labels[index]} debe tener coeficientes racionales")
            product = tuple(a + b for a, b in zip(rel_mono, mono))
            row = entries.setdefault(row_of(product), {})
            row[col] = row.get(col, QQ(0)) + to_qq(value[2].a)

    offset = len(columns)
    for mono, coeff in p.raw_terms().items():
        row = entries.setdefault(row_of(mono), {})
        for key, value in coeff.rational_components().items():
            row[offset + key_index[key]] = to_qq(value)

    entries = {r: {c: v for c, v in cols.items() if v} for r, cols in entries.items()}
    entries = {r: cols for r, cols in entries.items() if cols}
    shape = (len(row_index), offset + len(keys))
    logger.debug(f"Sistema de pertenencia {shape[0]}x{shape[1]} a cota {degree_bound}")
    matrix = DomainMatrix(entries, shape, QQ)
    reduced, pivots = matrix.rref()
    if any(pivot >= offset for pivot in pivots):
        return None

    sparse = reduced.to_sparse().rep
    multipliers: Dict[int, Dict[Monomial, Scalar]] = {}
    for row, pivot in enumerate(pivots):
        row_values = sparse.get(row, {})
        index, mono = columns[pivot]
        value = Scalar.zero()
        for key, pos in key_index.items():
            entry = row_values.get(offset + pos)
            if entry:
                components = [Fraction(0)] * 4
                components[key[2]] = from_qq(entry)
                value = value + Scalar.from_coeff(AlgebraicCoeff(*components), key[0], key[1])
        if not value.is_zero():
            bucket = multipliers.setdefault(index, {})
            bucket[mono] = bucket.get(mono, Scalar.zero()) + value

    witness = MembershipWitness(
        bound=degree_bound,
        multipliers={index: Poly(table, terms) for index, terms in multipliers.items()},
    )
    if witness.expand(rel) != p:
        raise EngineFault("El testigo de pertenencia no reproduce el polinomio")
    return witness


def vanishes_mod(p: Poly, rel: RelationSet, degree_bound: int) -> Optional[int]:
    """
    Decide si p es cero módulo el ideal.

    Retorna la cota mínima usada (0 si p es formalmente cero) o None si no se encontró
    un testigo hasta degree_bound.
    """
    if p.is_zero():
        return 0
    if rel.mode == RelationSet.SUBSTITUTION:
        return p.degree() if reduce(p, rel).is_zero() else None
    start = max(p.degree(), min((g.degree() for g in rel.relations), default=0))
    for bound in range(start, degree_bound + 1):
        if ideal_member(p, rel, bound) is not None:
            return bound
    return None

