import itertools
import logging
from typing import Dict, List, Mapping, Tuple

from app.models.poly import GeneratorTable, Monomial, Poly
from app.models.scalar import Scalar
from app.models.weight import PhaseConvention, Weight
from app.schemas.report_schema import CheckRecord
from app.services.grading_service import braid_phase, star_phase
from app.services.polyalg_service import monomials_up_to
from app.utils.exceptions import GeneratorTableMismatch, InhomogeneousError, StarProductError

# Configurar logger
logger = logging.getLogger(__name__)

# Grado total mínimo de los muestreos de axiomas
MIN_AXIOM_DEGREE = 3


def star(a: Poly, b: Poly, conv: PhaseConvention) -> Poly:
    """
    Producto deformado a • b = Σ ω^{φ(m_a, m_b)} a_m·b_m' sobre componentes homogéneas.

    Parámetros:
        a, b: polinomios sobre la misma tabla
        conv: convención de fase
    """
    if a.table != b.table:
        raise GeneratorTableMismatch(f"Tablas distintas: {a.table.name} y {b.table.name}")
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.table)
    table = a.table
    right = [(mono, coeff, table.weight_of(mono)) for mono, coeff in b.raw_terms().items()]
    terms: Dict[Monomial, Scalar] = {}
    for m1, c1 in a.raw_terms().items():
        w1 = table.weight_of(m1)
        for m2, c2, w2 in right:
            mono = tuple(x + y for x, y in zip(m1, m2))
            value = (c1 * c2).times_omega(star_phase(w1, w2, conv))
            current = terms.get(mono)
            terms[mono] = value if current is None else current + value
    return Poly(table, terms)


def star_power(a: Poly, n: int, conv: PhaseConvention) -> Poly:
    result = Poly.one(a.table)
    for _ in range(n):
        result = star(result, a, conv)
    return result


def commutation_table(gens: Mapping[str, Poly], conv: PhaseConvention) -> List[Tuple[Tuple[str, str], int]]:
    """
    Exponentes k con g • g' = ω^k g' • g para cada par ordenado.

    Retorna la lista en el orden de `gens`; falla si algún elemento no es homogéneo.
    """
    weights: Dict[str, Weight] = {}
    for name, element in gens.items():
        weight = element.homogeneous_weight()
        if weight is None:
            raise InhomogeneousError(f"{name} no es homogéneo")
        weights[name] = weight
    table = []
    for left, right in itertools.product(gens, repeat=2):
        if left == right:
            continue
        table.append(((left, right), braid_phase(weights[left], weights[right], conv)))
    return table


def sample_pairs(table: GeneratorTable, degree: int) -> List[Tuple[Poly, Poly]]:
    """Pares de monomios cuyo producto tiene grado total ≤ degree"""
    monos = monomials_up_to(table.size, degree)
    polys = [(sum(m), Poly.monomial(table, m)) for m in monos]
    return [(a, b) for da, a in polys for db, b in polys if da + db <= degree]


def sample_triples(table: GeneratorTable, degree: int) -> List[Tuple[Poly, Poly, Poly]]:
    monos = monomials_up_to(table.size, degree)
    polys = [(sum(m), Poly.monomial(table, m)) for m in monos]
    return [
        (a, b, c)
        for da, a in polys for db, b in polys if da + db <= degree
        for dc, c in polys if da + db + dc <= degree
    ]


def verify_star_axioms(table: GeneratorTable, degree: int, conv: PhaseConvention) -> List[CheckRecord]:
    """
    Verifica asociatividad, unitalidad, cuasi-conmutatividad, compatibilidad con la
    involución y el límite clásico del producto • sobre monomios de grado total ≤ degree.
    """
    if degree < MIN_AXIOM_DEGREE:
        raise StarProductError(
            f"El grado de muestreo debe ser al menos {MIN_AXIOM_DEGREE}: "
            f"con grado {degree} la asociatividad no combina monomios cuadráticos"
        )
    pairs = sample_pairs(table, degree)
    triples = sample_triples(table, degree)
    logger.info(f"Axiomas del producto estrella en {table.name}: {len(pairs)} pares, {len(triples)} ternas")
    one = Poly.one(table)
    records = []

    witness = None
    for a, b, c in triples:
        if star(star(a, b, conv), c, conv) != star(a, star(b, c, conv), conv):
            witness = f"a={a.render_classical()}, b={b.render_classical()}, c={c.render_classical()}"
            break
    records.append(CheckRecord.build("star.associativity", "deformed product", witness, f"{len(triples)} ternas"))

    witness = None
    for a, _ in pairs:
        if star(one, a, conv) != a or star(a, one, conv) != a:
            witness = f"a={a.render_classical()}"
            break
    records.append(CheckRecord.build("star.unitality", "deformed product", witness))

    witness = None
    conj_witness = None
    classical_witness = None
    for a, b in pairs:
        ab = star(a, b, conv)
        braid = braid_phase(a.homogeneous_weight(), b.homogeneous_weight(), conv)
        if witness is None and ab != star(b, a, conv).times_omega(braid):
            witness = f"a={a.render_classical()}, b={b.render_classical()}"
        if conj_witness is None and ab.star() != star(b.star(), a.star(), conv):
            conj_witness = f"a={a.render_classical()}, b={b.render_classical()}"
        if classical_witness is None and ab.eval_at_omega_one() != a * b:
            classical_witness = f"a={a.render_classical()}, b={b.render_classical()}"
    note = f"{len(pairs)} pares"
    records.append(CheckRecord.build("star.quasi_commutativity", "braided commutative", witness, note))
    records.append(CheckRecord.build("star.conjugation", "(a•b)* = b*•a*", conj_witness, note))
    records.append(CheckRecord.build("star.classical_limit", "trivial twist at θ = 0", classical_witness, note))
    return records
