import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from app.models.derivation import Derivation, DerivationMode
from app.models.poly import GeneratorTable, Monomial, Poly, RelationSet
from app.models.scalar import AlgebraicCoeff, Scalar
from app.models.weight import PhaseConvention, Weight
from app.services.derivation_service import module_act
from app.services.grading_service import star_phase
from app.services.polyalg_service import from_qq, reduce, to_qq
from app.services.starprod_service import star
from app.utils.exceptions import EngineFault

# Configurar logger
logger = logging.getLogger(__name__)

SQRT2 = AlgebraicCoeff(0, 1)
HALF_SQRT2 = AlgebraicCoeff(0, Fraction(1, 2))

# Generadores gauge como combinaciones b·campo con b en la base (s = √2)
GAUGE_FORMULAS: Dict[str, List[Tuple[AlgebraicCoeff, str, str]]] = {
    "K1": [(AlgebraicCoeff(2), "x", "H2"), (SQRT2, "betac", "E01"), (SQRT2, "beta", "E0m1")],
    "K2": [(AlgebraicCoeff(2), "x", "H1"), (SQRT2, "alphac", "E10"), (SQRT2, "alpha", "Em10")],
    "W01": [(SQRT2, "beta", "H1"), (SQRT2, "alphac", "E11"), (SQRT2, "alpha", "Em11")],
    "W0m1": [(SQRT2, "betac", "H1"), (SQRT2, "alphac", "E1m1"), (SQRT2, "alpha", "Em1m1")],
    "W10": [(SQRT2, "alpha", "H2"), (-SQRT2, "betac", "E11"), (SQRT2, "beta", "E1m1")],
    "Wm10": [(SQRT2, "alphac", "H2"), (SQRT2, "betac", "Em11"), (-SQRT2, "beta", "Em1m1")],
    "W11": [(AlgebraicCoeff(2), "x", "E11"), (SQRT2, "alpha", "E01"), (-SQRT2, "beta", "E10")],
    "Wm1m1": [(AlgebraicCoeff(2), "x", "Em1m1"), (SQRT2, "alphac", "E0m1"), (-SQRT2, "betac", "Em10")],
    "W1m1": [(AlgebraicCoeff(-2), "x", "E1m1"), (SQRT2, "betac", "E10"), (SQRT2, "alpha", "E0m1")],
    "Wm11": [(AlgebraicCoeff(-2), "x", "Em11"), (SQRT2, "beta", "Em10"), (SQRT2, "alphac", "E01")],
}


def linear_field(
    table: GeneratorTable, rules: Sequence[Tuple[AlgebraicCoeff, str, str]], label: str = ""
) -> Derivation:
    """
    Campo vectorial lineal a partir de reglas (c, destino, origen): X(origen) += c·destino.
    """
    images: Dict[int, Poly] = {}
    for coeff, target, source in rules:
        pos = table.index(source)
        term = Poly.gen(table, target).scale(Scalar.from_coeff(coeff))
        images[pos] = images[pos] + term if pos in images else term
    return Derivation(table, images, DerivationMode.PLAIN, label)


def combine_fields(
    table: GeneratorTable,
    terms: Sequence[Tuple[AlgebraicCoeff, Poly, Derivation]],
    label: str = "",
) -> Derivation:
    """Combinación clásica Σ c·b·X de campos con coeficientes en la base"""
    images: Dict[int, Poly] = {}
    for coeff, b, X in terms:
        factor = b.scale(Scalar.from_coeff(coeff))
        for pos, image in X.action.items():
            value = factor * image
            images[pos] = images[pos] + value if pos in images else value
    return Derivation(table, images, DerivationMode.PLAIN, label)


def build_gauge_generators(
    table: GeneratorTable, symmetry: Mapping[str, Derivation], base: Mapping[str, Poly]
) -> Dict[str, Derivation]:
    """Los diez generadores K_j, W_r del módulo de transformaciones gauge"""
    gauge = {}
    for name, formula in GAUGE_FORMULAS.items():
        gauge[name] = combine_fields(
            table, [(coeff, base[b], symmetry[field]) for coeff, b, field in formula], name
        )
    logger.debug(f"Generadores gauge construidos sobre {table.name}: {list(gauge)}")
    return gauge


def gauge_dimension(n: int) -> int:
    """d(2,n) = (n+1)(n+4)(2n+5)/2"""
    if n < 0:
        raise ValueError("n debe ser no negativo")
    return (n + 1) * (n + 4) * (2 * n + 5) // 2


@dataclass(frozen=True)
class ModuleTerm:
    """Término coef·(b₁ • … • b_k) • G̃ de una combinación sobre la base"""
    coeff: Scalar
    factors: Tuple[str, ...]
    generator: str


def base_monomials(names: Sequence[str], degree: int) -> List[Tuple[str, ...]]:
    """Productos de coordenadas base de grado ≤ degree, en orden creciente de grado"""
    out: List[Tuple[str, ...]] = []
    for total in range(degree + 1):
        out.extend(itertools.combinations_with_replacement(names, total))
    return out


def _product(table: GeneratorTable, base: Mapping[str, Poly], factors: Sequence[str]) -> Poly:
    result = Poly.one(table)
    for name in factors:
        result = result * base[name]
    return result


def ordering_phase(weights: Sequence[Weight], conv: PhaseConvention) -> int:
    """Exponente ψ con b₁•…•b_k = ω^ψ·b₁⋯b_k"""
    return sum(star_phase(weights[i], weights[j], conv) for i in range(len(weights)) for j in range(i + 1, len(weights)))


def _unit(slot: int, value: Fraction) -> AlgebraicCoeff:
    components = [Fraction(0)] * 4
    components[slot] = value
    return AlgebraicCoeff(*components)


def _solve_combination(
    target: Dict[int, Poly],
    candidates: List[Tuple[Tuple[str, ...], str]],
    columns: Mapping[Tuple[Tuple[str, ...], str], Dict[int, Poly]],
) -> Optional[Dict[Tuple[Tuple[str, ...], str], Scalar]]:
    keys = sorted({key for image in target.values() for coeff in image.raw_terms().values() for key, _ in coeff.items()})
    row_index: Dict[Tuple[int, Monomial, int], int] = {}
    entries: Dict[int, Dict[int, object]] = {}

    def row_of(pos: int, mono: Monomial, comp: int) -> int:
        key = (pos, mono, comp)
        if key not in row_index:
            row_index[key] = len(row_index)
        return row_index[key]

    for col, candidate in enumerate(candidates):
        for pos, image in columns[candidate].items():
            for mono, coeff in image.raw_terms().items():
                single = coeff.single_term()
                if single is None or single[0] or single[1]:
                    raise EngineFault(f"Columna con fase en la combinación: {candidate}")
                matrix = single[2].mul_matrix()
                for comp in range(4):
                    for slot in range(4):
                        value = matrix[comp][slot]
                        if value:
                            entries.setdefault(row_of(pos, mono, comp), {})[4 * col + slot] = to_qq(value)

    offset = 4 * len(candidates)
    for pos, image in target.items():
        for mono, coeff in image.raw_terms().items():
            for key, algebraic in coeff.items():
                for comp, value in enumerate(algebraic.components()):
                    if value:
                        entries.setdefault(row_of(pos, mono, comp), {})[offset + keys.index(key)] = to_qq(value)

    shape = (len(row_index), offset + len(keys))
    reduced, pivots = DomainMatrix(entries, shape, QQ).rref()
    if any(pivot >= offset for pivot in pivots):
        return None
    sparse = reduced.to_sparse().rep
    solution: Dict[Tuple[Tuple[str, ...], str], Scalar] = {}
    for row, pivot in enumerate(pivots):
        values = sparse.get(row, {})
        candidate = candidates[pivot // 4]
        for j, (omega, kappa) in enumerate(keys):
            entry = values.get(offset + j)
            if entry:
                value = Scalar.from_coeff(_unit(pivot % 4, from_qq(entry)), omega, kappa)
                solution[candidate] = solution.get(candidate, Scalar.zero()) + value
    return {candidate: value for candidate, value in solution.items() if not value.is_zero()}


def express_in_basis(
    Z: Derivation,
    basis: Mapping[str, Derivation],
    base: Mapping[str, Poly],
    rel: Optional[RelationSet],
    conv: PhaseConvention,
    max_degree: int = 2,
) -> Optional[List[ModuleTerm]]:
    """
    Expresa una derivación trenzada homogénea como Σ c·(b₁•…•b_k)•G̃ con G en `basis`.

    Resuelve exactamente Z(g) = Σ c'·b·G(g) sobre las acciones clásicas, probando
    productos de coordenadas base de grado 0, 1 y 2 filtrados por peso. Con relaciones
    de sustitución ambos lados se reducen antes. Retorna None si no hay combinación.
    """
    table = Z.table
    if Z.is_zero():
        return []
    m = Z.require_weight()
    if rel is not None and rel.mode == RelationSet.SUBSTITUTION:
        normalize = lambda p: reduce(p, rel)  # noqa: E731
    else:
        normalize = lambda p: p  # noqa: E731
    target = {pos: normalize(image) for pos, image in Z.action.items()}
    target = {pos: image for pos, image in target.items() if not image.is_zero()}
    if not target:
        return []
    basis_weights = {name: X.require_weight() for name, X in basis.items()}
    base_weights = {name: b.homogeneous_weight() for name, b in base.items()}
    columns: Dict[Tuple[Tuple[str, ...], str], Dict[int, Poly]] = {}

    for degree in range(max_degree + 1):
        candidates = []
        for factors in base_monomials(list(base), degree):
            weight = sum((base_weights[name] for name in factors), Weight(0, 0))
            for name, X in basis.items():
                if weight + basis_weights[name] != m:
                    continue
                candidate = (factors, name)
                if candidate not in columns:
                    b = _product(table, base, factors)
                    images = {pos: normalize(b * image) for pos, image in X.action.items()}
                    columns[candidate] = {pos: image for pos, image in images.items() if not image.is_zero()}
                candidates.append(candidate)
        if not candidates:
            continue
        solution = _solve_combination(target, candidates, columns)
        if solution is None:
            continue

        rebuilt: Dict[int, Poly] = {}
        for candidate, value in solution.items():
            for pos, image in columns[candidate].items():
                rebuilt[pos] = rebuilt[pos] + image.scale(value) if pos in rebuilt else image.scale(value)
        if {pos: image for pos, image in rebuilt.items() if not image.is_zero()} != target:
            raise EngineFault(f"La combinación hallada no reproduce {Z.label or 'la derivación'}")

        terms = []
        for (factors, name), value in sorted(solution.items(), key=lambda item: (len(item[0][0]), item[0])):
            weights = [base_weights[f] for f in factors]
            weight = sum(weights, Weight(0, 0))
            shift = star_phase(weight, basis_weights[name], conv) + ordering_phase(weights, conv)
            terms.append(ModuleTerm(value.times_omega(-shift), factors, name))
        logger.debug(f"{Z.label or 'Derivación'} expresada con {len(terms)} términos a grado {degree}")
        return terms
    return None


def module_combination(
    terms: Sequence[ModuleTerm],
    basis: Mapping[str, Derivation],
    base: Mapping[str, Poly],
    conv: PhaseConvention,
) -> Derivation:
    """Reconstruye Σ c·(b₁•…•b_k)•G̃ como derivación trenzada"""
    result: Optional[Derivation] = None
    for term in terms:
        X = basis[term.generator]
        b = Poly.one(X.table)
        for name in term.factors:
            b = star(b, base[name], conv)
        part = module_act(b.scale(term.coeff), X, conv)
        result = part if result is None else result + part
    if result is None:
        any_field = next(iter(basis.values()))
        return Derivation.zero(any_field.table, DerivationMode.TWISTED)
    return result


def scalar_rank(family: Mapping[str, Derivation]) -> int:
    """
    Rango exacto de la familia sobre ℚ(i,√2).

    Cada derivación aporta cuatro vectores racionales (por 1, √2, i, i√2); el rango racional
    es cuatro veces el rango sobre los escalares.
    """
    row_index: Dict[Tuple[int, Monomial, Tuple[int, int], int], int] = {}
    entries: Dict[int, Dict[int, object]] = {}
    for col, X in enumerate(family.values()):
        for pos, image in X.action.items():
            for mono, coeff in image.raw_terms().items():
                for key, algebraic in coeff.items():
                    matrix = algebraic.mul_matrix()
                    for comp in range(4):
                        row = row_index.setdefault((pos, mono, key, comp), len(row_index))
                        for slot in range(4):
                            if matrix[comp][slot]:
                                entries.setdefault(row, {})[4 * col + slot] = to_qq(matrix[comp][slot])
    if not entries:
        return 0
    shape = (len(row_index), 4 * len(family))
    return DomainMatrix(entries, shape, QQ).rank() // 4
