from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from app.models.scalar import Scalar, attach_coefficient, join_signed_terms, kappa_suffix
from app.models.weight import Weight, ZERO_WEIGHT
from app.utils.exceptions import GeneratorTableMismatch, RelationError

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class Generator:
    """Generador del álgebra: nombre, peso, índice del conjugado y grado en u"""
    name: str
    weight: Weight = ZERO_WEIGHT
    star: int = -1
    u_degree: int = 0
    laurent: bool = False


@dataclass(frozen=True)
class GeneratorTable:
    """
    Lista ordenada de generadores.

    La conjugación es una involución sobre índices y el conjugado tiene el peso opuesto.
    """
    name: str
    generators: Tuple[Generator, ...]
    _index: Dict[str, int] = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        index = {gen.name: pos for pos, gen in enumerate(self.generators)}
        if len(index) != len(self.generators):
            raise ValueError(f"Nombres de generadores repetidos en la tabla {self.name}")
        object.__setattr__(self, "_index", index)
        for pos, gen in enumerate(self.generators):
            partner = self.partner(pos)
            if self.partner(partner) != pos:
                raise ValueError(f"La conjugación no es una involución en {gen.name}")
            if self.generators[partner].weight != -gen.weight:
                raise ValueError(f"El conjugado de {gen.name} no tiene el peso opuesto")

    def __hash__(self) -> int:
        return hash((self.name, self.generators))

    @property
    def size(self) -> int:
        return len(self.generators)

    def names(self) -> List[str]:
        return [gen.name for gen in self.generators]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"Generador desconocido: {name}")

    def has(self, name: str) -> bool:
        return name in self._index

    def partner(self, pos: int) -> int:
        star = self.generators[pos].star
        return pos if star < 0 else star

    def weight_of(self, mono: Monomial) -> Weight:
        m1 = m2 = 0
        for gen, exp in zip(self.generators, mono):
            if exp:
                m1 += exp * gen.weight.m1
                m2 += exp * gen.weight.m2
        return Weight(m1, m2)

    def u_degree_of(self, mono: Monomial) -> int:
        return sum(exp * gen.u_degree for gen, exp in zip(self.generators, mono) if exp)

    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.generators)

    def generator_monomial(self, pos: int, exp: int = 1) -> Monomial:
        mono = [0] * len(self.generators)
        mono[pos] = exp
        return tuple(mono)

    def star_monomial(self, mono: Monomial) -> Monomial:
        out = [0] * len(self.generators)
        for pos, exp in enumerate(mono):
            if exp:
                out[self.partner(pos)] += exp
        return tuple(out)


def monomial_degree(mono: Monomial) -> int:
    return sum(mono)


def deglex_key(mono: Monomial) -> Tuple[int, Monomial]:
    """Orden grado-lexicográfico sobre el orden declarado de generadores"""
    return (sum(mono), mono)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(operator.add, a, b))


class Poly:
    """
    Polinomio conmutativo disperso sobre Scalar.

    Mapa Monomial → Scalar sin coeficientes nulos; los generadores marcados como
    laurent admiten exponentes negativos.
    """

    __slots__ = ("table", "_terms")

    def __init__(self, table: GeneratorTable, terms: Optional[Dict[Monomial, Scalar]] = None):
        self.table = table
        clean: Dict[Monomial, Scalar] = {}
        if terms:
            for mono, coeff in terms.items():
                if not coeff.is_zero():
                    clean[mono] = coeff
        self._terms = clean

    # Constructores

    @classmethod
    def zero(cls, table: GeneratorTable) -> "Poly":
        return cls(table)

    @classmethod
    def constant(cls, table: GeneratorTable, value: Union[Scalar, int] = 1) -> "Poly":
        scalar = value if isinstance(value, Scalar) else Scalar.rational(value)
        return cls(table, {table.unit_monomial(): scalar})

    @classmethod
    def one(cls, table: GeneratorTable) -> "Poly":
        return cls.constant(table, 1)

    @classmethod
    def gen(cls, table: GeneratorTable, name: Union[str, int], exp: int = 1) -> "Poly":
        pos = name if isinstance(name, int) else table.index(name)
        if exp < 0 and not table.generators[pos].laurent:
            raise ValueError(f"El generador {table.generators[pos].name} no admite potencias negativas")
        return cls(table, {table.generator_monomial(pos, exp): Scalar.one()})

    @classmethod
    def monomial(cls, table: GeneratorTable, mono: Monomial, coeff: Optional[Scalar] = None) -> "Poly":
        return cls(table, {tuple(mono): coeff if coeff is not None else Scalar.one()})

    # Acceso

    def terms(self) -> Iterator[Tuple[Monomial, Scalar]]:
        """Términos en orden grado-lexicográfico decreciente"""
        return iter(sorted(self._terms.items(), key=lambda item: deglex_key(item[0]), reverse=True))

    def raw_terms(self) -> Dict[Monomial, Scalar]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, mono: Monomial) -> Scalar:
        return self._terms.get(tuple(mono), Scalar.zero())

    def constant_term(self) -> Scalar:
        return self.coefficient(self.table.unit_monomial())

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(monomial_degree(mono) for mono in self._terms)

    def monomials(self) -> List[Monomial]:
        return [mono for mono, _ in self.terms()]

    # Aritmética

    def _check(self, other: "Poly") -> None:
        if self.table is not other.table and self.table != other.table:
            raise GeneratorTableMismatch(
                f"Tablas distintas: {self.table.name} y {other.table.name}"
            )

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        if not other._terms:
            return self
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            current = terms.get(mono)
            terms[mono] = coeff if current is None else current + coeff
        return Poly(self.table, terms)

    def __neg__(self) -> "Poly":
        return Poly(self.table, {mono: -coeff for mono, coeff in self._terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: Union["Poly", Scalar, int]) -> "Poly":
        if isinstance(other, Scalar):
            return self.scale(other)
        if isinstance(other, int):
            return self.scale(Scalar.rational(other))
        self._check(other)
        if not self._terms or not other._terms:
            return Poly(self.table)
        terms: Dict[Monomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                product = c1 * c2
                current = terms.get(mono)
                terms[mono] = product if current is None else current + product
        return Poly(self.table, terms)

    def scale(self, scalar: Scalar) -> "Poly":
        if scalar.is_one():
            return self
        return Poly(self.table, {mono: coeff * scalar for mono, coeff in self._terms.items()})

    def times_omega(self, k: int) -> "Poly":
        if k == 0:
            return self
        return Poly(self.table, {mono: coeff.times_omega(k) for mono, coeff in self._terms.items()})

    def times_monomial(self, mono: Monomial, coeff: Optional[Scalar] = None) -> "Poly":
        terms = {}
        for m, c in self._terms.items():
            terms[_mono_mul(m, mono)] = c if coeff is None else c * coeff
        return Poly(self.table, terms)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("Potencia negativa de un polinomio")
        result = Poly.one(self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def map_coefficients(self, fn: Callable[[Scalar], Scalar]) -> "Poly":
        return Poly(self.table, {mono: fn(coeff) for mono, coeff in self._terms.items()})

    def star(self) -> "Poly":
        """Conjugación clásica: generadores a sus conjugados y escalares conjugados"""
        table = self.table
        return Poly(table, {table.star_monomial(mono): coeff.star() for mono, coeff in self._terms.items()})

    def eval_at_omega_one(self) -> "Poly":
        return self.map_coefficients(lambda c: c.eval_at_omega_one())

    def derivative(self, pos: int) -> "Poly":
        """Derivada parcial respecto del generador en la posición `pos`"""
        terms: Dict[Monomial, Scalar] = {}
        for mono, coeff in self._terms.items():
            exp = mono[pos]
            if not exp:
                continue
            lowered = list(mono)
            lowered[pos] -= 1
            lowered = tuple(lowered)
            value = coeff.scale(exp)
            current = terms.get(lowered)
            terms[lowered] = value if current is None else current + value
        return Poly(self.table, terms)

    # Graduaciones

    def weight_components(self) -> Dict[Weight, "Poly"]:
        """Descomposición única en componentes homogéneas por peso"""
        buckets: Dict[Weight, Dict[Monomial, Scalar]] = {}
        for mono, coeff in self._terms.items():
            buckets.setdefault(self.table.weight_of(mono), {})[mono] = coeff
        return {weight: Poly(self.table, terms) for weight, terms in sorted(buckets.items())}

    def homogeneous_weight(self) -> Optional[Weight]:
        """Peso común de todos los monomios, o None si es cero o inhomogéneo"""
        weights = {self.table.weight_of(mono) for mono in self._terms}
        return weights.pop() if len(weights) == 1 else None

    def is_homogeneous(self) -> bool:
        return len({self.table.weight_of(mono) for mono in self._terms}) <= 1

    def u_components(self) -> Dict[int, "Poly"]:
        """Descomposición por grado en u (autovalor de u∂_u)"""
        buckets: Dict[int, Dict[Monomial, Scalar]] = {}
        for mono, coeff in self._terms.items():
            buckets.setdefault(self.table.u_degree_of(mono), {})[mono] = coeff
        return {degree: Poly(self.table, terms) for degree, terms in sorted(buckets.items())}

    def homogeneous_parts(self) -> Iterable[Tuple[Monomial, Scalar]]:
        return self._terms.items()

    # Comparación y texto

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.table == other.table and self._terms == other._terms
        if isinstance(other, int):
            return self == Poly.constant(self.table, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.table.name, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Poly({self.render_classical()})"

    def render_classical(self) -> str:
        """Notación conmutativa, por ejemplo `2*z1*z3c + 2*z2c*z4`"""
        if not self._terms:
            return "0"
        rendered = []
        for mono, coeff in self.terms():
            factors = monomial_factors(self.table, mono)
            rendered.append(render_term(coeff, factors))
        return join_signed_terms(rendered)


def monomial_factors(table: GeneratorTable, mono: Monomial) -> List[str]:
    factors = []
    for gen, exp in zip(table.generators, mono):
        if exp == 1:
            factors.append(gen.name)
        elif exp:
            factors.append(f"{gen.name}^{exp}")
    return factors


def render_term(coeff: Scalar, factors: Sequence[str]) -> str:
    """Renderiza coeficiente escalar por factores; los escalares con varios términos van entre paréntesis"""
    single = coeff.single_term()
    if single is not None:
        w, j, algebraic = single
        scalar_factors = []
        if w:
            scalar_factors.append(f"w^{w}" if w != 1 else "w")
        return attach_coefficient(algebraic, scalar_factors + list(factors)) + kappa_suffix(j)
    text = f"({coeff.render()})"
    return "*".join([text] + list(factors)) if factors else text


class RelationSet:
    """
    Relaciones del ideal de un fibrado.

    Modo `substitution`: reglas monomio-líder → polinomio, terminantes en un orden
    grado-lexicográfico con prioridad de variables `priority`.
    Modo `membership`: polinomios generadores para pertenencia acotada por grado.
    """

    SUBSTITUTION = "substitution"
    MEMBERSHIP = "membership"

    def __init__(
        self,
        table: GeneratorTable,
        mode: str,
        relations: Sequence[Poly],
        rules: Optional[Sequence[Tuple[Monomial, Poly]]] = None,
        priority: Optional[Sequence[int]] = None,
        labels: Optional[Sequence[str]] = None,
    ):
        if mode not in (self.SUBSTITUTION, self.MEMBERSHIP):
            raise RelationError(f"Modo de relaciones desconocido: {mode}")
        self.table = table
        self.mode = mode
        self.relations = list(relations)
        self.labels = list(labels) if labels else [f"r{pos}" for pos in range(len(self.relations))]
        self.rules = list(rules or [])
        self.priority = list(priority) if priority else list(range(table.size))
        self._normal_forms: Dict[Monomial, Poly] = {}
        if mode == self.SUBSTITUTION:
            if not self.rules:
                raise RelationError("El modo de sustitución requiere reglas")
            self._check_termination()

    def order_key(self, mono: Monomial) -> Tuple[int, Tuple[int, ...]]:
        return (sum(mono), tuple(mono[pos] for pos in self.priority))

    def _check_termination(self) -> None:
        for lead, replacement in self.rules:
            lead_key = self.order_key(lead)
            for mono in replacement.raw_terms():
                if self.order_key(mono) >= lead_key:
                    raise RelationError(
                        f"Regla no terminante: el monomio {mono} no es menor que el líder {lead}"
                    )

    def normal_form_of_monomial(self, mono: Monomial) -> Poly:
        cached = self._normal_forms.get(mono)
        if cached is not None:
            return cached
        for lead, replacement in self.rules:
            if all(e >= l for e, l in zip(mono, lead)):
                quotient = tuple(e - l for e, l in zip(mono, lead))
                result = Poly.zero(self.table)
                for rep_mono, rep_coeff in replacement.raw_terms().items():
                    part = self.normal_form_of_monomial(_mono_mul(rep_mono, quotient))
                    result = result + part.scale(rep_coeff)
                break
        else:
            result = Poly.monomial(self.table, mono)
        self._normal_forms[mono] = result
        return result
