from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterator, List, Tuple, Union

Rational = Union[int, Fraction]


class AlgebraicCoeff:
    """
    Elemento exacto de ℚ(i,√2) representado como a + b√2 + c·i + d·i√2.

    Los cuatro componentes son racionales de precisión arbitraria.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: Rational = 0, b: Rational = 0, c: Rational = 0, d: Rational = 0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "c", Fraction(c))
        object.__setattr__(self, "d", Fraction(d))

    def __setattr__(self, key, value):
        raise AttributeError("AlgebraicCoeff es inmutable")

    @classmethod
    def from_components(cls, components: Tuple[Rational, Rational, Rational, Rational]) -> "AlgebraicCoeff":
        return cls(*components)

    def components(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def __add__(self, other: "AlgebraicCoeff") -> "AlgebraicCoeff":
        return AlgebraicCoeff(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "AlgebraicCoeff") -> "AlgebraicCoeff":
        return AlgebraicCoeff(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "AlgebraicCoeff":
        return AlgebraicCoeff(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other: "AlgebraicCoeff") -> "AlgebraicCoeff":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        # √2·√2 = 2, i·i = -1
        return AlgebraicCoeff(
            a * e + 2 * b * f - c * g - 2 * d * h,
            a * f + b * e - c * h - d * g,
            a * g + c * e + 2 * b * h + 2 * d * f,
            a * h + d * e + b * g + c * f,
        )

    def scale(self, q: Rational) -> "AlgebraicCoeff":
        q = Fraction(q)
        return AlgebraicCoeff(self.a * q, self.b * q, self.c * q, self.d * q)

    def star(self) -> "AlgebraicCoeff":
        """Conjugación compleja: fija √2 y cambia el signo de i"""
        return AlgebraicCoeff(self.a, self.b, -self.c, -self.d)

    def sqrt2_conjugate(self) -> "AlgebraicCoeff":
        return AlgebraicCoeff(self.a, -self.b, self.c, -self.d)

    def norm(self) -> Fraction:
        """Producto de los cuatro conjugados de Galois; racional y no nulo si el elemento no es cero"""
        n = self * self.star() * self.sqrt2_conjugate() * self.sqrt2_conjugate().star()
        return n.a

    def mul_matrix(self) -> List[List[Fraction]]:
        """Matriz racional 4x4 de la multiplicación por este elemento en la base (1, √2, i, i√2)"""
        a, b, c, d = self.a, self.b, self.c, self.d
        return [
            [a, 2 * b, -c, -2 * d],
            [b, a, -d, -c],
            [c, 2 * d, a, 2 * b],
            [d, c, b, a],
        ]

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraicCoeff):
            return self.components() == other.components()
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.components())

    def __repr__(self) -> str:
        return f"AlgebraicCoeff({self.render()})"

    def render(self) -> str:
        parts = []
        for value, unit in ((self.a, ""), (self.b, "sqrt2"), (self.c, "i"), (self.d, "i*sqrt2")):
            if not value:
                continue
            if not unit:
                parts.append(_render_fraction(value))
            elif value == 1:
                parts.append(unit)
            elif value == -1:
                parts.append(f"-{unit}")
            else:
                parts.append(f"{_render_fraction(value)}*{unit}")
        if not parts:
            return "0"
        return join_signed_terms(parts)

    def term_count(self) -> int:
        return sum(1 for value in self.components() if value)


def _render_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


ZERO_COEFF = AlgebraicCoeff()
ONE_COEFF = AlgebraicCoeff(1)

# Clave de un término escalar: (exponente de ω, exponente de κ⁻¹)
ScalarKey = Tuple[int, int]


class Scalar:
    """
    Elemento exacto de ℚ(i,√2)[ω^{±1}][κ^{-1}].

    Se guarda como mapa disperso (exponente de ω, exponente de κ⁻¹) → AlgebraicCoeff,
    sin coeficientes nulos. ω es la unidad de fase e^{iπθ/4}.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Dict[ScalarKey, AlgebraicCoeff] = None):
        clean = {}
        if terms:
            for key, coeff in terms.items():
                if key[1] < 0:
                    raise ValueError("El exponente de κ⁻¹ debe ser no negativo")
                if not coeff.is_zero():
                    clean[key] = coeff
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("Scalar es inmutable")

    @classmethod
    def zero(cls) -> "Scalar":
        return cls()

    @classmethod
    def one(cls) -> "Scalar":
        return cls({(0, 0): ONE_COEFF})

    @classmethod
    def rational(cls, q: Rational) -> "Scalar":
        return cls({(0, 0): AlgebraicCoeff(q)})

    @classmethod
    def from_coeff(cls, coeff: AlgebraicCoeff, omega: int = 0, kappa: int = 0) -> "Scalar":
        return cls({(omega, kappa): coeff})

    @classmethod
    def omega(cls, k: int = 1) -> "Scalar":
        return cls({(k, 0): ONE_COEFF})

    @classmethod
    def kappa_inv(cls, j: int = 1) -> "Scalar":
        return cls({(0, j): ONE_COEFF})

    @classmethod
    def sqrt2(cls) -> "Scalar":
        return cls({(0, 0): AlgebraicCoeff(0, 1)})

    @classmethod
    def imag(cls) -> "Scalar":
        return cls({(0, 0): AlgebraicCoeff(0, 0, 1)})

    def items(self) -> Iterator[Tuple[ScalarKey, AlgebraicCoeff]]:
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return self._terms == {(0, 0): ONE_COEFF}

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "Scalar") -> "Scalar":
        if not other._terms:
            return self
        if not self._terms:
            return other
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            current = terms.get(key)
            terms[key] = coeff if current is None else current + coeff
        return Scalar(terms)

    def __neg__(self) -> "Scalar":
        return Scalar({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if not self._terms or not other._terms:
            return Scalar()
        terms: Dict[ScalarKey, AlgebraicCoeff] = {}
        for (w1, k1), c1 in self._terms.items():
            for (w2, k2), c2 in other._terms.items():
                key = (w1 + w2, k1 + k2)
                product = c1 * c2
                current = terms.get(key)
                terms[key] = product if current is None else current + product
        return Scalar(terms)

    def times_omega(self, k: int) -> "Scalar":
        """Multiplica por ω^k desplazando exponentes"""
        if k == 0:
            return self
        return Scalar({(w + k, j): coeff for (w, j), coeff in self._terms.items()})

    def scale(self, q: Rational) -> "Scalar":
        return Scalar({key: coeff.scale(q) for key, coeff in self._terms.items()})

    def star(self) -> "Scalar":
        """Involución: ω^k ↦ ω^{-k}, i ↦ -i, κ⁻¹ fijo"""
        return Scalar({(-w, j): coeff.star() for (w, j), coeff in self._terms.items()})

    def eval_at_omega_one(self) -> "Scalar":
        """Límite clásico θ = 0"""
        terms: Dict[ScalarKey, AlgebraicCoeff] = {}
        for (_, j), coeff in self._terms.items():
            current = terms.get((0, j))
            terms[(0, j)] = coeff if current is None else current + coeff
        return Scalar(terms)

    def drop_kappa(self) -> "Scalar":
        """Límite formal κ → ∞: descarta todo término con κ⁻¹"""
        return Scalar({key: coeff for key, coeff in self._terms.items() if key[1] == 0})

    def single_term(self):
        """Retorna (ω-exponente, κ-exponente, coeficiente) si el escalar es un monomio"""
        if len(self._terms) != 1:
            return None
        (w, j), coeff = next(iter(self._terms.items()))
        return w, j, coeff

    def omega_exponents(self) -> List[int]:
        return sorted({w for w, _ in self._terms})

    def rational_components(self) -> Dict[Tuple[int, int, int], Fraction]:
        """Descompone en coordenadas racionales indexadas por (ω, κ, base de ℚ(i,√2))"""
        out = {}
        for (w, j), coeff in self._terms.items():
            for slot, value in enumerate(coeff.components()):
                if value:
                    out[(w, j, slot)] = value
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Scalar.rational(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Scalar({self.render()})"

    def render(self) -> str:
        """Texto canónico, por ejemplo `(1/2 + i*sqrt2)*w^-3/k^2`"""
        if not self._terms:
            return "0"
        rendered = [_render_scalar_term(w, j, coeff) for (w, j), coeff in sorted(self._terms.items())]
        return join_signed_terms(rendered)


def kappa_suffix(j: int) -> str:
    """κ⁻ʲ se escribe como divisor: `/k`, `/k^2`"""
    if not j:
        return ""
    return "/k" if j == 1 else f"/k^{j}"


def _render_scalar_term(w: int, j: int, coeff: AlgebraicCoeff) -> str:
    factors = []
    if w:
        factors.append(f"w^{w}" if w != 1 else "w")
    return attach_coefficient(coeff, factors) + kappa_suffix(j)


def attach_coefficient(coeff: AlgebraicCoeff, factors: List[str]) -> str:
    """Une un coeficiente algebraico con factores multiplicativos ya renderizados"""
    if not factors:
        text = coeff.render()
        return f"({text})" if coeff.term_count() > 1 else text
    tail = "*".join(factors)
    if coeff.term_count() > 1:
        return f"({coeff.render()})*{tail}"
    if coeff == ONE_COEFF:
        return tail
    if coeff == -ONE_COEFF:
        return f"-{tail}"
    return f"{coeff.render()}*{tail}"


def join_signed_terms(rendered: List[str]) -> str:
    """
    Une términos con ` + ` / ` - `.

    El menos unario tiene la menor precedencia en la gramática, así que un primer
    término negativo seguido de otros se encierra entre paréntesis.
    """
    first = rendered[0]
    if first.startswith("-") and len(rendered) > 1:
        first = f"({first})"
    text = first
    for part in rendered[1:]:
        text += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return text
