from __future__ import annotations

from enum import Enum
from typing import Dict, Iterator, Optional, Tuple

from app.models.poly import GeneratorTable, Poly
from app.models.scalar import Scalar
from app.models.weight import Weight
from app.utils.exceptions import GeneratorTableMismatch, InhomogeneousError


class DerivationMode(str, Enum):
    PLAIN = "plain"
    TWISTED = "twisted"


class Derivation:
    """
    Derivación determinada por su acción sobre los generadores.

    `action` guarda siempre la acción clásica X(g); en modo TWISTED la evaluación
    multiplica cada componente homogénea por la fase ω^{φ(m_X, m_s)}, de modo que
    D y D⁻¹ son un cambio de modo.
    """

    __slots__ = ("table", "action", "mode", "label")

    def __init__(
        self,
        table: GeneratorTable,
        action: Dict[int, Poly],
        mode: DerivationMode = DerivationMode.PLAIN,
        label: str = "",
    ):
        self.table = table
        clean = {}
        for pos, image in action.items():
            if image.table is not table and image.table != table:
                raise GeneratorTableMismatch(f"Imagen de {table.generators[pos].name} en otra tabla")
            if not image.is_zero():
                clean[pos] = image
        self.action = clean
        self.mode = DerivationMode(mode)
        self.label = label

    @classmethod
    def zero(cls, table: GeneratorTable, mode: DerivationMode = DerivationMode.PLAIN) -> "Derivation":
        return cls(table, {}, mode)

    @classmethod
    def from_images(
        cls,
        table: GeneratorTable,
        images: Dict[str, Poly],
        mode: DerivationMode = DerivationMode.PLAIN,
        label: str = "",
    ) -> "Derivation":
        return cls(table, {table.index(name): image for name, image in images.items()}, mode, label)

    def image(self, pos: int) -> Poly:
        return self.action.get(pos) or Poly.zero(self.table)

    def items(self) -> Iterator[Tuple[int, Poly]]:
        return iter(sorted(self.action.items()))

    def is_zero(self) -> bool:
        return not self.action

    @property
    def is_twisted(self) -> bool:
        return self.mode == DerivationMode.TWISTED

    def with_mode(self, mode: DerivationMode) -> "Derivation":
        return Derivation(self.table, self.action, mode, self.label)

    def relabel(self, label: str) -> "Derivation":
        return Derivation(self.table, self.action, self.mode, label)

    # Estructura lineal sobre la acción clásica

    def _check(self, other: "Derivation") -> None:
        if self.table is not other.table and self.table != other.table:
            raise GeneratorTableMismatch(f"Tablas distintas: {self.table.name} y {other.table.name}")
        if self.mode != other.mode:
            raise ValueError(f"No se pueden combinar derivaciones {self.mode.value} y {other.mode.value}")

    def __add__(self, other: "Derivation") -> "Derivation":
        self._check(other)
        action = dict(self.action)
        for pos, image in other.action.items():
            action[pos] = action[pos] + image if pos in action else image
        return Derivation(self.table, action, self.mode)

    def __neg__(self) -> "Derivation":
        return Derivation(self.table, {pos: -image for pos, image in self.action.items()}, self.mode)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + (-other)

    def scale(self, scalar: Scalar) -> "Derivation":
        return Derivation(self.table, {pos: image.scale(scalar) for pos, image in self.action.items()}, self.mode)

    def times_omega(self, k: int) -> "Derivation":
        if k == 0:
            return self
        return Derivation(
            self.table, {pos: image.times_omega(k) for pos, image in self.action.items()}, self.mode, self.label
        )

    def eval_at_omega_one(self) -> "Derivation":
        return Derivation(
            self.table, {pos: image.eval_at_omega_one() for pos, image in self.action.items()}, self.mode, self.label
        )

    # Pesos

    def weight_components(self) -> Dict[Weight, "Derivation"]:
        """X_m(g) = componente de X(g) de peso m + peso(g)"""
        buckets: Dict[Weight, Dict[int, Poly]] = {}
        for pos, image in self.action.items():
            shift = self.table.generators[pos].weight
            for weight, part in image.weight_components().items():
                buckets.setdefault(weight - shift, {})[pos] = part
        return {
            weight: Derivation(self.table, action, self.mode, self.label)
            for weight, action in sorted(buckets.items())
        }

    def homogeneous_weight(self) -> Optional[Weight]:
        """Peso de la derivación, o None si es nula o inhomogénea"""
        components = self.weight_components()
        if len(components) != 1:
            return None
        return next(iter(components))

    def require_weight(self) -> Weight:
        """Peso homogéneo; la derivación nula se considera de peso cero"""
        components = self.weight_components()
        if not components:
            return Weight(0, 0)
        if len(components) > 1:
            weights = ", ".join(w.label() for w in components)
            raise InhomogeneousError(f"Derivación {self.label or '?'} inhomogénea: pesos {weights}")
        return next(iter(components))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.table == other.table and self.mode == other.mode and self.action == other.action

    def __hash__(self) -> int:
        return hash((self.mode, frozenset(self.action.items())))

    def __repr__(self) -> str:
        parts = [f"{self.table.generators[pos].name}→{image.render_classical()}" for pos, image in self.items()]
        name = self.label or "Derivation"
        return f"{name}[{self.mode.value}]({'; '.join(parts)})"
