from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.models.derivation import Derivation
from app.models.poly import GeneratorTable, Poly, RelationSet
from app.models.weight import PhaseConvention, Weight

# Raíces de so(5) en la notación (r1, r2) y su sufijo ASCII: "m1" = -1
ROOTS: Tuple[Tuple[int, int], ...] = (
    (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1),
)
BASE_NAMES: Tuple[str, ...] = ("alpha", "alphac", "beta", "betac", "x")


def root_suffix(root: Tuple[int, int]) -> str:
    return "".join("m1" if r == -1 else str(r) for r in root)


def root_field_name(prefix: str, root: Tuple[int, int]) -> str:
    """E(1,-1) → 'E1m1', W(0,1) → 'W01'"""
    return f"{prefix}{root_suffix(root)}"


SYMMETRY_NAMES: Tuple[str, ...] = ("H1", "H2") + tuple(root_field_name("E", r) for r in ROOTS)
GAUGE_NAMES: Tuple[str, ...] = ("K1", "K2") + tuple(root_field_name("W", r) for r in ROOTS)


def gauge_weight(name: str) -> Weight:
    """Peso duplicado de K_j (cero) o de W_r (2r)"""
    for root in ROOTS:
        if name == root_field_name("W", root) or name == root_field_name("E", root):
            return Weight(2 * root[0], 2 * root[1])
    return Weight(0, 0)


@dataclass
class BundleSpec:
    """
    Fibrado principal deformado listo para verificar.

    `symmetry` y `gauge` guardan derivaciones clásicas; las versiones trenzadas se
    obtienen con D (ver dmap_service).
    """
    name: str
    table: GeneratorTable
    relations: RelationSet
    symmetry: Dict[str, Derivation]
    base: Dict[str, Poly]
    gauge: Dict[str, Derivation]
    convention: PhaseConvention
    base_order: List[str] = field(default_factory=lambda: list(BASE_NAMES))
    right_action: Dict[str, Derivation] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def gauge_names(self) -> List[str]:
        return list(self.gauge)

    def base_element(self, name: str) -> Poly:
        return self.base[name]

    def symbol(self, name: str) -> Optional[object]:
        """Busca un identificador del fibrado: generador, coordenada base, campo o generador gauge"""
        if name in self.base:
            return self.base[name]
        if name in self.gauge:
            return self.gauge[name]
        if name in self.symmetry:
            return self.symmetry[name]
        if self.table.has(name):
            return Poly.gen(self.table, name)
        return None

    def identifiers(self) -> List[str]:
        return self.table.names() + list(self.base) + list(self.symmetry) + list(self.gauge)

    def with_convention(self, convention: PhaseConvention) -> "BundleSpec":
        return BundleSpec(
            name=self.name,
            table=self.table,
            relations=self.relations,
            symmetry=self.symmetry,
            base=self.base,
            gauge=self.gauge,
            convention=convention,
            base_order=self.base_order,
            right_action=self.right_action,
            notes=list(self.notes),
        )


@dataclass
class JordanianSpec:
    """
    Fibrado con twist jordaniano: coordenadas u (con u⁻¹), x⁰..xⁿ y, en el caso
    Poincaré–Weyl, las entradas t_IJ de la matriz de Lorentz.

    Todos los generadores tienen peso nulo y son reales; el grado en u lo guarda la tabla.
    """
    name: str
    n: int
    table: GeneratorTable
    relations: RelationSet
    gauge: Dict[str, Derivation]
    base: Dict[str, Poly]
    base_order: List[str]
    notes: List[str] = field(default_factory=list)

    def gauge_names(self) -> List[str]:
        return list(self.gauge)
