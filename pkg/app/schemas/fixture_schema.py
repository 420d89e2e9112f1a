from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from app.models.bundle import BASE_NAMES, GAUGE_NAMES, ROOTS

FIXTURE_SCHEMA_VERSION = "1.0"


class Table1Term(BaseModel):
    """Término coef·ω^omega·(base • G̃) del lado derecho de un corchete"""
    coeff: str = Field(..., description="Coeficiente en ℚ(√2), por ejemplo 'sqrt2' o '-2'")
    omega: int = Field(..., description="Exponente de ω derivado (e^{iπθ} = ω^4)")
    base: str = Field("1", description="Coordenada base o '1'")
    generator: str = Field(..., description="Generador gauge")
    printed_omega: Optional[int] = Field(None, description="Exponente impreso si difiere del derivado")
    printed_coeff: Optional[str] = Field(None, description="Coeficiente impreso si difiere del derivado")

    @field_validator("base")
    @classmethod
    def check_base(cls, value: str) -> str:
        if value != "1" and value not in BASE_NAMES:
            raise ValueError(f"Coordenada base desconocida: {value}")
        return value

    @field_validator("generator")
    @classmethod
    def check_generator(cls, value: str) -> str:
        if value not in GAUGE_NAMES:
            raise ValueError(f"Generador gauge desconocido: {value}")
        return value


class Table1Entry(BaseModel):
    """Una fila de la tabla de corchetes trenzados"""
    left: str = Field(..., description="Primer generador gauge")
    right: str = Field(..., description="Segundo generador gauge")
    block: int = Field(1, ge=1, le=3, description="Bloque de la tabla impresa")
    terms: List[Table1Term] = Field(default_factory=list, description="Lado derecho")
    note: Optional[str] = Field(None, description="Observaciones o erratas")

    @field_validator("left", "right")
    @classmethod
    def check_generator(cls, value: str) -> str:
        if value not in GAUGE_NAMES:
            raise ValueError(f"Generador gauge desconocido: {value}")
        return value

    @property
    def has_errata(self) -> bool:
        return any(t.printed_omega is not None or t.printed_coeff is not None for t in self.terms)


class Table1Fixture(BaseModel):
    schema_version: str = Field(FIXTURE_SCHEMA_VERSION, description="Versión del esquema")
    entries: List[Table1Entry] = Field(..., description="Corchetes en el orden de la tabla")

    @model_validator(mode="after")
    def check_unique_pairs(self):
        pairs = [(entry.left, entry.right) for entry in self.entries]
        if len(set(pairs)) != len(pairs):
            raise ValueError("Pares de generadores repetidos en la tabla")
        return self


class StructureConstant(BaseModel):
    """N_rs en [E_r, E_s] = N_rs E_{r+s}"""
    r: Tuple[int, int]
    s: Tuple[int, int]
    N: int

    @field_validator("r", "s")
    @classmethod
    def check_root(cls, value: Tuple[int, int]) -> Tuple[int, int]:
        if tuple(value) not in ROOTS:
            raise ValueError(f"No es una raíz de so(5): {value}")
        return tuple(value)

    @field_validator("N")
    @classmethod
    def check_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("N_rs debe ser ±1")
        return value


class So5Pattern(BaseModel):
    schema_version: str = Field(FIXTURE_SCHEMA_VERSION, description="Versión del esquema")
    structure_constants: List[StructureConstant] = Field(..., description="Un representante por par {r, s}")

    def lookup(self, r: Tuple[int, int], s: Tuple[int, int]) -> int:
        """N_rs con N_sr = −N_rs; cero si r + s no es raíz"""
        for entry in self.structure_constants:
            if entry.r == r and entry.s == s:
                return entry.N
            if entry.r == s and entry.s == r:
                return -entry.N
        return 0
