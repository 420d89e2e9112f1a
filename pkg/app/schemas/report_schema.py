from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

REPORT_SCHEMA_VERSION = "1.0"


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class OutputFormat(str, Enum):
    JSON = "json"
    MD = "md"
    TEXT = "text"


class RunConfig(BaseModel):
    """Configuración efectiva de una corrida; se incrusta en cada reporte"""
    suite: str = Field("all", description="Suite de verificación")
    theta_normalization: str = Field("pi", description="Normalización del twist: pi o 2pi")
    sign: str = Field("-", description="Orientación ε del twist")
    degree_bound: int = Field(4, ge=1, description="Cota de grado para pertenencia al ideal")
    sample_degree: int = Field(4, ge=3, description="Grado total máximo del producto muestreado")
    orthogonal_sample_degree: int = Field(3, ge=3, description="Tope del grado muestreado en el fibrado ortogonal")
    output_format: OutputFormat = Field(OutputFormat.TEXT, description="Formato del reporte")
    omega_one: bool = Field(False, description="Evaluar en el límite clásico ω = 1")
    use_printed: bool = Field(False, description="Comparar contra los valores impresos de la Tabla 1")
    jacobi_mode: str = Field("ordered", description="Ternas para Jacobi: ordered o combinations")
    timing: bool = Field(False, description="Incluir el tiempo de ejecución en el reporte")

    @classmethod
    def from_settings(cls, **overrides) -> "RunConfig":
        """Construye la configuración a partir de `settings` y de las opciones de la CLI"""
        from app.config import settings

        values = {
            "theta_normalization": settings.THETA_NORMALIZATION,
            "sign": "-" if settings.PHASE_SIGN < 0 else "+",
            "degree_bound": settings.DEGREE_BOUND,
            "sample_degree": settings.SAMPLE_DEGREE,
            "orthogonal_sample_degree": settings.ORTHOGONAL_SAMPLE_DEGREE,
            "output_format": settings.OUTPUT_FORMAT,
            "jacobi_mode": settings.JACOBI_MODE,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


class CheckRecord(BaseModel):
    """Resultado de una verificación individual"""
    name: str = Field(..., description="Nombre de la verificación")
    anchor: str = Field("", description="Referencia al resultado verificado")
    status: CheckStatus = Field(..., description="pass, fail o skipped")
    witness: Optional[str] = Field(None, description="Contraejemplo o diferencia")
    note: Optional[str] = Field(None, description="Observaciones, conteos o erratas")

    @classmethod
    def build(cls, name: str, anchor: str, witness: Optional[str] = None, note: Optional[str] = None) -> "CheckRecord":
        """PASS si no hay contraejemplo, FAIL con el testigo en caso contrario"""
        status = CheckStatus.PASS if witness is None else CheckStatus.FAIL
        return cls(name=name, anchor=anchor, status=status, witness=witness, note=note)

    @classmethod
    def skipped(cls, name: str, anchor: str, note: str) -> "CheckRecord":
        return cls(name=name, anchor=anchor, status=CheckStatus.SKIPPED, note=note)


class Report(BaseModel):
    """Reporte completo de una suite"""
    schema_version: str = Field(REPORT_SCHEMA_VERSION, description="Versión del esquema JSON")
    suite: str = Field(..., description="Suite ejecutada")
    checks: List[CheckRecord] = Field(default_factory=list, description="Verificaciones en orden")
    config: RunConfig = Field(..., description="Configuración usada")
    wall_time: Optional[float] = Field(None, description="Tiempo de ejecución en segundos")

    @property
    def passed(self) -> bool:
        return all(check.status != CheckStatus.FAIL for check in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def failures(self) -> List[CheckRecord]:
        return [check for check in self.checks if check.status == CheckStatus.FAIL]


class Table1Row(BaseModel):
    """Fila de la tabla de corchetes: valor esperado, valor calculado y diferencia"""
    index: int = Field(..., description="Posición en la tabla, desde 1")
    block: int = Field(1, description="Bloque de la tabla impresa")
    left: str = Field(..., description="Primer generador gauge")
    right: str = Field(..., description="Segundo generador gauge")
    expected: str = Field(..., description="Lado derecho del fixture")
    computed: str = Field(..., description="Corchete calculado por el motor")
    status: CheckStatus = Field(..., description="pass o fail")
    diff: Optional[str] = Field(None, description="Calculado menos esperado, si difieren")
    conjugate: Optional[str] = Field(None, description="Corchete conjugado [Ỹ*, X̃*] calculado")
    conjugate_status: Optional[CheckStatus] = Field(None, description="Resultado de la regla de conjugación")
    note: Optional[str] = Field(None, description="Erratas u observaciones")
