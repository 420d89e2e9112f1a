from pydantic_settings import BaseSettings
from pydantic import field_validator, Field
from pathlib import Path

# Ruta absoluta al archivo .env desde /app/config.py hacia la raíz
BASE_DIR = Path(__file__).resolve().parent.parent
ENV_PATH = BASE_DIR / ".env"

class Settings(BaseSettings):
    APP_NAME: str = "Twisted Bundles"
    DEBUG: bool = False
    LOG_LEVEL: str = Field("INFO", description="Nivel de logging")

    # Convención de fase del twist abeliano
    PHASE_SIGN: int = Field(-1, description="Orientación ε del twist (+1 o -1)")
    THETA_NORMALIZATION: str = Field("pi", description="Normalización del twist: pi o 2pi")

    # Verificaciones
    DEGREE_BOUND: int = Field(4, ge=1, description="Cota de grado para pertenencia al ideal")
    SAMPLE_DEGREE: int = Field(4, ge=3, description="Grado total máximo del producto en los muestreos")
    ORTHOGONAL_SAMPLE_DEGREE: int = Field(3, ge=3, description="Tope del grado de muestreo para el fibrado ortogonal")
    JACOBI_MODE: str = Field("ordered", description="Ternas para Jacobi: ordered (todas, con repeticiones) o combinations")
    OUTPUT_FORMAT: str = Field("text", description="Formato del reporte: json, md o text")

    # Datos de referencia
    DATA_DIR: Path = Field(BASE_DIR / "app" / "data", description="Directorio de fixtures JSON")

    @field_validator("*", mode="before")
    @classmethod
    def strip_whitespace(cls, value):
        return value.strip() if isinstance(value, str) else value

    @field_validator("PHASE_SIGN")
    @classmethod
    def check_sign(cls, value: int) -> int:
        if value not in (1, -1):
            raise ValueError("PHASE_SIGN debe ser 1 o -1")
        return value

    @field_validator("THETA_NORMALIZATION")
    @classmethod
    def check_normalization(cls, value: str) -> str:
        if value not in ("pi", "2pi"):
            raise ValueError("THETA_NORMALIZATION debe ser pi o 2pi")
        return value

    class Config:
        env_file = str(ENV_PATH)
        env_file_encoding = "utf-8"

settings = Settings()
