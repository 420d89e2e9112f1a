import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from app.config import settings
from app.schemas.fixture_schema import FIXTURE_SCHEMA_VERSION, So5Pattern, Table1Fixture
from app.utils.exceptions import FixtureError

# Configurar logger
logger = logging.getLogger(__name__)

TABLE1_FILE = "table1.json"
SO5_PATTERN_FILE = "so5_pattern.json"

Model = TypeVar("Model", bound=BaseModel)


def _load(path: Path, model: Type[Model]) -> Model:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        logger.error(f"Fixture no encontrado: {path}")
        raise FixtureError(f"No existe el archivo {path}")
    except json.JSONDecodeError as e:
        logger.error(f"JSON inválido en {path}: {str(e)}")
        raise FixtureError(f"JSON inválido en {path}: {str(e)}")
    try:
        fixture = model.model_validate(data)
    except ValidationError as e:
        logger.error(f"Fixture {path.name} no cumple el esquema: {str(e)}")
        raise FixtureError(f"{path.name} no cumple el esquema: {e.error_count()} errores")
    if fixture.schema_version != FIXTURE_SCHEMA_VERSION:
        raise FixtureError(f"{path.name}: versión de esquema {fixture.schema_version}, se esperaba {FIXTURE_SCHEMA_VERSION}")
    logger.debug(f"Fixture {path.name} cargado")
    return fixture


def load_table1(path: Optional[Path] = None) -> Table1Fixture:
    """
    Carga la tabla de corchetes trenzados.

    Parámetros:
        path: archivo alternativo; por defecto `DATA_DIR/table1.json`
    """
    if path is None:
        return _default_table1()
    return _load(Path(path), Table1Fixture)


def load_so5_pattern(path: Optional[Path] = None) -> So5Pattern:
    """Carga las constantes de estructura N_rs esperadas"""
    if path is None:
        return _default_so5_pattern()
    return _load(Path(path), So5Pattern)


@lru_cache(maxsize=1)
def _default_table1() -> Table1Fixture:
    return _load(Path(settings.DATA_DIR) / TABLE1_FILE, Table1Fixture)


@lru_cache(maxsize=1)
def _default_so5_pattern() -> So5Pattern:
    return _load(Path(settings.DATA_DIR) / SO5_PATTERN_FILE, So5Pattern)
