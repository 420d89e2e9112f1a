import functools
import logging
from typing import Callable

import click
from pydantic import ValidationError

from app.schemas.report_schema import OutputFormat
from app.utils.exceptions import ExpressionParseError, FixtureError, RelationError, UnboundIdentifierError

# Configurar logger
logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def convention_options(func: Callable) -> Callable:
    """Opciones de la convención de fase del twist"""
    func = click.option(
        "--sign", type=click.Choice(["+", "-"]), default=None, help="Orientación ε del twist (por defecto PHASE_SIGN)"
    )(func)
    func = click.option(
        "--theta-normalization", type=click.Choice(["pi", "2pi"]), default=None,
        help="Normalización del twist (por defecto THETA_NORMALIZATION)",
    )(func)
    return func


def format_option(func: Callable) -> Callable:
    return click.option(
        "--format", "output_format", type=click.Choice([fmt.value for fmt in OutputFormat]), default=None,
        help="Formato de salida (por defecto OUTPUT_FORMAT)",
    )(func)


def handle_engine_errors(func: Callable) -> Callable:
    """Errores de uso, sintaxis y datos terminan con código 2"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ExpressionParseError as e:
            click.echo(f"Error de sintaxis: {e.message}", err=True)
            click.echo(e.highlight(), err=True)
            raise SystemExit(EXIT_USAGE)
        except UnboundIdentifierError as e:
            click.echo(f"Error: {e.message}", err=True)
            raise SystemExit(EXIT_USAGE)
        except (FixtureError, RelationError) as e:
            click.echo(f"Error: {e.message}", err=True)
            raise SystemExit(EXIT_USAGE)
        except ValidationError as e:
            click.echo(f"Configuración inválida: {e.error_count()} errores", err=True)
            raise SystemExit(EXIT_USAGE)

    return wrapper
