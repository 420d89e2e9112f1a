import logging
from typing import Optional

import click

from app.commands.common import convention_options, format_option, handle_engine_errors
from app.schemas.report_schema import RunConfig
from app.services.report_service import render_report
from app.services.suite_service import SUITES, run_suite

# Configurar logger
logger = logging.getLogger(__name__)


@click.command("verify")
@click.option("--suite", type=click.Choice(SUITES), default="all", show_default=True, help="Suite a ejecutar")
@convention_options
@click.option("--degree-bound", type=click.IntRange(min=1), default=None, help="Cota de grado para el ideal")
@click.option("--sample-degree", type=click.IntRange(min=3), default=None, help="Grado total de los muestreos (mínimo 3)")
@format_option
@click.option("--omega-one", is_flag=True, help="Comparar la tabla de corchetes en el límite clásico ω = 1")
@click.option("--printed", "use_printed", is_flag=True, help="Usar los valores impresos de la tabla")
@click.option("--jacobi", "jacobi_mode", type=click.Choice(["combinations", "ordered"]), default=None,
              help="Ternas para la identidad de Jacobi")
@click.option("--timing", is_flag=True, help="Incluir el tiempo de ejecución")
@click.option("--output", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Escribir el reporte en un archivo")
@handle_engine_errors
def verify(output: Optional[str], **options):
    """Ejecuta una suite de verificación y emite el reporte; sale con 1 si alguna verificación falla."""
    config = RunConfig.from_settings(**options)
    report = run_suite(config)
    text = render_report(report)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"Reporte escrito en {output}")
    else:
        click.echo(text, nl=False)
    raise SystemExit(report.exit_code)
