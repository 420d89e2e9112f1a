import logging
from pathlib import Path
from typing import Optional

import click

from app.commands.common import EXIT_FAIL, EXIT_PASS, convention_options, format_option, handle_engine_errors
from app.schemas.report_schema import CheckStatus, RunConfig
from app.services.report_service import render_table1
from app.services.suite_service import BUNDLES, table1_rows

# Configurar logger
logger = logging.getLogger(__name__)


@click.command("table1")
@click.option("--bundle", type=click.Choice(list(BUNDLES)), default="instanton", show_default=True)
@convention_options
@click.option("--degree-bound", type=click.IntRange(min=1), default=None, help="Cota de grado para el ideal")
@format_option
@click.option("--omega-one", is_flag=True, help="Tabla clásica: todas las fases iguales a 1")
@click.option("--printed", "use_printed", is_flag=True, help="Comparar contra los valores impresos")
@click.option("--fixture", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="Fixture alternativo de la tabla")
@handle_engine_errors
def table1(bundle: str, fixture: Optional[Path], **options):
    """Imprime los 25 corchetes trenzados calculados junto al fixture y sus diferencias."""
    config = RunConfig.from_settings(suite=bundle, **options)
    records, rows = table1_rows(config, bundle, fixture)
    title = f"Corchetes trenzados de los generadores gauge ({bundle})"
    click.echo(render_table1(rows, config, title), nl=False)
    failed = [record for record in records if record.status == CheckStatus.FAIL]
    for record in failed:
        click.echo(f"{record.name}: fail ({record.witness})", err=True)
    raise SystemExit(EXIT_FAIL if failed else EXIT_PASS)
