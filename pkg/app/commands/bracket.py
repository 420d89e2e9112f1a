import logging

import click

from app.commands.common import convention_options, handle_engine_errors
from app.schemas.report_schema import RunConfig
from app.services.expression_service import GRAMMAR_HELP, ExpressionContext, bracket_values, evaluate, render_value
from app.services.suite_service import BUNDLES, build_bundle

# Configurar logger
logger = logging.getLogger(__name__)


@click.command("bracket", epilog="\b\n" + GRAMMAR_HELP)
@click.argument("left")
@click.argument("right")
@click.option("--bundle", type=click.Choice(list(BUNDLES)), default="instanton", show_default=True)
@convention_options
@handle_engine_errors
def bracket(left: str, right: str, bundle: str, **options):
    """Calcula el corchete trenzado [LEFT, RIGHT] en el fibrado elegido."""
    config = RunConfig.from_settings(suite=bundle, **options)
    spec = build_bundle(bundle, config)
    context = ExpressionContext(spec)
    result = bracket_values(evaluate(left, context), evaluate(right, context), context)
    logger.debug(f"Corchete [{left}, {right}] en {bundle} calculado")
    click.echo(render_value(result, spec))
