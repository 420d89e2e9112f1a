import click

from app.commands.common import convention_options, handle_engine_errors
from app.models.poly import RelationSet
from app.schemas.report_schema import RunConfig
from app.services.starprod_service import commutation_table
from app.services.suite_service import BUNDLES, build_bundle


@click.command("relations")
@click.option("--bundle", type=click.Choice(list(BUNDLES)), default="instanton", show_default=True)
@convention_options
@handle_engine_errors
def relations(bundle: str, **options):
    """Lista las relaciones de conmutación de la base y los generadores del ideal."""
    config = RunConfig.from_settings(suite=bundle, **options)
    spec = build_bundle(bundle, config)
    base = {name: spec.base[name] for name in spec.base_order}
    click.echo(f"Conmutación de la base ({spec.convention.label()}):")
    for (left, right), k in commutation_table(base, spec.convention):
        if k and spec.base_order.index(left) < spec.base_order.index(right):
            click.echo(f"  {left} • {right} = w^{k} {right} • {left}")
    click.echo("Ideal de relaciones:")
    for label, relation in zip(spec.relations.labels, spec.relations.relations):
        click.echo(f"  {label}: {relation.render_classical()} = 0")
    if spec.relations.mode == RelationSet.SUBSTITUTION:
        click.echo(f"  ({len(spec.relations.rules)} reglas de sustitución)")
