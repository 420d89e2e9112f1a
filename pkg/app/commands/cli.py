import click

from app.commands import bracket, relations, table1, verify
from app.config import settings


@click.group(help=f"{settings.APP_NAME}: verificación simbólica de fibrados principales deformados.")
@click.version_option("1.0.0", prog_name=settings.APP_NAME)
def cli():
    pass


# Incluir todos los comandos
cli.add_command(verify.verify)
cli.add_command(table1.table1)
cli.add_command(bracket.bracket)
cli.add_command(relations.relations)
