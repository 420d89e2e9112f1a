import json
import logging
import os
from functools import lru_cache
from itertools import groupby
from typing import Dict, List, Optional, Sequence

from jinja2 import Environment, FileSystemLoader, select_autoescape

from app.config import settings
from app.models.weight import PhaseConvention
from app.schemas.report_schema import CheckStatus, OutputFormat, Report, RunConfig, Table1Row

# Configurar logger
logger = logging.getLogger(__name__)


def _cell(value: Optional[str]) -> str:
    """Texto apto para una celda de tabla markdown"""
    if value is None:
        return ""
    return str(value).replace("|", "\\|").replace("\n", " ")


@lru_cache(maxsize=1)
def _get_templates_env() -> Environment:
    """Configura el entorno de Jinja2 para cargar templates"""
    templates_dir = os.path.join(os.path.dirname(os.path.dirname(__file__)), "templates")
    env = Environment(
        loader=FileSystemLoader(templates_dir),
        autoescape=select_autoescape(["html", "xml"]),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["cell"] = _cell
    return env


def convention_label(config: RunConfig) -> str:
    return PhaseConvention.from_labels(config.theta_normalization, config.sign).label()


def status_counts(report: Report) -> Dict[str, int]:
    counts = {status.value: 0 for status in CheckStatus}
    for check in report.checks:
        counts[check.status.value] += 1
    return counts


def render_report(report: Report, output_format: Optional[OutputFormat] = None) -> str:
    """
    Renderiza un reporte de verificación.

    Parámetros:
        report: reporte de la suite
        output_format: json, md o text; por defecto el de la configuración del reporte

    Retorna el texto listo para imprimir.
    """
    fmt = OutputFormat(output_format or report.config.output_format)
    if fmt == OutputFormat.JSON:
        return report.model_dump_json(indent=2) + "\n"
    template = "report.md.j2" if fmt == OutputFormat.MD else "report.txt.j2"
    try:
        return _get_templates_env().get_template(template).render(
            report=report,
            counts=status_counts(report),
            convention=convention_label(report.config),
            app_name=settings.APP_NAME,
        )
    except Exception as e:
        logger.error(f"Error al renderizar el reporte {report.suite}: {str(e)}")
        raise


def render_table1(
    rows: Sequence[Table1Row],
    config: RunConfig,
    title: str,
    output_format: Optional[OutputFormat] = None,
) -> str:
    """Tabla de corchetes por bloques, con los valores calculados, esperados y las diferencias"""
    fmt = OutputFormat(output_format or config.output_format)
    if fmt == OutputFormat.JSON:
        payload = {
            "title": title,
            "config": config.model_dump(mode="json"),
            "rows": [row.model_dump(mode="json") for row in rows],
        }
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    ordered: List[Table1Row] = sorted(rows, key=lambda row: (row.block, row.index))
    blocks = [(block, list(group)) for block, group in groupby(ordered, key=lambda row: row.block)]
    diffs = [row for row in rows if row.status == CheckStatus.FAIL]
    template = "table1.md.j2" if fmt == OutputFormat.MD else "table1.txt.j2"
    return _get_templates_env().get_template(template).render(
        title=title,
        blocks=blocks,
        diffs=diffs,
        convention=convention_label(config),
    )
