import json

import pytest

from app.schemas.report_schema import CheckRecord, CheckStatus, OutputFormat, Report, RunConfig, Table1Row
from app.services.report_service import render_report, render_table1, status_counts
from app.services.suite_service import axiom_degree


@pytest.fixture
def report():
    config = RunConfig(suite="axioms", timing=True)
    return Report(
        suite="axioms",
        config=config,
        wall_time=1.234,
        checks=[
            CheckRecord.build("phase.cocycle", "additive 2-cocycle", note="729 ternas"),
            CheckRecord.build("phase.triangularity", "braid antisymmetry", witness="m=(1,0), m'=(0|1)"),
            CheckRecord.skipped("equivariance", "derived equivariance", "Sin campos"),
        ],
    )


def test_status_and_exit_code(report):
    assert not report.passed
    assert report.exit_code == 1
    assert [c.name for c in report.failures()] == ["phase.triangularity"]
    assert status_counts(report) == {"pass": 1, "fail": 1, "skipped": 1}
    clean = report.model_copy(update={"checks": report.checks[:1] + report.checks[2:]})
    assert clean.exit_code == 0


def test_json_report(report):
    payload = json.loads(render_report(report, OutputFormat.JSON))
    assert payload["schema_version"] == "1.0"
    assert payload["config"]["sign"] == "-"
    assert payload["checks"][1]["status"] == "fail"
    assert payload["wall_time"] == 1.234


def test_text_report(report):
    text = render_report(report)
    assert "Convención: n_c=1, ε=-" in text
    assert "phase.cocycle: pass (729 ternas)" in text
    assert "    testigo: m=(1,0), m'=(0|1)" in text
    assert "Resultado: 1 pass, 1 fail, 1 skipped" in text
    assert "Tiempo: 1.23 s" in text


def test_markdown_report_escapes_cells(report):
    text = render_report(report, OutputFormat.MD)
    assert "| `phase.triangularity` | fail |" in text
    assert "m'=(0\\|1)" in text


def test_table1_rendering():
    config = RunConfig(suite="instanton")
    rows = [
        Table1Row(index=2, block=1, left="K1", right="W01", expected="2*x*W01", computed="2*x*W01",
                  status=CheckStatus.PASS, conjugate="0", conjugate_status=CheckStatus.PASS),
        Table1Row(index=1, block=1, left="K1", right="K2", expected="sqrt2*alphac*W10", computed="0",
                  status=CheckStatus.FAIL, diff="-sqrt2*alphac*W10"),
    ]
    text = render_table1(rows, config, "Corchetes")
    assert text.index(" 1. [K1, K2]") < text.index(" 2. [K1, W01]")
    assert "    diferencia: -sqrt2*alphac*W10" in text
    assert "Diferencias: 1" in text

    markdown = render_table1(rows, config, "Corchetes", OutputFormat.MD)
    assert "## Diferencias" in markdown

    payload = json.loads(render_table1(rows, config, "Corchetes", OutputFormat.JSON))
    assert [row["index"] for row in payload["rows"]] == [2, 1]


def test_run_config_defaults():
    config = RunConfig(suite="all")
    assert config.sample_degree == 4
    assert config.orthogonal_sample_degree == 3
    assert config.jacobi_mode == "ordered"


def test_run_config_rejects_shallow_sampling():
    with pytest.raises(ValueError):
        RunConfig(suite="axioms", sample_degree=2)


def test_orthogonal_axioms_use_the_capped_degree():
    config = RunConfig(suite="axioms", sample_degree=5)
    assert axiom_degree("instanton", config) == 5
    assert axiom_degree("orthogonal", config) == 3
    assert axiom_degree("orthogonal", RunConfig(suite="axioms", sample_degree=3, orthogonal_sample_degree=4)) == 3
