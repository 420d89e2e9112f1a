import json

import pytest
from click.testing import CliRunner

from app.commands.cli import cli


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "1.0.0" in result.output


@pytest.mark.slow
def test_verify_axioms_json(runner):
    result = runner.invoke(cli, ["verify", "--suite", "axioms", "--sample-degree", "3", "--format", "json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["suite"] == "axioms"
    assert payload["config"]["sample_degree"] == 3
    assert payload["config"]["jacobi_mode"] == "ordered"
    assert "fail" not in {check["status"] for check in payload["checks"]}


@pytest.mark.slow
def test_verify_writes_output_file(runner, tmp_path):
    target = tmp_path / "report.md"
    result = runner.invoke(cli, ["verify", "--suite", "axioms", "--sample-degree", "3", "--format", "md",
                                 "--output", str(target)])
    assert result.exit_code == 0
    assert result.output == ""
    assert target.read_text(encoding="utf-8").startswith("# Twisted Bundles: suite `axioms`")


def test_unknown_suite_is_a_usage_error(runner):
    result = runner.invoke(cli, ["verify", "--suite", "nope"])
    assert result.exit_code == 2


def test_bracket_of_gauge_generators(runner):
    result = runner.invoke(cli, ["bracket", "W01", "W11"])
    assert result.exit_code == 0, result.stderr
    assert result.stdout.strip() == "sqrt2*beta*W11"


def test_bracket_parse_error(runner):
    result = runner.invoke(cli, ["bracket", "z1 + + z2", "z3"])
    assert result.exit_code == 2
    assert "Error de sintaxis" in result.stderr
    assert "z1 + + z2\n     ^" in result.stderr


def test_bracket_unknown_identifier(runner):
    result = runner.invoke(cli, ["bracket", "n11", "z3"])
    assert result.exit_code == 2
    assert "n11" in result.stderr


def test_relations_listing(runner):
    result = runner.invoke(cli, ["relations"])
    assert result.exit_code == 0
    assert "  alpha • beta = w^-8 beta • alpha" in result.stdout
    assert "Ideal de relaciones:" in result.stdout
    assert "reglas de sustitución" in result.stdout


def test_relations_follow_the_orientation(runner):
    result = runner.invoke(cli, ["relations", "--sign", "+"])
    assert "  alpha • beta = w^8 beta • alpha" in result.stdout


@pytest.mark.slow
def test_table1_with_corrupted_fixture(runner, tmp_path, table1):
    data = table1.model_dump()
    data["entries"][0]["terms"][0]["coeff"] = "-sqrt2"
    fixture = tmp_path / "table1.json"
    fixture.write_text(json.dumps(data), encoding="utf-8")
    result = runner.invoke(cli, ["table1", "--fixture", str(fixture)])
    assert result.exit_code == 1
    assert "table1: fail (1: [K1,K2])" in result.stderr


def test_table1_with_invalid_fixture(runner, tmp_path):
    fixture = tmp_path / "table1.json"
    fixture.write_text("[]", encoding="utf-8")
    result = runner.invoke(cli, ["table1", "--fixture", str(fixture)])
    assert result.exit_code == 2


@pytest.mark.slow
def test_verify_instanton_suite(runner):
    result = runner.invoke(cli, ["verify", "--suite", "instanton"])
    assert result.exit_code == 0, result.output
    assert "Resultado:" in result.output
    assert " 0 fail" in result.output


def test_sample_degree_below_three_is_a_usage_error(runner):
    result = runner.invoke(cli, ["verify", "--suite", "axioms", "--sample-degree", "2"])
    assert result.exit_code == 2
