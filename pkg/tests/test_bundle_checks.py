import json

import pytest

from app.models.weight import PhaseConvention
from app.schemas.fixture_schema import Table1Fixture
from app.schemas.report_schema import CheckStatus, RunConfig
from app.services.bundle_checks_service import (
    check_base_commutation,
    check_gauge_closure_and_dim,
    check_so5,
    check_table1,
    check_verticality,
    compare_structure_constants,
)
from app.services.derivation_service import BracketCache
from app.services.fixture_service import load_table1
from app.services.instanton_service import build_instanton
from app.services.suite_service import run_bundle
from app.utils.exceptions import FixtureError


def by_name(records):
    return {record.name: record for record in records}


@pytest.fixture(scope="module")
def instanton_table1(instanton, table1):
    return check_table1(instanton, table1, 4, cache=BracketCache(instanton.convention))


def test_so5_relations_in_both_realizations(instanton, orthogonal, so5_pattern):
    first_records, first = check_so5(instanton, so5_pattern)
    second_records, second = check_so5(orthogonal, so5_pattern)
    assert all(r.status == CheckStatus.PASS for r in first_records + second_records)
    assert [r.name for r in first_records] == [
        "so5.cartan", "so5.cartan_action", "so5.opposite_roots", "so5.structure_constants",
    ]
    assert compare_structure_constants(first, second).status == CheckStatus.PASS


def test_structure_constant_mismatch_is_reported(instanton, so5_pattern):
    _, constants = check_so5(instanton, so5_pattern)
    pair = next(key for key, value in constants.items() if value)
    altered = {**constants, pair: -constants[pair]}
    record = compare_structure_constants(constants, altered)
    assert record.status == CheckStatus.FAIL
    assert str(pair) in record.witness


def test_verticality(instanton):
    assert all(r.status == CheckStatus.PASS for r in check_verticality(instanton, 4))


def test_base_commutation(instanton):
    records, table = check_base_commutation(instanton, 4)
    checks = by_name(records)
    assert checks["base.commutation"].status == CheckStatus.PASS
    assert checks["phase.pairing"].status == CheckStatus.PASS
    assert dict(table)[("alpha", "beta")] == -8
    assert [r.name for r in records] == ["base.commutation", "phase.pairing"]
    assert checks["phase.pairing"].note == "α•β = ω^-8 β•α; la relación impresa e^{2πiθ} corresponde a ε=+1"


def test_printed_orientation_matches_positive_sign():
    spec = build_instanton(PhaseConvention.from_labels("pi", "+"))
    records, table = check_base_commutation(spec, 4)
    pairing = by_name(records)["phase.pairing"]
    assert dict(table)[("alpha", "beta")] == 8
    assert pairing.status == CheckStatus.PASS
    assert pairing.note.endswith("coincide")


def test_pairing_flags_the_inconsistent_normalization():
    spec = build_instanton(PhaseConvention.from_labels("2pi", "-"))
    records, _ = check_base_commutation(spec, 4)
    assert by_name(records)["phase.pairing"].status == CheckStatus.FAIL


def test_gauge_closure_and_dimension(instanton):
    checks = by_name(check_gauge_closure_and_dim(instanton, n_max=2))
    assert all(r.status == CheckStatus.PASS for r in checks.values())
    assert checks["gauge.dimension"].note == "d(2,0)=10, d(2,1)=35, d(2,2)=81"
    with pytest.raises(ValueError):
        check_gauge_closure_and_dim(instanton, n_max=-1)


def test_table1_reproduced(instanton_table1):
    records, rows = instanton_table1
    assert [r.name for r in records] == ["table1", "table1.conjugates", "table1.classical_oracle", "table1.weights"]
    assert all(r.status == CheckStatus.PASS for r in records)
    assert len(rows) == 25
    assert all(row.status == CheckStatus.PASS and row.diff is None for row in rows)
    assert all(row.conjugate_status == CheckStatus.PASS for row in rows)


def test_table1_classical_limit(instanton, table1):
    records, rows = check_table1(instanton, table1, 4, omega_one=True)
    assert records[0].name == "table1.classical"
    assert records[0].status == CheckStatus.PASS
    assert all(row.conjugate is None for row in rows)


@pytest.mark.slow
def test_corrupted_entry_fails_one_row(instanton, table1):
    data = table1.model_dump()
    data["entries"][0]["terms"][0]["coeff"] = "-sqrt2"
    corrupted = Table1Fixture.model_validate(data)
    records, rows = check_table1(instanton, corrupted, 4)
    assert by_name(records)["table1"].status == CheckStatus.FAIL
    failing = [row for row in rows if row.status == CheckStatus.FAIL]
    assert [(row.index, row.left, row.right) for row in failing] == [(1, "K1", "K2")]
    assert failing[0].diff is not None


@pytest.mark.slow
def test_opposite_orientation_fails(table1):
    spec = build_instanton(PhaseConvention.from_labels("pi", "+"))
    records, _ = check_table1(spec, table1, 4)
    assert by_name(records)["table1"].status == CheckStatus.FAIL


@pytest.mark.slow
def test_printed_values_fail(instanton, table1):
    records, rows = check_table1(instanton, table1, 4, use_printed=True)
    assert by_name(records)["table1"].status == CheckStatus.FAIL
    errata = {index for index, entry in enumerate(table1.entries, start=1) if entry.has_errata}
    assert {row.index for row in rows if row.status == CheckStatus.FAIL} <= errata


def test_fixture_loading_errors(tmp_path):
    missing = tmp_path / "missing.json"
    with pytest.raises(FixtureError):
        load_table1(missing)

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(FixtureError):
        load_table1(broken)

    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"schema_version": "1.0", "entries": [{"left": "K9", "right": "K1"}]}), encoding="utf-8")
    with pytest.raises(FixtureError):
        load_table1(wrong)

    old = tmp_path / "old.json"
    old.write_text(json.dumps({"schema_version": "0.1", "entries": []}), encoding="utf-8")
    with pytest.raises(FixtureError):
        load_table1(old)


@pytest.mark.slow
def test_full_orthogonal_suite(orthogonal, table1, so5_pattern):
    records, rows, constants = run_bundle(orthogonal, RunConfig(suite="orthogonal"), table1, so5_pattern)
    failing = [record.name for record in records if record.status == CheckStatus.FAIL]
    assert failing == []
    assert len(rows) == 25
    assert all(row.status == CheckStatus.PASS for row in rows)
    assert constants
    names = {record.name for record in records}
    for name in (
        "so5.structure_constants", "gauge.verticality", "base.commutation", "phase.pairing", "table1",
        "braided.jacobi", "braided.leibniz", "dmap.bracket", "gauge.dimension", "module.bracket_law",
        "equivariance.commutation",
    ):
        assert f"orthogonal.{name}" in names


def test_errata_entries_carry_a_note(table1):
    entries = {(entry.left, entry.right): entry for entry in table1.entries}
    entry = entries[("W1m1", "W11")]
    assert entry.has_errata
    assert [(t.coeff, t.omega, t.printed_omega) for t in entry.terms] == [("-sqrt2", -8, -4)]
    assert "−√2·e^{−iπθ}" in entry.note
    assert all(e.note for e in table1.entries if e.has_errata)
