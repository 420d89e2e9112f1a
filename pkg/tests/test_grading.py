import pytest
from hypothesis import given, strategies as st

from app.models.weight import PhaseConvention, Weight
from app.schemas.report_schema import CheckStatus
from app.services.grading_service import braid_phase, star_phase, verify_phase_axioms, wedge, weight_box

weights = st.builds(Weight, st.integers(min_value=-6, max_value=6), st.integers(min_value=-6, max_value=6))
conventions = [PhaseConvention(n, s) for n in (1, 2) for s in (1, -1)]


@given(weights, weights, weights)
def test_wedge_is_alternating_and_bilinear(m, m2, m3):
    assert wedge(m, m) == 0
    assert wedge(m, m2) == -wedge(m2, m)
    assert wedge(m + m2, m3) == wedge(m, m3) + wedge(m2, m3)


@given(weights, weights)
def test_braid_is_antisymmetric(m, m2):
    conv = PhaseConvention()
    assert braid_phase(m, m2, conv) == -braid_phase(m2, m, conv)
    assert braid_phase(m, m2, conv) == 2 * star_phase(m, m2, conv)


def test_phase_scales_with_normalization():
    m, m2 = Weight(2, 0), Weight(0, 2)
    assert star_phase(m, m2, PhaseConvention(1, -1)) == -4
    assert star_phase(m, m2, PhaseConvention(2, -1)) == -8
    assert star_phase(m, m2, PhaseConvention(1, 1)) == 4


def test_weight_box():
    box = weight_box(1)
    assert len(box) == 9
    assert box[0] == Weight(-1, -1) and box[-1] == Weight(1, 1)


@pytest.mark.parametrize("conv", conventions, ids=lambda c: c.label())
def test_phase_axioms_hold(conv):
    records = verify_phase_axioms(2, conv)
    assert [r.name for r in records] == [
        "phase.cocycle", "phase.unitality", "phase.yang_baxter", "phase.triangularity",
    ]
    assert all(r.status == CheckStatus.PASS for r in records)


def test_corrupted_cocycle_is_reported():
    records = verify_phase_axioms(2, PhaseConvention(), phase=lambda a, b: a.m1 * a.m1 * b.m2)
    cocycle = records[0]
    assert cocycle.status == CheckStatus.FAIL
    assert cocycle.witness.startswith("m=")


def test_invalid_bound():
    with pytest.raises(ValueError):
        verify_phase_axioms(0, PhaseConvention())


def test_convention_labels():
    conv = PhaseConvention.from_labels("2pi", "+")
    assert conv.factor == 2
    assert conv.label() == "n_c=2, ε=+"
    with pytest.raises(ValueError):
        PhaseConvention.from_labels("3pi", "-")
