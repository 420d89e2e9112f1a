import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from app.models.weight import PhaseConvention
from app.services.fixture_service import load_so5_pattern, load_table1
from app.services.instanton_service import build_instanton
from app.services.jordanian_service import build_line_bundle, build_poincare_weyl
from app.services.orthogonal_service import build_orthogonal

# Las operaciones simbólicas son lentas para los plazos por defecto de hypothesis
hypothesis_settings.register_profile(
    "algebra", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
hypothesis_settings.load_profile("algebra")


@pytest.fixture(scope="session")
def conv():
    return PhaseConvention()


@pytest.fixture(scope="session")
def instanton():
    return build_instanton()


@pytest.fixture(scope="session")
def orthogonal():
    return build_orthogonal()


@pytest.fixture(scope="session")
def table1():
    return load_table1()


@pytest.fixture(scope="session")
def so5_pattern():
    return load_so5_pattern()


@pytest.fixture(scope="session")
def line_bundle():
    return build_line_bundle(2)


@pytest.fixture(scope="session")
def poincare_weyl():
    return build_poincare_weyl(2)
