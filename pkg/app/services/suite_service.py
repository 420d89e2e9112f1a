import logging
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from app.models.bundle import BundleSpec
from app.models.poly import Poly
from app.models.weight import PhaseConvention
from app.schemas.fixture_schema import So5Pattern, Table1Fixture
from app.schemas.report_schema import CheckRecord, Report, RunConfig, Table1Row
from app.services.bundle_checks_service import (
    check_adjoint_weights,
    check_base_commutation,
    check_derived_equivariance,
    check_gauge_closure_and_dim,
    check_module_brackets,
    check_so5,
    check_table1,
    check_verticality,
    compare_structure_constants,
    twisted_gauge,
)
from app.services.derivation_service import BracketCache, verify_braided_lie_axioms
from app.services.dmap_service import verify_d_isomorphism
from app.services.fixture_service import load_so5_pattern, load_table1
from app.services.grading_service import verify_phase_axioms
from app.services.instanton_service import build_instanton
from app.services.jordanian_service import build_line_bundle, build_poincare_weyl, verify_jordanian_suite
from app.services.orthogonal_service import build_orthogonal
from app.services.starprod_service import verify_star_axioms

# Configurar logger
logger = logging.getLogger(__name__)

SUITES = ("axioms", "instanton", "orthogonal", "jordanian", "all")
BUNDLES: Dict[str, Callable[[Optional[PhaseConvention]], BundleSpec]] = {
    "instanton": build_instanton,
    "orthogonal": build_orthogonal,
}
PHASE_BOUND = 4
LINE_BUNDLE_N = 3
POINCARE_WEYL_N = (2, 3)
JORDANIAN_SAMPLE_DEGREE = 3


def convention_of(config: RunConfig) -> PhaseConvention:
    return PhaseConvention.from_labels(config.theta_normalization, config.sign)


def _prefixed(records: List[CheckRecord], prefix: str) -> List[CheckRecord]:
    return [record.model_copy(update={"name": f"{prefix}.{record.name}"}) for record in records]


def build_bundle(name: str, config: RunConfig) -> BundleSpec:
    """Construye el fibrado `instanton` u `orthogonal` con la convención de la corrida"""
    try:
        builder = BUNDLES[name]
    except KeyError:
        raise ValueError(f"Fibrado desconocido: {name}")
    return builder(convention_of(config))


def axiom_degree(name: str, config: RunConfig) -> int:
    """Grado de muestreo de los axiomas; el fibrado ortogonal usa su propio tope"""
    if name == "orthogonal":
        return min(config.sample_degree, config.orthogonal_sample_degree)
    return config.sample_degree


def run_axioms(config: RunConfig) -> List[CheckRecord]:
    """Axiomas de fase y del producto estrella en ambos fibrados"""
    conv = convention_of(config)
    records = verify_phase_axioms(PHASE_BOUND, conv)
    for name in BUNDLES:
        spec = build_bundle(name, config)
        records.extend(_prefixed(verify_star_axioms(spec.table, axiom_degree(name, config), conv), spec.name))
    return records


def leibniz_samples(spec: BundleSpec) -> List[Poly]:
    """Coordenadas base y los primeros generadores del álgebra"""
    samples = [spec.base[name] for name in spec.base_order]
    samples += [Poly.gen(spec.table, pos) for pos in range(min(4, spec.table.size))]
    return samples


def run_bundle(
    spec: BundleSpec,
    config: RunConfig,
    table1: Table1Fixture,
    pattern: So5Pattern,
) -> Tuple[List[CheckRecord], List[Table1Row], Dict]:
    """
    Suite completa de un fibrado de so(5).

    Retorna los registros, las filas de la tabla de corchetes y las constantes N_rs calculadas.
    """
    conv = spec.convention
    bound = config.degree_bound
    cache = BracketCache(conv)
    logger.info(f"Suite {spec.name} con {conv.label()} y cota {bound}")
    records: List[CheckRecord] = []

    so5_records, constants = check_so5(spec, pattern)
    records.extend(so5_records)
    records.extend(check_verticality(spec, bound))
    records.extend(check_adjoint_weights(spec, bound))
    base_records, _ = check_base_commutation(spec, bound)
    records.extend(base_records)

    table_records, rows = check_table1(
        spec, table1, bound, use_printed=config.use_printed, omega_one=config.omega_one, cache=cache
    )
    records.extend(table_records)

    family = twisted_gauge(spec)
    records.extend(verify_braided_lie_axioms(
        family, spec.relations, conv, bound, leibniz_samples(spec), config.jacobi_mode
    ))
    records.extend(verify_d_isomorphism(
        spec.gauge, [spec.base[name] for name in spec.base_order], spec.relations, conv, bound
    ))
    records.extend(check_gauge_closure_and_dim(spec, n_max=1, cache=cache))
    records.extend(check_module_brackets(spec, bound, cache=cache))
    records.extend(check_derived_equivariance(spec, bound))
    return _prefixed(records, spec.name), rows, constants


def run_jordanian(config: RunConfig) -> List[CheckRecord]:
    """Fibrado de línea y fibrados de Poincaré–Weyl con el twist jordaniano"""
    records = verify_jordanian_suite(build_line_bundle(LINE_BUNDLE_N), JORDANIAN_SAMPLE_DEGREE, config.degree_bound)
    for n in POINCARE_WEYL_N:
        records.extend(verify_jordanian_suite(build_poincare_weyl(n), JORDANIAN_SAMPLE_DEGREE, config.degree_bound))
    return records


def run_suite(config: RunConfig) -> Report:
    """
    Ejecuta la suite pedida y arma el reporte.

    Parámetros:
        config: configuración efectiva de la corrida (suite, convención, cotas, formato)

    Retorna el reporte con las verificaciones en orden determinista.
    """
    if config.suite not in SUITES:
        raise ValueError(f"Suite desconocida: {config.suite}")
    started = time.perf_counter()
    records: List[CheckRecord] = []
    try:
        if config.suite in ("axioms", "all"):
            records.extend(run_axioms(config))
        if config.suite in ("instanton", "orthogonal", "all"):
            table1 = load_table1()
            pattern = load_so5_pattern()
            names = list(BUNDLES) if config.suite == "all" else [config.suite]
            constants = {}
            for name in names:
                bundle_records, _, constants[name] = run_bundle(build_bundle(name, config), config, table1, pattern)
                records.extend(bundle_records)
            if len(constants) == 2:
                records.append(compare_structure_constants(constants["instanton"], constants["orthogonal"]))
        if config.suite in ("jordanian", "all"):
            records.extend(run_jordanian(config))
    except Exception as e:
        logger.error(f"Error al ejecutar la suite {config.suite}: {str(e)}")
        raise

    report = Report(
        suite=config.suite,
        checks=records,
        config=config,
        wall_time=round(time.perf_counter() - started, 3) if config.timing else None,
    )
    failures = report.failures()
    if failures:
        logger.warning(f"Suite {config.suite}: {len(failures)} verificaciones fallidas")
    logger.info(f"Suite {config.suite} terminada: {len(records)} verificaciones")
    return report


def table1_rows(
    config: RunConfig,
    bundle: str = "instanton",
    fixture_path: Optional[Path] = None,
) -> Tuple[List[CheckRecord], List[Table1Row]]:
    """Tabla de corchetes calculada para un fibrado, junto con sus registros"""
    spec = build_bundle(bundle, config)
    return check_table1(
        spec, load_table1(fixture_path), config.degree_bound, use_printed=config.use_printed, omega_one=config.omega_one
    )
