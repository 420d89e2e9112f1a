import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.models.bundle import ROOTS, BundleSpec, root_field_name
from app.models.derivation import Derivation, DerivationMode
from app.models.poly import Poly
from app.models.scalar import Scalar
from app.schemas.fixture_schema import So5Pattern, Table1Entry, Table1Fixture, Table1Term
from app.schemas.report_schema import CheckRecord, CheckStatus, Table1Row
from app.services.derivation_service import (
    BracketCache,
    apply,
    bracket_plain,
    derivation_star,
    difference_bound,
    module_act,
    plain_apply,
)
from app.services.dmap_service import d_apply
from app.services.expression_service import parse_scalar, render_derivation, render_module_terms
from app.services.gauge_service import (
    ModuleTerm,
    express_in_basis,
    gauge_dimension,
    module_combination,
    scalar_rank,
)
from app.services.grading_service import braid_phase, star_phase
from app.services.polyalg_service import vanishes_mod
from app.services.starprod_service import commutation_table, star
from app.utils.exceptions import EngineFault

# Configurar logger
logger = logging.getLogger(__name__)

Root = Tuple[int, int]
MODULE_BRACKET_PAIRS = (("W11", "W10"), ("K1", "W01"), ("W01", "Wm1m1"))
MODULE_BRACKET_BASE = ("alpha", "beta", "x", "alphac")


def twisted_gauge(spec: BundleSpec) -> Dict[str, Derivation]:
    """Generadores gauge trenzados K̃_j = D(K_j), W̃_r = D(W_r)"""
    return {name: d_apply(X).relabel(name) for name, X in spec.gauge.items()}


def _vanishing_bound(X: Derivation, spec: BundleSpec, degree_bound: int) -> Optional[int]:
    return difference_bound(X, Derivation.zero(X.table, X.mode), spec.relations, degree_bound, spec.convention)


# so(5)

def so5_structure_constants(spec: BundleSpec) -> Tuple[Dict[Tuple[Root, Root], int], List[str]]:
    """
    N_rs de [E_r, E_s] = N_rs E_{r+s} calculados con el conmutador clásico.

    Retorna el mapa de constantes (0 si r + s no es raíz) y la lista de pares cuyo
    corchete no es de esa forma.
    """
    fields = spec.symmetry
    E = {r: fields[root_field_name("E", r)] for r in ROOTS}
    constants: Dict[Tuple[Root, Root], int] = {}
    problems: List[str] = []
    for r, s in itertools.combinations(ROOTS, 2):
        total = (r[0] + s[0], r[1] + s[1])
        if total == (0, 0):
            continue
        bracket = bracket_plain(E[r], E[s])
        if total not in ROOTS:
            constants[(r, s)] = 0
            if not bracket.is_zero():
                problems.append(f"[E{r}, E{s}] ≠ 0")
            continue
        target = E[total]
        if bracket == target:
            constants[(r, s)] = 1
        elif bracket == -target:
            constants[(r, s)] = -1
        else:
            problems.append(f"[E{r}, E{s}] no es ±E{total}")
    return constants, problems


def check_so5(spec: BundleSpec, pattern: So5Pattern) -> Tuple[List[CheckRecord], Dict[Tuple[Root, Root], int]]:
    """
    Verifica los 45 corchetes de {H₁, H₂, E_r} contra las relaciones de so(5).

    Retorna los registros y las constantes N_rs calculadas.
    """
    fields = spec.symmetry
    H = (fields["H1"], fields["H2"])
    E = {r: fields[root_field_name("E", r)] for r in ROOTS}
    records = []
    logger.info(f"Relaciones de so(5) en {spec.name}")

    witness = None if bracket_plain(H[0], H[1]).is_zero() else "[H1, H2] ≠ 0"
    records.append(CheckRecord.build("so5.cartan", "[H1,H2] = 0", witness))

    witness = None
    for j, r in itertools.product((0, 1), ROOTS):
        if bracket_plain(H[j], E[r]) != E[r].scale(Scalar.rational(r[j])):
            witness = f"[H{j + 1}, E{r}] ≠ {r[j]}·E{r}"
            break
    records.append(CheckRecord.build("so5.cartan_action", "[H_j,E_r] = r_j E_r", witness, f"{2 * len(ROOTS)} corchetes"))

    witness = None
    opposite = [(r, s) for r, s in itertools.combinations(ROOTS, 2) if (r[0] + s[0], r[1] + s[1]) == (0, 0)]
    for r, s in opposite:
        expected = H[0].scale(Scalar.rational(r[0])) + H[1].scale(Scalar.rational(r[1]))
        if bracket_plain(E[r], E[s]) != expected:
            witness = f"[E{r}, E{s}] ≠ {r[0]}H1 + {r[1]}H2"
            break
    records.append(CheckRecord.build("so5.opposite_roots", "[E_r,E_-r] = r1H1 + r2H2", witness, f"{len(opposite)} corchetes"))

    constants, problems = so5_structure_constants(spec)
    witness = "; ".join(problems) if problems else None
    if witness is None:
        mismatches = [
            f"N{r}{s} = {value}, esperado {pattern.lookup(r, s)}"
            for (r, s), value in constants.items()
            if value != pattern.lookup(r, s)
        ]
        witness = "; ".join(mismatches) if mismatches else None
    records.append(CheckRecord.build("so5.structure_constants", "[E_r,E_s] = N_rs E_{r+s}", witness,
                                     f"{len(constants)} corchetes; total 45 con los anteriores"))
    return records, constants


def compare_structure_constants(
    first: Mapping[Tuple[Root, Root], int], second: Mapping[Tuple[Root, Root], int]
) -> CheckRecord:
    """Las dos realizaciones de so(5) deben dar las mismas constantes N_rs"""
    diffs = [f"{pair}: {first.get(pair)} vs {second.get(pair)}" for pair in sorted(set(first) | set(second))
             if first.get(pair) != second.get(pair)]
    return CheckRecord.build("so5.realizations_agree", "identical N_rs in both realizations",
                             "; ".join(diffs) if diffs else None, f"{len(first)} constantes")


# Verticalidad y pesos

def check_verticality(spec: BundleSpec, degree_bound: int) -> List[CheckRecord]:
    """Cada generador gauge, clásico y trenzado, anula las cinco coordenadas base módulo el ideal"""
    conv = spec.convention
    twisted = twisted_gauge(spec)
    witness = None
    count = 0
    used = 0
    for name, G in spec.gauge.items():
        for b_name in spec.base_order:
            b = spec.base[b_name]
            for label, value in ((name, plain_apply(G, b)), (f"D({name})", apply(twisted[name], b, conv))):
                count += 1
                found = vanishes_mod(value, spec.relations, degree_bound)
                if found is None:
                    witness = witness or f"{label}({b_name}) = {value.render_classical()}"
                else:
                    used = max(used, found)
    if witness:
        logger.warning(f"Verticalidad fallida en {spec.name}: {witness}")
    return [CheckRecord.build("gauge.verticality", "u(b) = 0 for all b in B", witness, f"{count} casos; cota {used}")]


def check_adjoint_weights(spec: BundleSpec, degree_bound: int) -> List[CheckRecord]:
    """[H_j, X] = (m_j/2)·X para los generadores gauge y los campos de simetría"""
    H = (spec.symmetry["H1"], spec.symmetry["H2"])
    witness = None
    family = {**spec.gauge, **{name: X for name, X in spec.symmetry.items() if not name.startswith("H")}}
    for name, X in family.items():
        m = X.require_weight()
        for j, half in enumerate((Fraction(m.m1, 2), Fraction(m.m2, 2))):
            diff = bracket_plain(H[j], X) - X.scale(Scalar.rational(half))
            if _vanishing_bound(diff, spec, degree_bound) is None:
                witness = f"[H{j + 1}, {name}] ≠ {half}·{name}"
                break
        if witness:
            break
    return [CheckRecord.build("gauge.adjoint_weights", "adjoint representation of so(5)", witness,
                              f"{len(family)} derivaciones")]


# Tabla de corchetes trenzados

def fixture_scalar(term: Table1Term, use_printed: bool = False) -> Scalar:
    """Coeficiente c·ω^k de un término; con use_printed se toman los valores impresos"""
    text = term.printed_coeff if use_printed and term.printed_coeff else term.coeff
    omega = term.printed_omega if use_printed and term.printed_omega is not None else term.omega
    return parse_scalar(text).times_omega(omega)


def fixture_terms(entry: Table1Entry, use_printed: bool = False) -> List[ModuleTerm]:
    return [
        ModuleTerm(fixture_scalar(term, use_printed), () if term.base == "1" else (term.base,), term.generator)
        for term in entry.terms
    ]


def conjugate_terms(terms: Sequence[ModuleTerm], spec: BundleSpec) -> List[Tuple[Scalar, Poly, str]]:
    """(b•G̃)* = ω^{2φ(m_G, m_b)}·b* • G̃*, con el coeficiente conjugado"""
    conv = spec.convention
    out = []
    for term in terms:
        G_weight = spec.gauge[term.generator].require_weight()
        b = Poly.one(spec.table)
        for name in term.factors:
            b = star(b, spec.base[name], conv)
        b_weight = b.homogeneous_weight()
        phase = 2 * star_phase(G_weight, b_weight, conv)
        out.append((term.coeff.star().times_omega(phase), b.star(), term.generator))
    return out


def _conjugate_derivation(terms: Sequence[ModuleTerm], spec: BundleSpec, family: Mapping[str, Derivation]) -> Derivation:
    conv = spec.convention
    result = Derivation.zero(spec.table, DerivationMode.TWISTED)
    for coeff, b_star, generator in conjugate_terms(terms, spec):
        result = result + module_act(b_star.scale(coeff), derivation_star(family[generator]), conv)
    return result


def _render_classical(Z: Derivation, spec: BundleSpec) -> str:
    terms = express_in_basis(Z.with_mode(DerivationMode.TWISTED), twisted_gauge(spec), spec.base, spec.relations,
                             spec.convention)
    if terms is None:
        return render_derivation(Z.with_mode(DerivationMode.TWISTED), spec)
    return render_module_terms([ModuleTerm(t.coeff.eval_at_omega_one(), t.factors, t.generator) for t in terms])


def check_table1(
    spec: BundleSpec,
    fixture: Table1Fixture,
    degree_bound: int,
    use_printed: bool = False,
    omega_one: bool = False,
    cache: Optional[BracketCache] = None,
) -> Tuple[List[CheckRecord], List[Table1Row]]:
    """
    Reproduce la tabla de corchetes trenzados de los generadores gauge.

    Para cada entrada calcula [X̃, Ỹ] por dos rutas, lo compara módulo el ideal con
    el lado derecho del fixture, verifica el corchete conjugado [Ỹ*, X̃*] contra la
    regla de conjugación y compara la evaluación en ω = 1 con el corchete clásico.

    Retorna los registros de verificación y las filas para la tabla renderizada.
    """
    conv = spec.convention
    family = twisted_gauge(spec)
    cache = cache or BracketCache(conv)
    weights = {name: X.require_weight() for name, X in family.items()}
    rows: List[Table1Row] = []
    failed: List[str] = []
    conjugate_failed: List[str] = []
    oracle_failed: List[str] = []
    weight_failed: List[str] = []
    used = 0
    logger.info(f"Tabla de corchetes en {spec.name}: {len(fixture.entries)} entradas ({conv.label()})")

    for index, entry in enumerate(fixture.entries, start=1):
        label = f"{index}: [{entry.left},{entry.right}]"
        terms = fixture_terms(entry, use_printed)
        expected = module_combination(terms, family, spec.base, conv)
        expected_weight = expected.homogeneous_weight()
        if expected_weight is not None and expected_weight != weights[entry.left] + weights[entry.right]:
            weight_failed.append(label)

        classical = bracket_plain(spec.gauge[entry.left], spec.gauge[entry.right])
        classical_expected = expected.eval_at_omega_one().with_mode(DerivationMode.PLAIN)
        if _vanishing_bound(classical - classical_expected, spec, degree_bound) is None:
            oracle_failed.append(label)

        if omega_one:
            computed = classical
            found = difference_bound(classical, classical_expected, spec.relations, degree_bound, conv)
            computed_text = _render_classical(classical, spec)
            expected_text = render_module_terms(
                [ModuleTerm(t.coeff.eval_at_omega_one(), t.factors, t.generator) for t in terms]
            )
        else:
            try:
                computed = cache.bracket(family[entry.left], family[entry.right])
            except EngineFault as e:
                logger.error(f"Error al calcular {label}: {str(e)}")
                raise
            found = difference_bound(computed, expected, spec.relations, degree_bound, conv)
            computed_text = render_derivation(computed, spec)
            expected_text = render_module_terms(terms)

        diff = None
        if found is None:
            failed.append(label)
            delta = computed - (classical_expected if omega_one else expected)
            diff = _render_classical(delta, spec) if omega_one else render_derivation(delta, spec)
        else:
            used = max(used, found)

        conjugate_text = None
        conjugate_status = None
        if not omega_one:
            conj_computed = cache.bracket(derivation_star(family[entry.right]), derivation_star(family[entry.left]))
            conj_expected = _conjugate_derivation(terms, spec, family)
            conj_found = difference_bound(conj_computed, conj_expected, spec.relations, degree_bound, conv)
            conjugate_text = render_derivation(conj_computed, spec)
            conjugate_status = CheckStatus.PASS if conj_found is not None else CheckStatus.FAIL
            if conj_found is None:
                conjugate_failed.append(label)

        rows.append(Table1Row(
            index=index,
            block=entry.block,
            left=entry.left,
            right=entry.right,
            expected=expected_text,
            computed=computed_text,
            status=CheckStatus.PASS if found is not None else CheckStatus.FAIL,
            diff=diff,
            conjugate=conjugate_text,
            conjugate_status=conjugate_status,
            note=entry.note,
        ))

    total = len(fixture.entries)
    errata = sum(1 for entry in fixture.entries if entry.has_errata)
    source = "valores impresos" if use_printed else "valores derivados"
    name = "table1.classical" if omega_one else "table1"
    note = f"{total - len(failed)}/{total}; {source}; {errata} entradas con erratas; cota {used}"
    records = [CheckRecord.build(name, "braided gauge bracket table", "; ".join(failed) or None, note)]
    if not omega_one:
        records.append(CheckRecord.build("table1.conjugates", "([X,Y])* = [Y*,X*] on the table",
                                         "; ".join(conjugate_failed) or None, f"{total - len(conjugate_failed)}/{total}"))
    records.append(CheckRecord.build("table1.classical_oracle", "ω = 1 matches the classical bracket",
                                     "; ".join(oracle_failed) or None, f"{total - len(oracle_failed)}/{total}"))
    records.append(CheckRecord.build("table1.weights", "right-hand sides have weight m_X + m_Y",
                                     "; ".join(weight_failed) or None))
    if failed:
        logger.warning(f"Entradas de la tabla con diferencias en {spec.name}: {failed}")
    return records, rows


# Clausura, independencia y dimensión

def check_gauge_closure_and_dim(
    spec: BundleSpec, n_max: int = 1, cache: Optional[BracketCache] = None
) -> List[CheckRecord]:
    """
    (i) Todo corchete trenzado de generadores gauge es combinación sobre la base de los
    diez generadores; (ii) los generadores son independientes sobre los escalares;
    (iii) d(2,0) coincide con el rango y se listan d(2,n) para n ≤ n_max.
    """
    if n_max < 0:
        raise ValueError("n_max debe ser no negativo")
    conv = spec.convention
    family = twisted_gauge(spec)
    cache = cache or BracketCache(conv)
    records = []

    witness = None
    pairs = list(itertools.combinations(family.values(), 2))
    for X, Y in pairs:
        bracket = cache.bracket(X, Y)
        if express_in_basis(bracket, family, spec.base, spec.relations, conv) is None:
            witness = f"[{X.label},{Y.label}] no se expresa en los generadores"
            break
    records.append(CheckRecord.build("gauge.closure", "generated as a module over the base", witness,
                                     f"{len(pairs)} pares"))

    rank = scalar_rank(spec.gauge)
    witness = None if rank == len(spec.gauge) else f"rango {rank} de {len(spec.gauge)}"
    records.append(CheckRecord.build("gauge.independence", "linear independence over scalars", witness,
                                     f"rango {rank}"))

    dims = [gauge_dimension(n) for n in range(n_max + 1)]
    witness = None if dims[0] == rank == len(spec.gauge) else f"d(2,0) = {dims[0]}, rango {rank}"
    values = ", ".join(f"d(2,{n})={d}" for n, d in enumerate(dims))
    records.append(CheckRecord.build("gauge.dimension", "d(2,n) = (n+1)(n+4)(2n+5)/2", witness, values))
    return records


# Equivariancia derivada

def check_derived_equivariance(spec: BundleSpec, degree_bound: int) -> List[CheckRecord]:
    """
    Campos de la acción a derecha: anulan la base, cierran su álgebra de Lie y conmutan
    con los generadores gauge. También se verifica que los campos de simetría son
    tangentes al ideal de relaciones.
    """
    fields = spec.right_action
    if not fields:
        return [CheckRecord.skipped("equivariance", "derived equivariance", "Sin campos de acción a derecha")]
    records = []

    witness = None
    for name, Y in fields.items():
        for b_name in spec.base_order:
            value = plain_apply(Y, spec.base[b_name])
            if vanishes_mod(value, spec.relations, degree_bound) is None:
                witness = f"{name}({b_name}) ≠ 0"
                break
        if witness:
            break
    records.append(CheckRecord.build("equivariance.base_invariance", "right action fixes the base", witness,
                                     f"{len(fields)} campos"))

    witness = None
    rank = scalar_rank(fields)
    for (n1, Y1), (n2, Y2) in itertools.combinations(fields.items(), 2):
        extended = {**fields, "bracket": bracket_plain(Y1, Y2)}
        if scalar_rank(extended) != rank:
            witness = f"[{n1},{n2}] fuera del álgebra"
            break
    records.append(CheckRecord.build("equivariance.closure", "right action closes a Lie algebra", witness,
                                     f"dimensión {rank}"))

    witness = None
    used = 0
    for (gname, G), (yname, Y) in itertools.product(spec.gauge.items(), fields.items()):
        found = _vanishing_bound(bracket_plain(G, Y), spec, degree_bound)
        if found is None:
            witness = f"[{gname},{yname}] ≠ 0"
            break
        used = max(used, found)
    records.append(CheckRecord.build("equivariance.commutation", "gauge fields commute with the right action",
                                     witness, f"{len(spec.gauge) * len(fields)} pares; cota {used}"))

    witness = None
    for (name, X), (relation, label) in itertools.product(
        spec.symmetry.items(), zip(spec.relations.relations, spec.relations.labels)
    ):
        if vanishes_mod(plain_apply(X, relation), spec.relations, degree_bound) is None:
            witness = f"{name} no es tangente a {label}"
            break
    records.append(CheckRecord.build("symmetry.ideal_tangency", "symmetry fields preserve the relations", witness,
                                     f"{len(spec.symmetry)} campos, {len(spec.relations.relations)} relaciones"))
    return records


# Fases de la base

def check_base_commutation(spec: BundleSpec, degree_bound: int) -> Tuple[List[CheckRecord], List[Tuple[Tuple[str, str], int]]]:
    """
    Relaciones de conmutación a•b = ω^k b•a entre coordenadas base, verificadas con el
    producto estrella, y la combinación de normalización consistente.
    """
    conv = spec.convention
    base = {name: spec.base[name] for name in spec.base_order}
    table = commutation_table(base, conv)
    witness = None
    for (left, right), k in table:
        a, b = base[left], base[right]
        if vanishes_mod(star(a, b, conv) - star(b, a, conv).times_omega(k), spec.relations, degree_bound) is None:
            witness = f"{left}•{right} ≠ ω^{k} {right}•{left}"
            break
    records = [CheckRecord.build("base.commutation", "nontrivial commutation relations", witness,
                                 f"{len(table)} pares ordenados")]

    exponent = dict(table)[("alpha", "beta")]
    witness = None
    if abs(exponent) != 8:
        witness = f"α•β = ω^{exponent} β•α con {conv.label()}; la combinación consistente es n_c=1"
    # La orientación impresa es la de ε=+1; solo se informa
    printed = "coincide" if exponent == 8 else "corresponde a ε=+1"
    records.append(CheckRecord.build(
        "phase.pairing", "normalization paired with the Cartan fields", witness,
        f"α•β = ω^{exponent} β•α; la relación impresa e^{{2πiθ}} {printed}",
    ))
    return records, table


# Corchetes de elementos del módulo

def check_module_brackets(
    spec: BundleSpec,
    degree_bound: int,
    pairs: Sequence[Tuple[str, str]] = MODULE_BRACKET_PAIRS,
    base_names: Sequence[str] = MODULE_BRACKET_BASE,
    cache: Optional[BracketCache] = None,
) -> List[CheckRecord]:
    """[b•X̃, c•Ỹ] = ω^{braid(m_X, m_c)}·(b•c)•[X̃, Ỹ] para generadores verticales"""
    conv = spec.convention
    family = twisted_gauge(spec)
    cache = cache or BracketCache(conv)
    witness = None
    count = 0
    for left, right in pairs:
        X, Y = family[left], family[right]
        bracket = cache.bracket(X, Y)
        m_x = X.require_weight()
        for b_name, c_name in itertools.product(base_names, repeat=2):
            b, c = spec.base[b_name], spec.base[c_name]
            count += 1
            lhs = cache.bracket(module_act(b, X, conv), module_act(c, Y, conv))
            rhs = module_act(star(b, c, conv), bracket, conv).times_omega(braid_phase(m_x, c.homogeneous_weight(), conv))
            if difference_bound(lhs, rhs, spec.relations, degree_bound, conv) is None:
                witness = f"[{b_name}•{left}, {c_name}•{right}]"
                break
        if witness:
            break
    return [CheckRecord.build("module.bracket_law", "bracket of module elements", witness, f"{count} casos")]
