import itertools
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

from app.models.bundle import JordanianSpec
from app.models.derivation import Derivation
from app.models.poly import Generator, GeneratorTable, Monomial, Poly, RelationSet
from app.models.scalar import Scalar
from app.schemas.report_schema import CheckRecord
from app.services.derivation_service import bracket_plain, plain_apply
from app.services.expression_service import render_action
from app.services.gauge_service import scalar_rank
from app.services.polyalg_service import vanishes_mod

# Configurar logger
logger = logging.getLogger(__name__)

U = "u"
TIME = "x0"

# Tensor a ⊗ b como mapa (monomio de a, monomio de b) → escalar
JTensor = Dict[Tuple[Monomial, Monomial], Scalar]


def coordinate_name(index: int) -> str:
    return f"x{index}"


def lorentz_name(row: int, column: int) -> str:
    return f"t{row}{column}"


def base_name(index: int) -> str:
    """Coordenada de κ-Minkowski 𝗑^I = x^I u⁻¹"""
    return f"kx{index}"


def jordanian_table(n: int, lorentz: bool = False) -> GeneratorTable:
    if n < 1:
        raise ValueError("n debe ser al menos 1")
    generators = [Generator(U, u_degree=1, laurent=True)]
    generators += [Generator(coordinate_name(index)) for index in range(n + 1)]
    if lorentz:
        generators += [Generator(lorentz_name(j, k)) for j in range(n + 1) for k in range(n + 1)]
    return GeneratorTable("poincare_weyl" if lorentz else "line", tuple(generators))


# Piernas del twist

def p0_apply(p: Poly) -> Poly:
    """P₀ = i·u·∂/∂x⁰; baja en uno el grado en x⁰"""
    table = p.table
    return (p.derivative(table.index(TIME)) * Poly.gen(table, U)).scale(Scalar.imag())


def twist_legs(table: GeneratorTable) -> Tuple[Derivation, Derivation]:
    """Retorna (u∂_u, P₀) como derivaciones clásicas"""
    u = Poly.gen(table, U)
    dilation = Derivation.from_images(table, {U: u}, label="u∂u")
    p0 = Derivation.from_images(table, {TIME: u.scale(Scalar.imag())}, label="P0")
    return dilation, p0


def binom_series(p: Poly, d: int) -> Poly:
    """
    (1 + P₀/κ)^d · p con coeficientes binomiales generalizados.

    La serie termina porque P₀ es nilpotente sobre cada polinomio.
    """
    result = Poly.zero(p.table)
    term = p
    coeff = Fraction(1)
    k = 0
    while not term.is_zero() and coeff:
        result = result + term.scale(Scalar.rational(coeff) * Scalar.kappa_inv(k))
        coeff = coeff * (d - k) / (k + 1)
        term = p0_apply(term)
        k += 1
    return result


def jstar(a: Poly, b: Poly) -> Poly:
    """Producto deformado a • b = Σ_d a_d · (1 + P₀/κ)^{-d} b sobre las componentes de grado d en u de a"""
    result = Poly.zero(a.table)
    for degree, component in a.u_components().items():
        result = result + component * binom_series(b, -degree)
    return result


def _tensor_add(tensor: JTensor, left: Poly, right: Poly) -> None:
    for m1, c1 in left.raw_terms().items():
        for m2, c2 in right.raw_terms().items():
            key = (m1, m2)
            value = c1 * c2
            tensor[key] = tensor[key] + value if key in tensor else value


def _clean(tensor: JTensor) -> JTensor:
    return {key: value for key, value in tensor.items() if not value.is_zero()}


def tensor_of(pairs: Sequence[Tuple[Poly, Poly]]) -> JTensor:
    tensor: JTensor = {}
    for left, right in pairs:
        _tensor_add(tensor, left, right)
    return _clean(tensor)


def tensor_pairs(tensor: JTensor, table: GeneratorTable) -> List[Tuple[Poly, Poly]]:
    """Descompone el tensor en pares (coef·monomio, monomio) en orden determinista"""
    return [
        (Poly.monomial(table, m1, coeff), Poly.monomial(table, m2))
        for (m1, m2), coeff in sorted(tensor.items(), key=lambda item: item[0])
    ]


def j_rmatrix_act(a: Poly, b: Poly) -> JTensor:
    """
    Acción de R = F₂₁·F̄ sobre a ⊗ b.

    F̄ aplica (1 + P₀/κ)^{-d} al segundo factor según el grado d en u del primero;
    F₂₁ aplica (1 + P₀/κ)^{e} al primero según el grado e en u del segundo.
    """
    first: List[Tuple[Poly, Poly]] = []
    for degree, component in a.u_components().items():
        first.append((component, binom_series(b, -degree)))
    tensor: JTensor = {}
    for left, right in first:
        for degree, component in right.u_components().items():
            _tensor_add(tensor, binom_series(left, degree), component)
    return _clean(tensor)


def kappa_limit(tensor: JTensor) -> JTensor:
    """Límite formal κ → ∞"""
    return _clean({key: value.drop_kappa() for key, value in tensor.items()})


def j_conjugate(p: Poly) -> Poly:
    """
    Conjugación de A_F con u* = u, (x^I)* = x^I, (t_IJ)* = t_IJ y (a•b)* = b*•a*.

    Cada monomio clásico es q • u^a con q libre de u, así que su conjugado es u^a • q̄.
    """
    table = p.table
    u_pos = table.index(U)
    result = Poly.zero(table)
    for mono, coeff in p.raw_terms().items():
        power = mono[u_pos]
        rest = list(mono)
        rest[u_pos] = 0
        u_part = Poly.gen(table, U, power) if power else Poly.one(table)
        result = result + jstar(u_part, Poly.monomial(table, tuple(rest), coeff.star()))
    return result


def jstar_commutator(a: Poly, b: Poly) -> Poly:
    return jstar(a, b) - jstar(b, a)


# Fibrados

def _base_coordinates(table: GeneratorTable, n: int) -> Dict[str, Poly]:
    u_inv = Poly.gen(table, U, -1)
    return {base_name(index): jstar(Poly.gen(table, coordinate_name(index)), u_inv) for index in range(n + 1)}


def dilation_generator(table: GeneratorTable, n: int) -> Derivation:
    """X₀ = u∂_u + Σ_I x^I ∂_I"""
    images = {U: Poly.gen(table, U)}
    for index in range(n + 1):
        images[coordinate_name(index)] = Poly.gen(table, coordinate_name(index))
    return Derivation.from_images(table, images, label="X0")


def build_line_bundle(n: int) -> JordanianSpec:
    """
    Fibrado de línea ℝ_{>0} → ℝ^{n+1} deformado por el twist jordaniano.

    El único generador gauge es X₀ y el álgebra gauge trenzada es abeliana.
    """
    table = jordanian_table(n)
    base = _base_coordinates(table, n)
    logger.info(f"Fibrado de línea jordaniano construido con n={n}")
    return JordanianSpec(
        name=f"line_n{n}",
        n=n,
        table=table,
        relations=RelationSet(table, RelationSet.MEMBERSHIP, []),
        gauge={"X0": dilation_generator(table, n)},
        base=base,
        base_order=list(base),
    )


def _eta(index: int) -> int:
    return 1 if index == 0 else -1


def lorentz_relations(table: GeneratorTable, n: int) -> RelationSet:
    """Entradas de T^tηT − η con K ≤ L, η = diag(1, −1, …, −1)"""
    relations = []
    labels = []
    for k in range(n + 1):
        for l in range(k, n + 1):
            entry = Poly.zero(table)
            for j in range(n + 1):
                entry = entry + (Poly.gen(table, lorentz_name(j, k)) * Poly.gen(table, lorentz_name(j, l))) * _eta(j)
            if k == l:
                entry = entry - Poly.constant(table, _eta(k))
            relations.append(entry)
            labels.append(f"TtηT[{k}{l}]")
    return RelationSet(table, RelationSet.MEMBERSHIP, relations, labels=labels)


def _row_field(table: GeneratorTable, n: int, rules: Sequence[Tuple[int, int, int]], label: str) -> Derivation:
    """Campo Σ_K signo·t_{origen,K} ∂/∂t_{destino,K} para cada regla (signo, destino, origen)"""
    images: Dict[str, Poly] = {}
    for sign, target, source in rules:
        for k in range(n + 1):
            name = lorentz_name(target, k)
            term = Poly.gen(table, lorentz_name(source, k)) * sign
            images[name] = images[name] + term if name in images else term
    return Derivation.from_images(table, images, label=label)


def lorentz_generators(table: GeneratorTable, n: int) -> Dict[str, Derivation]:
    """Boosts t_{0K}∂_{jK} + t_{jK}∂_{0K} y rotaciones t_{iK}∂_{jK} − t_{jK}∂_{iK}"""
    fields = {}
    for j in range(1, n + 1):
        fields[f"B{j}"] = _row_field(table, n, [(1, j, 0), (1, 0, j)], f"B{j}")
    for i, j in itertools.combinations(range(1, n + 1), 2):
        fields[f"R{i}{j}"] = _row_field(table, n, [(1, j, i), (-1, i, j)], f"R{i}{j}")
    return fields


def build_poincare_weyl(n: int) -> JordanianSpec:
    """
    Fibrado de Poincaré–Weyl sobre κ-Minkowski.

    Generadores u, x^I, t_IJ; relaciones T^tηT = η en modo de pertenencia; generadores
    gauge X₀, boosts y rotaciones (1 + n(n+1)/2 en total).
    """
    table = jordanian_table(n, lorentz=True)
    base = _base_coordinates(table, n)
    gauge = {"X0": dilation_generator(table, n), **lorentz_generators(table, n)}
    logger.info(f"Fibrado de Poincaré–Weyl construido con n={n}: {len(gauge)} generadores gauge")
    return JordanianSpec(
        name=f"poincare_weyl_n{n}",
        n=n,
        table=table,
        relations=lorentz_relations(table, n),
        gauge=gauge,
        base=base,
        base_order=list(base),
    )


# Corchete trenzado sobre elementos del módulo

def module_operator(b: Poly, X: Derivation) -> Callable[[Poly], Poly]:
    """b • X actuando como a ↦ b • X(a); D(X) = X para generadores invariantes bajo el twist"""
    return lambda a: jstar(b, plain_apply(X, a))


def module_bracket_at(b: Poly, X: Derivation, c: Poly, Y: Derivation, a: Poly) -> Poly:
    """[b•X, c•Y]_R evaluado en a: (b•X)(c•Y)(a) − Σ (R_α▷c)•Y((R^α▷b)•X(a))"""
    first = module_operator(b, X)(module_operator(c, Y)(a))
    second = Poly.zero(a.table)
    inner = plain_apply(X, a)
    for d, e in tensor_pairs(j_rmatrix_act(b, c), a.table):
        second = second + jstar(e, plain_apply(Y, jstar(d, inner)))
    return first - second


def probe_elements(spec: JordanianSpec) -> List[Poly]:
    table = spec.table
    return [Poly.gen(table, pos) for pos in range(table.size)] + [Poly.gen(table, U, -1)]


def associativity_sample(table: GeneratorTable, degree: int) -> List[Poly]:
    """Monomios u^a x⁰^b x¹^c con |a| ≤ 2 y |a| + b + c ≤ degree"""
    x0, x1 = table.index(coordinate_name(0)), table.index(coordinate_name(1))
    u_pos = table.index(U)
    sample = []
    for a in range(-2, 3):
        for b in range(degree - abs(a) + 1):
            for c in range(degree - abs(a) - b + 1):
                mono = [0] * table.size
                mono[u_pos], mono[x0], mono[x1] = a, b, c
                sample.append(Poly.monomial(table, tuple(mono)))
    return sample


def verify_jordanian_suite(spec: JordanianSpec, degree: int = 3, degree_bound: int = 4) -> List[CheckRecord]:
    """
    Verificaciones del twist jordaniano sobre un fibrado.

    Serie binomial, asociatividad de •, relaciones de κ-Minkowski, conjugación,
    matriz R, piernas del twist, verticalidad, invariancia de los generadores gauge
    y corchetes trenzados de elementos del módulo.
    """
    table = spec.table
    prefix = f"jordanian.{spec.name}"
    one = Poly.one(table)
    u = Poly.gen(table, U)
    u_inv = Poly.gen(table, U, -1)
    i_over_kappa = Scalar.imag() * Scalar.kappa_inv()
    sample = associativity_sample(table, degree)
    records = []
    logger.info(f"Suite jordaniana en {spec.name}: {len(sample)} monomios de muestra")

    witness = None
    for p, (d, e) in itertools.product(sample, [(-1, 1), (1, -1), (2, -1), (-2, 3)]):
        if binom_series(binom_series(p, d), e) != binom_series(p, d + e):
            witness = f"(1+P₀/κ)^{e}(1+P₀/κ)^{d} ≠ (1+P₀/κ)^{d + e} en {p.render_classical()}"
            break
    records.append(CheckRecord.build(f"{prefix}.binomial_series", "(1+P0/κ)^d terminating series", witness,
                                     f"{len(sample)} monomios"))

    witness = None
    if jstar(u, u_inv) != one or jstar(u_inv, u) != one:
        witness = "u • u⁻¹ ≠ 1"
    for p in sample:
        if witness:
            break
        if jstar(one, p) != p or jstar(p, one) != p:
            witness = f"1 no es unidad para {p.render_classical()}"
    for a, b, c in itertools.product(sample, repeat=3):
        if witness:
            break
        if jstar(jstar(a, b), c) != jstar(a, jstar(b, c)):
            witness = f"({a.render_classical()}, {b.render_classical()}, {c.render_classical()})"
    records.append(CheckRecord.build(f"{prefix}.associativity", "twist cocycle via associativity", witness,
                                     f"{len(sample) ** 3} ternas"))

    x0 = Poly.gen(table, TIME)
    commutator = jstar_commutator(x0, u_inv)
    expected = Poly.constant(table, -i_over_kappa)
    witness = None if commutator == expected else f"x⁰•u⁻¹ − u⁻¹•x⁰ = {commutator.render_classical()}"
    records.append(CheckRecord.build(f"{prefix}.x_u_relation", "x0 • u^-1 - u^-1 • x0 = -i/κ", witness))

    witness = None
    kx0 = spec.base[base_name(0)]
    for j in range(1, spec.n + 1):
        kxj = spec.base[base_name(j)]
        if jstar_commutator(kx0, kxj) != kxj.scale(-i_over_kappa):
            witness = f"[𝗑⁰, 𝗑^{j}] ≠ −(i/κ)𝗑^{j}"
            break
        for l in range(1, j):
            if not jstar_commutator(spec.base[base_name(l)], kxj).is_zero():
                witness = f"[𝗑^{l}, 𝗑^{j}] ≠ 0"
                break
        if witness:
            break
    records.append(CheckRecord.build(f"{prefix}.kappa_minkowski", "kappa-Minkowski relations", witness,
                                     f"{spec.n} coordenadas espaciales"))

    witness = None
    half = Poly.constant(table, i_over_kappa.scale(Fraction(1, 2)))
    if j_conjugate(kx0) != kx0 + Poly.constant(table, i_over_kappa):
        witness = f"(𝗑⁰)* = {j_conjugate(kx0).render_classical()}"
    elif j_conjugate(kx0 + half) != kx0 + half:
        witness = "𝗑⁰ + i/(2κ) no es real"
    elif any(j_conjugate(spec.base[base_name(j)]) != spec.base[base_name(j)] for j in range(1, spec.n + 1)):
        witness = "𝗑^j no es real"
    else:
        pairs = list(itertools.product(sample[:12], repeat=2))
        for a, b in pairs:
            if j_conjugate(jstar(a, b)) != jstar(j_conjugate(b), j_conjugate(a)):
                witness = f"(a•b)* ≠ b*•a* para ({a.render_classical()}, {b.render_classical()})"
                break
    records.append(CheckRecord.build(f"{prefix}.conjugation", "(x0)* = x0 + i/κ, (a•b)* = b*•a*", witness))

    witness = None
    for a, b in itertools.product(sample[:12], repeat=2):
        tensor = j_rmatrix_act(a, b)
        if kappa_limit(tensor) != tensor_of([(a, b)]):
            witness = f"R no tiende a la identidad en ({a.render_classical()}, {b.render_classical()})"
            break
        swapped = Poly.zero(table)
        for d, e in tensor_pairs(tensor, table):
            swapped = swapped + jstar(e, d)
        if swapped != jstar(a, b):
            witness = f"a•b ≠ (R_α▷b)•(R^α▷a) en ({a.render_classical()}, {b.render_classical()})"
            break
    records.append(CheckRecord.build(f"{prefix}.rmatrix", "triangular R-matrix F21·F̄", witness))

    dilation, p0 = twist_legs(table)
    legs = bracket_plain(dilation, p0)
    note = f"[u∂_u, P₀] = {render_action(legs)}; P₀ = {render_action(p0)}"
    witness = None if legs == p0 else "el corchete de las piernas del twist no es P₀"
    records.append(CheckRecord.build(f"{prefix}.twist_legs", "[u∂u, P0]", witness, note))

    witness = None
    used = 0
    for (name, X), (b_name, b) in itertools.product(spec.gauge.items(), spec.base.items()):
        found = vanishes_mod(plain_apply(X, b), spec.relations, degree_bound)
        if found is None:
            witness = f"{name}({b_name}) ≠ 0"
            break
        used = max(used, found)
    records.append(CheckRecord.build(f"{prefix}.verticality", "gauge generators annihilate the base", witness,
                                     f"{len(spec.gauge) * len(spec.base)} casos; cota {used}"))

    witness = None
    for name, X in spec.gauge.items():
        if not bracket_plain(X, dilation).is_zero() or not bracket_plain(X, p0).is_zero():
            witness = f"{name} no conmuta con las piernas del twist"
            break
    records.append(CheckRecord.build(f"{prefix}.twist_invariance", "D(X) = X for gauge generators", witness,
                                     f"{len(spec.gauge)} generadores"))

    if len(spec.gauge) > 1:
        records.extend(_lorentz_checks(spec, degree_bound))

    records.append(_module_bracket_check(spec, prefix, degree_bound))
    return records


def _lorentz_checks(spec: JordanianSpec, degree_bound: int) -> List[CheckRecord]:
    prefix = f"jordanian.{spec.name}"
    expected = 1 + spec.n * (spec.n + 1) // 2
    witness = None if len(spec.gauge) == expected else f"{len(spec.gauge)} generadores, se esperaban {expected}"
    records = [CheckRecord.build(f"{prefix}.gauge_count", "dim(R ⊕ so(1,n)) = 1 + n(n+1)/2", witness,
                                 f"{len(spec.gauge)} generadores")]

    lorentz = {name: X for name, X in spec.gauge.items() if name != "X0"}
    rank = scalar_rank(lorentz)
    witness = None if rank == len(lorentz) else f"rango {rank}"
    for (n1, X), (n2, Y) in itertools.combinations(spec.gauge.items(), 2):
        if witness:
            break
        bracket = bracket_plain(X, Y)
        if "X0" in (n1, n2):
            if not bracket.is_zero():
                witness = f"[{n1},{n2}] ≠ 0"
        elif scalar_rank({**lorentz, "bracket": bracket}) != rank:
            witness = f"[{n1},{n2}] fuera de so(1,{spec.n})"
    records.append(CheckRecord.build(f"{prefix}.lorentz_closure", "so(1,n) closure of boosts and rotations",
                                     witness, f"dimensión {rank}"))

    witness = None
    for (name, X), (relation, label) in itertools.product(
        spec.gauge.items(), zip(spec.relations.relations, spec.relations.labels)
    ):
        if vanishes_mod(plain_apply(X, relation), spec.relations, degree_bound) is None:
            witness = f"{name} no es tangente a {label}"
            break
    records.append(CheckRecord.build(f"{prefix}.ideal_tangency", "gauge fields preserve T^tηT = η", witness))
    return records


def _module_bracket_check(spec: JordanianSpec, prefix: str, degree_bound: int) -> CheckRecord:
    """[b•X, b'•X']_R = b•b'•[X, X'] sobre pares de coordenadas base y todos los pares de generadores"""
    base_sample = [spec.base[base_name(0)], spec.base[base_name(1)]]
    probes = probe_elements(spec)
    witness = None
    count = 0
    for (n1, X), (n2, Y) in itertools.combinations_with_replacement(spec.gauge.items(), 2):
        bracket = bracket_plain(X, Y)
        for b, c in itertools.product(base_sample, repeat=2):
            count += 1
            bc = jstar(b, c)
            for a in probes:
                lhs = module_bracket_at(b, X, c, Y, a)
                rhs = jstar(bc, plain_apply(bracket, a))
                if vanishes_mod(lhs - rhs, spec.relations, degree_bound) is None:
                    witness = f"[b•{n1}, b'•{n2}] en {a.render_classical()}"
                    break
            if witness:
                break
        if witness:
            break
    anchor = "abelian braided gauge algebra" if len(spec.gauge) == 1 else "undeformed module brackets"
    return CheckRecord.build(f"{prefix}.module_brackets", anchor, witness, f"{count} casos")
