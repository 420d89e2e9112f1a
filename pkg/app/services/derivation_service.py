import itertools
import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.models.derivation import Derivation, DerivationMode
from app.models.poly import Poly, RelationSet
from app.models.weight import PhaseConvention
from app.schemas.report_schema import CheckRecord
from app.services.grading_service import braid_phase, star_phase
from app.services.polyalg_service import vanishes_mod
from app.services.starprod_service import star
from app.utils.exceptions import EngineFault

# Configurar logger
logger = logging.getLogger(__name__)

JACOBI_MODES = ("ordered", "combinations")


def plain_apply(X: Derivation, p: Poly) -> Poly:
    """Extensión de Leibniz de la acción clásica: Σ_g ∂_g p · X(g)"""
    result = Poly.zero(p.table)
    for pos, image in X.action.items():
        partial = p.derivative(pos)
        if not partial.is_zero():
            result = result + partial * image
    return result


def apply(X: Derivation, p: Poly, conv: PhaseConvention) -> Poly:
    """
    Aplica una derivación a un polinomio.

    Modo clásico: regla de Leibniz sobre monomios.
    Modo trenzado: Σ ω^{φ(m, s)}·X_m(p_s) sobre componentes homogéneas de X y de p.
    """
    if X.mode == DerivationMode.PLAIN:
        return plain_apply(X, p)
    result = Poly.zero(p.table)
    parts = p.weight_components()
    for weight, component in X.weight_components().items():
        for s, p_s in parts.items():
            result = result + plain_apply(component, p_s).times_omega(star_phase(weight, s, conv))
    return result


def _require_plain(*derivations: Derivation) -> None:
    for X in derivations:
        if X.mode != DerivationMode.PLAIN:
            raise ValueError(f"Se esperaba una derivación clásica: {X.label or '?'}")


def _require_twisted(*derivations: Derivation) -> None:
    for X in derivations:
        if X.mode != DerivationMode.TWISTED:
            raise ValueError(f"Se esperaba una derivación trenzada: {X.label or '?'}")


def _bracket_label(X: Derivation, Y: Derivation) -> str:
    if X.label and Y.label:
        return f"[{X.label},{Y.label}]"
    return ""


def bracket_plain(X: Derivation, Y: Derivation) -> Derivation:
    """Conmutador clásico g ↦ X(Y(g)) − Y(X(g))"""
    _require_plain(X, Y)
    table = X.table
    action = {}
    for pos in range(table.size):
        value = plain_apply(X, Y.image(pos)) - plain_apply(Y, X.image(pos))
        if not value.is_zero():
            action[pos] = value
    return Derivation(table, action, DerivationMode.PLAIN, _bracket_label(X, Y))


def bracket_twisted_F(X: Derivation, Y: Derivation, conv: PhaseConvention) -> Derivation:
    """Corchete del álgebra de Lie torcida: ω^{φ(m_X, m_Y)}·[X, Y]"""
    _require_plain(X, Y)
    m_x, m_y = X.require_weight(), Y.require_weight()
    bracket = bracket_plain(X, Y)
    phase = star_phase(m_x, m_y, conv)
    return Derivation(
        bracket.table,
        {pos: image.times_omega(phase) for pos, image in bracket.action.items()},
        DerivationMode.PLAIN,
        bracket.label,
    )


def braided_bracket_by_composition(Xt: Derivation, Yt: Derivation, conv: PhaseConvention) -> Derivation:
    """
    Corchete trenzado por composición directa: X̃∘Ỹ − ω^{braid(m_X, m_Y)}·Ỹ∘X̃ sobre generadores.

    El resultado se guarda como derivación trenzada de peso m_X + m_Y, con la fase de
    evaluación retirada de cada imagen.
    """
    _require_twisted(Xt, Yt)
    m_x, m_y = Xt.require_weight(), Yt.require_weight()
    m = m_x + m_y
    braid = braid_phase(m_x, m_y, conv)
    table = Xt.table
    action = {}
    for pos, gen in enumerate(table.generators):
        g = Poly.gen(table, pos)
        value = apply(Xt, apply(Yt, g, conv), conv) - apply(Yt, apply(Xt, g, conv), conv).times_omega(braid)
        if not value.is_zero():
            action[pos] = value.times_omega(-star_phase(m, gen.weight, conv))
    return Derivation(table, action, DerivationMode.TWISTED, _bracket_label(Xt, Yt))


def braided_bracket(Xt: Derivation, Yt: Derivation, conv: PhaseConvention) -> Derivation:
    """
    Corchete trenzado de derivaciones trenzadas homogéneas, calculado por dos rutas:
    (i) D([D⁻¹X̃, D⁻¹Ỹ]_F) y (ii) composición directa. Si difieren se lanza EngineFault.
    """
    _require_twisted(Xt, Yt)
    via_twist = bracket_twisted_F(
        Xt.with_mode(DerivationMode.PLAIN), Yt.with_mode(DerivationMode.PLAIN), conv
    ).with_mode(DerivationMode.TWISTED)
    via_composition = braided_bracket_by_composition(Xt, Yt, conv)
    if via_twist != via_composition:
        logger.error(f"Rutas del corchete trenzado en desacuerdo para {Xt.label}, {Yt.label}")
        raise EngineFault(f"Las dos rutas del corchete trenzado difieren para ({Xt.label}, {Yt.label})")
    return via_composition


def module_act(b: Poly, X: Derivation, conv: PhaseConvention) -> Derivation:
    """
    Estructura de módulo: b • X̃ en modo trenzado, b ·_F X en modo clásico.

    En ambos casos la acción clásica es Σ ω^{φ(m_b, m_X)}·b_k·X_m(g).
    """
    action: Dict[int, Poly] = {}
    b_parts = b.weight_components()
    for m, component in X.weight_components().items():
        for s, b_s in b_parts.items():
            phase = star_phase(s, m, conv)
            for pos, image in component.action.items():
                value = (b_s * image).times_omega(phase)
                action[pos] = action[pos] + value if pos in action else value
    label = f"{b.render_classical()}*{X.label}" if X.label else ""
    return Derivation(X.table, action, X.mode, label)


def derivation_star(X: Derivation) -> Derivation:
    """
    Derivación conjugada X*(g) = −(X(g*))*; invierte el peso y conserva el modo.

    La regla se aplica a la acción clásica almacenada. En modo trenzado el resultado es
    D∘*∘D⁻¹: sobre un generador de peso s vale ω^{-2φ(m_X, s)}·(−(X̃(g*))*), no −(X̃(g*))*.
    """
    table = X.table
    action = {}
    for pos in range(table.size):
        image = X.image(table.partner(pos))
        if not image.is_zero():
            action[pos] = -image.star()
    label = f"{X.label}~" if X.label else ""
    return Derivation(table, action, X.mode, label)


def difference_bound(
    X: Derivation, Y: Derivation, rel: RelationSet, bound: int, conv: PhaseConvention
) -> Optional[int]:
    """
    Compara dos derivaciones evaluando en todos los generadores módulo el ideal.

    Retorna la cota mínima necesaria (0 si coinciden formalmente) o None si difieren.
    """
    if X.mode == Y.mode and X.action == Y.action:
        return 0
    used = 0
    table = X.table
    for pos in range(table.size):
        g = Poly.gen(table, pos)
        diff = apply(X, g, conv) - apply(Y, g, conv)
        found = vanishes_mod(diff, rel, bound)
        if found is None:
            return None
        used = max(used, found)
    return used


def equal_mod_ideal(
    X: Derivation, Y: Derivation, rel: RelationSet, bound: int, conv: PhaseConvention
) -> bool:
    return difference_bound(X, Y, rel, bound, conv) is not None


class BracketCache:
    """Corchetes trenzados memorizados por etiqueta para las verificaciones en pares y ternas"""

    def __init__(self, conv: PhaseConvention):
        self.conv = conv
        self._cache: Dict[Tuple[str, str], Derivation] = {}

    def bracket(self, X: Derivation, Y: Derivation) -> Derivation:
        key = (X.label, Y.label)
        if not X.label or not Y.label:
            return braided_bracket(X, Y, self.conv)
        if key not in self._cache:
            self._cache[key] = braided_bracket(X, Y, self.conv)
        return self._cache[key]


def verify_braided_lie_axioms(
    family: Mapping[str, Derivation],
    rel: RelationSet,
    conv: PhaseConvention,
    degree_bound: int,
    samples: Sequence[Poly],
    jacobi_mode: str = "ordered",
) -> List[CheckRecord]:
    """
    Verifica los axiomas de álgebra de Lie trenzada sobre una familia de derivaciones
    trenzadas homogéneas: acuerdo de las dos rutas, antisimetría, Jacobi, Leibniz
    trenzado, regla de conjugación y peso del corchete. Todas las igualdades se
    deciden módulo el ideal del fibrado.

    Jacobi en modo `ordered` recorre todas las ternas ordenadas, con repeticiones;
    `combinations` solo las ternas de elementos distintos sin orden.
    """
    if jacobi_mode not in JACOBI_MODES:
        raise ValueError(f"Modo de Jacobi desconocido: {jacobi_mode}")
    names = list(family)
    members = [family[name].relabel(name) for name in names]
    weights = {X.label: X.require_weight() for X in members}
    cache = BracketCache(conv)
    logger.info(f"Axiomas de Lie trenzados sobre {len(members)} derivaciones ({conv.label()})")
    records = []
    max_bound = 0

    def vanishes(D: Derivation) -> bool:
        nonlocal max_bound
        found = difference_bound(D, Derivation.zero(D.table, D.mode), rel, degree_bound, conv)
        if found is None:
            return False
        max_bound = max(max_bound, found)
        return True

    route_witness = None
    weight_witness = None
    pairs = list(itertools.product(members, repeat=2))
    for X, Y in pairs:
        try:
            bracket = cache.bracket(X, Y)
        except EngineFault as e:
            route_witness = route_witness or f"({X.label}, {Y.label}): {str(e)}"
            continue
        found = bracket.homogeneous_weight()
        if found is not None and found != weights[X.label] + weights[Y.label]:
            weight_witness = weight_witness or f"({X.label}, {Y.label}): peso {found.label()}"
    records.append(CheckRecord.build("braided.two_routes", "twisted and composed brackets agree", route_witness,
                                     f"{len(pairs)} pares ordenados"))
    records.append(CheckRecord.build("braided.bracket_weight", "weight of the bracket", weight_witness))
    if route_witness:
        return records

    witness = None
    unordered = list(itertools.combinations(members, 2))
    for X, Y in unordered:
        braid = braid_phase(weights[X.label], weights[Y.label], conv)
        swapped = cache.bracket(Y, X)
        total = cache.bracket(X, Y) + swapped.times_omega(braid)
        if not vanishes(total):
            witness = f"({X.label}, {Y.label})"
            break
    records.append(CheckRecord.build("braided.antisymmetry", "braided antisymmetry", witness,
                                     f"{len(unordered)} pares"))

    witness = None
    if jacobi_mode == "ordered":
        triples = list(itertools.product(members, repeat=3))
    else:
        triples = list(itertools.combinations(members, 3))
    for X, Y, Z in triples:
        braid = braid_phase(weights[X.label], weights[Y.label], conv)
        left = cache.bracket(X, cache.bracket(Y, Z))
        right = cache.bracket(cache.bracket(X, Y), Z) + cache.bracket(Y, cache.bracket(X, Z)).times_omega(braid)
        if not vanishes(left - right):
            witness = f"({X.label}, {Y.label}, {Z.label})"
            break
    records.append(CheckRecord.build("braided.jacobi", "braided Jacobi identity", witness,
                                     f"{len(triples)} ternas ({jacobi_mode})"))

    witness = None
    count = 0
    homogeneous = [a for a in samples if a.homogeneous_weight() is not None]
    for X in members:
        for a, b in itertools.product(homogeneous, repeat=2):
            count += 1
            braid = braid_phase(weights[X.label], a.homogeneous_weight(), conv)
            lhs = apply(X, star(a, b, conv), conv)
            rhs = star(apply(X, a, conv), b, conv) + star(a, apply(X, b, conv), conv).times_omega(braid)
            if vanishes_mod(lhs - rhs, rel, degree_bound) is None:
                witness = f"{X.label} sobre a={a.render_classical()}, b={b.render_classical()}"
                break
        if witness:
            break
    records.append(CheckRecord.build("braided.leibniz", "braided Leibniz rule", witness, f"{count} casos"))

    witness = None
    for X, Y in unordered:
        lhs = derivation_star(cache.bracket(X, Y))
        rhs = braided_bracket(derivation_star(Y), derivation_star(X), conv)
        if not vanishes(lhs - rhs):
            witness = f"({X.label}, {Y.label})"
            break
    records.append(CheckRecord.build("braided.conjugation", "([X,Y])* = [Y*,X*]", witness,
                                     f"{len(unordered)} pares"))

    logger.info(f"Cota de grado máxima usada en los axiomas trenzados: {max_bound}")
    for record in records:
        if record.note is not None:
            record.note = f"{record.note}; cota {max_bound}"
    return records
