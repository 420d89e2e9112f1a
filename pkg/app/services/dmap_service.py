import itertools
import logging
from typing import List, Mapping, Sequence

from app.models.derivation import Derivation, DerivationMode
from app.models.poly import Poly, RelationSet
from app.models.weight import PhaseConvention
from app.schemas.report_schema import CheckRecord
from app.services.derivation_service import (
    apply,
    braided_bracket_by_composition,
    bracket_twisted_F,
    difference_bound,
    module_act,
)
from app.services.polyalg_service import vanishes_mod
from app.services.starprod_service import star

# Configurar logger
logger = logging.getLogger(__name__)


def d_apply(X: Derivation) -> Derivation:
    """
    D(X): misma acción clásica evaluada con la fase D(X)(a_s) = ω^{φ(m_X, m_s)}·X(a_s).

    Solo para derivaciones clásicas homogéneas.
    """
    if X.mode != DerivationMode.PLAIN:
        raise ValueError(f"D se aplica a derivaciones clásicas: {X.label or '?'}")
    X.require_weight()
    return X.with_mode(DerivationMode.TWISTED)


def d_inverse(Xt: Derivation) -> Derivation:
    """D⁻¹(X̃): vuelve al modo clásico conservando la acción"""
    if Xt.mode != DerivationMode.TWISTED:
        raise ValueError(f"D⁻¹ se aplica a derivaciones trenzadas: {Xt.label or '?'}")
    Xt.require_weight()
    return Xt.with_mode(DerivationMode.PLAIN)


def verify_d_isomorphism(
    family: Mapping[str, Derivation],
    base_samples: Sequence[Poly],
    rel: RelationSet,
    conv: PhaseConvention,
    degree_bound: int,
) -> List[CheckRecord]:
    """
    Verifica que D es un isomorfismo de álgebras de Lie y de módulos.

    Parámetros:
        family: derivaciones clásicas homogéneas (por ejemplo los generadores gauge)
        base_samples: elementos de la base para la compatibilidad de módulos
        rel: relaciones del fibrado
        conv: convención de fase
        degree_bound: cota de grado para la pertenencia al ideal
    """
    members = [family[name].relabel(name) for name in family]
    logger.info(f"Isomorfismo D sobre {len(members)} derivaciones")
    records = []

    witness = None
    for X in members:
        if d_inverse(d_apply(X)) != X or d_apply(d_inverse(d_apply(X))) != d_apply(X):
            witness = X.label
            break
    records.append(CheckRecord.build("dmap.inverse", "D⁻¹∘D = id", witness, f"{len(members)} derivaciones"))

    witness = None
    pairs = list(itertools.combinations(members, 2))
    for X, Y in pairs:
        lhs = d_apply(bracket_twisted_F(X, Y, conv))
        rhs = braided_bracket_by_composition(d_apply(X), d_apply(Y), conv)
        if difference_bound(lhs, rhs, rel, degree_bound, conv) is None:
            witness = f"({X.label}, {Y.label})"
            break
    records.append(CheckRecord.build("dmap.bracket", "D([X,Y]_F) = [D(X),D(Y)]", witness, f"{len(pairs)} pares"))

    witness = None
    count = 0
    for b in base_samples:
        for X in members:
            count += 1
            twisted_module = d_apply(module_act(b, X, conv))
            for pos in range(X.table.size):
                g = Poly.gen(X.table, pos)
                lhs = apply(twisted_module, g, conv)
                rhs = star(b, apply(d_apply(X), g, conv), conv)
                if vanishes_mod(lhs - rhs, rel, degree_bound) is None:
                    witness = f"b={b.render_classical()}, X={X.label}, g={g.render_classical()}"
                    break
            if witness:
                break
        if witness:
            break
    records.append(CheckRecord.build("dmap.module", "D(b·X) = b•D(X)", witness, f"{count} pares (b, X)"))
    return records
