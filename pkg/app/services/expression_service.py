import logging
import re
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from app.models.bundle import BundleSpec
from app.models.derivation import Derivation
from app.models.poly import Poly, monomial_factors, render_term
from app.models.scalar import Scalar, join_signed_terms
from app.models.weight import PhaseConvention
from app.services.derivation_service import apply, braided_bracket, derivation_star, module_act
from app.services.dmap_service import d_apply
from app.services.gauge_service import ModuleTerm, express_in_basis, ordering_phase
from app.services.grading_service import braid_phase
from app.services.polyalg_service import reduce
from app.services.starprod_service import star, star_power
from app.utils.exceptions import ExpressionParseError, InhomogeneousError, UnboundIdentifierError

# Configurar logger
logger = logging.getLogger(__name__)

Value = Union[Scalar, Poly, Derivation]

CONSTANTS = {
    "i": Scalar.imag,
    "sqrt2": Scalar.sqrt2,
    "w": Scalar.omega,
}
# κ solo aparece como divisor: a/k, a/k^n
KAPPA = "k"

GRAMMAR_HELP = """Gramática de expresiones (de menor a mayor precedencia):
  -a          menos unario (abarca toda la suma que sigue)
  a + b, a - b
  a * b, a / n  producto estrella, acción de módulo o escala; n entero
  a / k^n    división por κ^n (1/k = κ⁻¹)
  a ^ n       potencia entera (w^-3 admite exponente negativo)
  a~          conjugación
Átomos: enteros, i, sqrt2, w (= ω), generadores (z1, z1c, n15),
coordenadas base (alpha, alphac, beta, betac, x), campos (H1, E10, Em1m1)
y generadores gauge (K1, W11, Wm10)."""

TOKENS = {
    "name": r"[A-Za-z_][A-Za-z0-9_]*",
    "num": r"\d+",
    "lpar": r"\(",
    "rpar": r"\)",
    "op": r"[+\-*/^~]",
    "skip": r"[ \t]+",
    "error": r".",
}
TOKEN_REGEX = re.compile("|".join(f"(?P<{name}>{text})" for name, text in TOKENS.items()))


class Token(NamedTuple):
    type: str
    value: Union[str, int]
    where: Tuple[int, int]


def tokenize(code: str) -> Iterator[Token]:
    for mo in TOKEN_REGEX.finditer(code):
        kind = str(mo.lastgroup)
        value = mo.group()
        where = mo.start(), mo.end()
        if kind == "skip":
            continue
        if kind == "error":
            raise ExpressionParseError(code, where, f"Símbolo desconocido '{value}'")
        if kind == "num":
            yield Token(kind, int(value), where)
        elif kind in ("lpar", "rpar", "op"):
            yield Token(value, value, where)
        else:
            yield Token(kind, value, where)


class Symbol:
    id = ""
    lbp = 0

    def __init__(self, parser: "Parser", value: Any = None, where: Tuple[int, int] = (0, 0)):
        self.parser = parser
        self.value = self.id if value is None else value
        self.where = where
        self.first: Optional["Symbol"] = None
        self.second: Optional["Symbol"] = None

    def fail(self, message: str) -> ExpressionParseError:
        return ExpressionParseError(self.parser.source, self.where, message)

    def nud(self) -> "Symbol":
        if self.id == "end":
            raise self.fail("Expresión incompleta")
        raise self.fail(f"Se esperaba un operando antes de '{self.value}'")

    def led(self, left: "Symbol") -> "Symbol":
        raise self.fail(f"Operador inesperado '{self.value}'")

    def eval(self, context: "ExpressionContext") -> Value:
        raise self.fail(f"No se puede evaluar '{self.value}'")


class Literal(Symbol):
    def nud(self) -> Symbol:
        return self


class Infix(Symbol):
    def led(self, left: Symbol) -> Symbol:
        self.first = left
        self.second = self.parser.expression(self.lbp)
        return self


class Parser:
    def __init__(self) -> None:
        self.source = ""
        self.symbol_table: Dict[str, type] = {}
        self.define("end")
        self.tokens: Iterator[Token] = iter([])
        self.token: Any = None

    def define(self, sid: str, lbp: int = 0, symbol_class=Symbol):
        sym = self.symbol_table[sid] = type(symbol_class.__name__, (symbol_class,), {"id": sid, "lbp": lbp})

        def wrapper(val: type) -> type:
            val.id = sid
            val.lbp = sym.lbp
            self.symbol_table[sid] = val
            return val

        return wrapper

    def expression(self, rbp: int) -> Symbol:
        tok = self.token
        self.advance()
        left = tok.nud()
        while rbp < self.token.lbp:
            tok = self.token
            self.advance()
            left = tok.led(left)
        return left

    def advance(self, value: Optional[str] = None) -> Symbol:
        symbol = self.token
        if value and value != symbol.id:
            raise ExpressionParseError(self.source, symbol.where, f"Se esperaba '{value}'")
        try:
            token = next(self.tokens)
            symbol_class = self.symbol_table.get(token.type)
            if symbol_class is None:
                raise ExpressionParseError(self.source, token.where, f"Símbolo desconocido '{token.value}'")
            self.token = symbol_class(self, token.value, token.where)
        except StopIteration:
            end = len(self.source)
            self.token = self.symbol_table["end"](self, "end", (end, end))
        return self.token

    def parse(self, source: str) -> Symbol:
        try:
            self.source = source
            self.tokens = tokenize(source)
            self.advance()
            tree = self.expression(0)
            if self.token.id != "end":
                raise ExpressionParseError(source, self.token.where, f"Símbolo inesperado '{self.token.value}'")
            return tree
        finally:
            self.tokens = iter([])
            self.token = None


class ExpressionContext:
    """
    Identificadores y operaciones de un fibrado para evaluar expresiones.

    Los campos y generadores gauge se evalúan como derivaciones trenzadas D(X).
    """

    def __init__(self, spec: BundleSpec, conv: Optional[PhaseConvention] = None):
        self.spec = spec
        self.conv = conv or spec.convention
        self._derivations: Dict[str, Derivation] = {}

    def lookup(self, name: str, where: Optional[Tuple[int, int]] = None) -> Value:
        if name in CONSTANTS:
            return CONSTANTS[name]()
        if name in self.spec.gauge or name in self.spec.symmetry:
            if name not in self._derivations:
                field = self.spec.gauge.get(name) or self.spec.symmetry[name]
                self._derivations[name] = d_apply(field).relabel(name)
            return self._derivations[name]
        value = self.spec.symbol(name)
        if value is None:
            raise UnboundIdentifierError(name, where)
        return value

    def as_poly(self, value: Value) -> Poly:
        if isinstance(value, Scalar):
            return Poly.constant(self.spec.table, value)
        return value


def _kind(value: Value) -> str:
    if isinstance(value, Scalar):
        return "escalar"
    if isinstance(value, Poly):
        return "polinomio"
    return "derivación"


expr_parser = Parser()
expr_parser.define(")")


@expr_parser.define("num")
class Number(Literal):
    def eval(self, context: ExpressionContext) -> Value:
        return Scalar.rational(self.value)


@expr_parser.define("name")
class Reference(Literal):
    def eval(self, context: ExpressionContext) -> Value:
        if self.value == KAPPA:
            raise self.fail("κ solo puede aparecer como divisor: 1/k o a/k^n")
        return context.lookup(self.value, self.where)


@expr_parser.define("+", 10)
class Plus(Infix):
    def combine(self, left: Value, right: Value, context: ExpressionContext) -> Value:
        if isinstance(left, Scalar) and isinstance(right, Scalar):
            return left + right
        if isinstance(left, Derivation) and isinstance(right, Derivation):
            return left + right
        if isinstance(left, Derivation) or isinstance(right, Derivation):
            raise self.fail(f"No se puede sumar {_kind(left)} y {_kind(right)}")
        return context.as_poly(left) + context.as_poly(right)

    def eval(self, context: ExpressionContext) -> Value:
        return self.combine(self.first.eval(context), self.second.eval(context), context)


@expr_parser.define("-", 10)
class Minus(Plus):
    def nud(self) -> Symbol:
        self.first = self.parser.expression(0)
        return self

    def eval(self, context: ExpressionContext) -> Value:
        if self.second is None:
            return -self.first.eval(context)
        return self.combine(self.first.eval(context), -self.second.eval(context), context)


@expr_parser.define("*", 20)
class Times(Infix):
    def eval(self, context: ExpressionContext) -> Value:
        left, right = self.first.eval(context), self.second.eval(context)
        conv = context.conv
        if isinstance(left, Scalar):
            if isinstance(right, Scalar):
                return left * right
            return right.scale(left)
        if isinstance(right, Scalar):
            return left.scale(right)
        if isinstance(left, Poly) and isinstance(right, Poly):
            return star(left, right, conv)
        if isinstance(left, Poly) and isinstance(right, Derivation):
            return module_act(left, right, conv)
        raise self.fail(f"Producto no definido entre {_kind(left)} y {_kind(right)}")


def _kappa_power(node: Symbol) -> int:
    """Exponente n si el divisor es k o k^n; 0 en otro caso"""
    if isinstance(node, Reference) and node.value == KAPPA:
        return 1
    if isinstance(node, Power) and isinstance(node.first, Reference) and node.first.value == KAPPA:
        return max(node.exponent, 0)
    return 0


@expr_parser.define("/", 20)
class Divide(Infix):
    def eval(self, context: ExpressionContext) -> Value:
        power = _kappa_power(self.second)
        if power:
            left = self.first.eval(context)
            factor = Scalar.kappa_inv(power)
            return left * factor if isinstance(left, Scalar) else left.scale(factor)
        left, right = self.first.eval(context), self.second.eval(context)
        single = right.single_term() if isinstance(right, Scalar) else None
        if single is None or single[0] or single[1] or not single[2].is_rational():
            raise self.fail("Solo se puede dividir por un racional no nulo")
        factor = Scalar.rational(1 / single[2].a)
        return left * factor if isinstance(left, Scalar) else left.scale(factor)


@expr_parser.define("^", 30)
class Power(Symbol):
    def led(self, left: Symbol) -> Symbol:
        self.first = left
        sign = 1
        if self.parser.token.id == "-":
            sign = -1
            self.parser.advance()
        if self.parser.token.id != "num":
            raise ExpressionParseError(self.parser.source, self.parser.token.where, "Se esperaba un exponente entero")
        self.exponent = sign * self.parser.token.value
        self.parser.advance()
        return self

    def eval(self, context: ExpressionContext) -> Value:
        base = self.first.eval(context)
        n = self.exponent
        if isinstance(base, Scalar):
            single = base.single_term()
            if n < 0:
                if single is None or single[1] or single[2] != 1:
                    raise self.fail("Solo las potencias de w admiten exponente negativo")
                return Scalar.omega(single[0] * n)
            result = Scalar.one()
            for _ in range(n):
                result = result * base
            return result
        if isinstance(base, Poly):
            if n < 0:
                raise self.fail("Potencia negativa de un polinomio")
            return star_power(base, n, context.conv)
        raise self.fail("No se puede elevar una derivación")


@expr_parser.define("~", 40)
class Conjugate(Symbol):
    def led(self, left: Symbol) -> Symbol:
        self.first = left
        return self

    def eval(self, context: ExpressionContext) -> Value:
        value = self.first.eval(context)
        if isinstance(value, Derivation):
            return derivation_star(value)
        return value.star()


@expr_parser.define("(", 90)
class Group(Symbol):
    def nud(self) -> Symbol:
        expr = self.parser.expression(0)
        self.parser.advance(")")
        return expr


def parse_expression(source: str) -> Symbol:
    """Árbol sintáctico de una expresión; lanza ExpressionParseError con posición"""
    if not source.strip():
        raise ExpressionParseError(source, (0, len(source)), "Expresión vacía")
    return expr_parser.parse(source)


def evaluate(source: str, context: ExpressionContext) -> Value:
    """
    Evalúa una expresión en el contexto de un fibrado.

    Parámetros:
        source: texto de la expresión
        context: identificadores y convención de fase

    Retorna un Scalar, un Poly o una Derivation trenzada.
    """
    tree = parse_expression(source)
    try:
        return tree.eval(context)
    except (UnboundIdentifierError, ExpressionParseError):
        raise
    except Exception as e:
        logger.error(f"Error al evaluar la expresión '{source}': {str(e)}")
        raise


def parse_scalar(source: str) -> Scalar:
    """Coeficiente escalar sin identificadores de fibrado, por ejemplo '-sqrt2' o '1/2*w^-3'"""
    tree = parse_expression(source)
    value = tree.eval(_SCALAR_CONTEXT)
    if not isinstance(value, Scalar):
        raise ExpressionParseError(source, (0, len(source)), "Se esperaba un escalar")
    return value


class _ScalarContext:
    conv = None

    def lookup(self, name: str, where: Optional[Tuple[int, int]] = None) -> Value:
        if name in CONSTANTS:
            return CONSTANTS[name]()
        raise UnboundIdentifierError(name, where)

    def as_poly(self, value: Value) -> Poly:
        raise ExpressionParseError(str(value), None, "Se esperaba un escalar")


_SCALAR_CONTEXT = _ScalarContext()


# Renderizado compatible con el parser

def _grouped(factors: Sequence[str]) -> List[str]:
    out: List[str] = []
    counts: Dict[str, int] = {}
    for name in factors:
        counts[name] = counts.get(name, 0) + 1
    for name in dict.fromkeys(factors):
        out.append(name if counts[name] == 1 else f"{name}^{counts[name]}")
    return out


def render_poly(p: Poly, conv: PhaseConvention) -> str:
    """
    Texto en orden estrella: cada monomio se escribe como g₁•g₂•… en el orden de la
    tabla y su coeficiente absorbe la fase compensatoria, de modo que el parser
    reconstruye exactamente p.
    """
    if p.is_zero():
        return "0"
    table = p.table
    rendered = []
    for mono, coeff in p.terms():
        weights = [table.generators[pos].weight.scaled(exp) for pos, exp in enumerate(mono) if exp]
        rendered.append(render_term(coeff.times_omega(-ordering_phase(weights, conv)), monomial_factors(table, mono)))
    return join_signed_terms(rendered)


def render_module_terms(terms: Sequence[ModuleTerm]) -> str:
    """Combinación Σ c·b•G̃, por ejemplo `sqrt2*beta*W11`"""
    if not terms:
        return "0"
    return join_signed_terms([render_term(term.coeff, _grouped(term.factors) + [term.generator]) for term in terms])


def render_action(X: Derivation) -> str:
    """Tabla de acción sobre generadores cuando no hay combinación en una base"""
    if X.is_zero():
        return "0"
    table = X.table
    return "{" + "; ".join(f"{table.generators[pos].name} -> {image.render_classical()}" for pos, image in X.items()) + "}"


def render_derivation(X: Derivation, spec: BundleSpec, conv: Optional[PhaseConvention] = None) -> str:
    """Se intenta la base gauge, luego los campos de simetría y por último la tabla de acción"""
    conv = conv or spec.convention
    if X.is_zero():
        return "0"
    try:
        X.require_weight()
    except InhomogeneousError:
        return render_action(X)
    for basis in (spec.gauge, spec.symmetry):
        terms = express_in_basis(X, basis, spec.base, spec.relations, conv)
        if terms is not None:
            return render_module_terms(terms)
    return render_action(X)


def render_value(value: Value, spec: BundleSpec, conv: Optional[PhaseConvention] = None) -> str:
    conv = conv or spec.convention
    if isinstance(value, Scalar):
        return value.render()
    if isinstance(value, Poly):
        return render_poly(value, conv)
    return render_derivation(value, spec, conv)


def bracket_values(left: Value, right: Value, context: ExpressionContext) -> Value:
    """
    Corchete trenzado de dos valores ya evaluados.

    Derivaciones: [X̃, Ỹ]; derivación y polinomio: X̃(a) y su antisimétrico;
    polinomios: conmutador trenzado a•b − ω^{braid}b•a. Con relaciones de
    sustitución el resultado se reduce.
    """
    spec, conv = context.spec, context.conv
    if isinstance(left, Scalar) or isinstance(right, Scalar):
        return Scalar.zero()
    if isinstance(left, Derivation) and isinstance(right, Derivation):
        return braided_bracket(left, right, conv)
    if isinstance(left, Derivation):
        result = apply(left, right, conv)
    elif isinstance(right, Derivation):
        result = Poly.zero(spec.table)
        for weight, part in left.weight_components().items():
            braid = braid_phase(weight, right.require_weight(), conv)
            result = result - apply(right, part, conv).times_omega(braid)
    else:
        result = Poly.zero(spec.table)
        right_parts = right.weight_components()
        for m, a in left.weight_components().items():
            for s, b in right_parts.items():
                result = result + star(a, b, conv) - star(b, a, conv).times_omega(braid_phase(m, s, conv))
    if spec.relations.mode == spec.relations.SUBSTITUTION:
        result = reduce(result, spec.relations)
    return result

