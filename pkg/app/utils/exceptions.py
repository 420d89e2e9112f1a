from typing import Optional, Tuple


class BundleEngineError(Exception):
    """Error base del motor simbólico"""

    def __init__(self, message: str = "Error en el motor simbólico"):
        self.message = message
        super().__init__(self.message)


class EngineFault(BundleEngineError):
    """Falla interna: dos rutas de cálculo independientes no coinciden"""


class InhomogeneousError(BundleEngineError):
    """Operación trenzada sobre un elemento sin peso homogéneo"""


class GeneratorTableMismatch(BundleEngineError):
    """Polinomios o derivaciones definidos sobre tablas de generadores distintas"""


class RelationError(BundleEngineError):
    """Conjunto de relaciones inválido o cota de grado insuficiente"""


class FixtureError(BundleEngineError):
    """Archivo de datos de referencia inválido o ausente"""


class UnboundIdentifierError(BundleEngineError):
    """Identificador no definido en el fibrado elegido"""

    def __init__(self, name: str, position: Optional[Tuple[int, int]] = None):
        self.name = name
        self.position = position
        super().__init__(f"Identificador no definido: {name}")


class ExpressionParseError(BundleEngineError):
    """Error de sintaxis en el mini-lenguaje de expresiones"""

    def __init__(
        self,
        code: str,
        position: Optional[Tuple[int, int]] = None,
        message: Optional[str] = None,
    ):
        self.code = code
        self.position = position
        super().__init__(message or "Error de sintaxis")

    def highlight(self) -> str:
        """Retorna la expresión con la posición del error subrayada"""
        if not self.position:
            return self.code
        start, end = self.position
        return f"{self.code}\n{' ' * start}{'^' * max(1, end - start)}"


class StarProductError(BundleEngineError):
    """Muestreo del producto estrella mal configurado"""
