# Modelos del motor simbólico

from app.models.scalar import AlgebraicCoeff, Scalar
from app.models.weight import DEFAULT_CONVENTION, PhaseConvention, Weight
from app.models.poly import Generator, GeneratorTable, Poly, RelationSet
from app.models.derivation import Derivation, DerivationMode
from app.models.bundle import BundleSpec, JordanianSpec

# Exportar todos los modelos
__all__ = [
    'AlgebraicCoeff',
    'Scalar',
    'Weight',
    'PhaseConvention',
    'DEFAULT_CONVENTION',
    'Generator',
    'GeneratorTable',
    'Poly',
    'RelationSet',
    'Derivation',
    'DerivationMode',
    'BundleSpec',
    'JordanianSpec',
]
