from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Weight:
    """Peso toral duplicado: (m1, m2) = 2 × autovalores de (H1, H2)"""

    m1: int = 0
    m2: int = 0

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.m1 + other.m1, self.m2 + other.m2)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.m1 - other.m1, self.m2 - other.m2)

    def __neg__(self) -> "Weight":
        return Weight(-self.m1, -self.m2)

    def scaled(self, n: int) -> "Weight":
        return Weight(n * self.m1, n * self.m2)

    def is_zero(self) -> bool:
        return self.m1 == 0 and self.m2 == 0

    def label(self) -> str:
        return f"({self.m1},{self.m2})"


ZERO_WEIGHT = Weight(0, 0)


@dataclass(frozen=True)
class PhaseConvention:
    """
    Convención de fase del twist abeliano.

    normalization: 1 para el twist e^{πiθ(...)}, 2 para e^{2πiθ(...)}.
    sign: orientación ε ∈ {+1, -1}; con F̄ actuando en el producto vale -1.
    """

    normalization: int = 1
    sign: int = -1

    def __post_init__(self):
        if self.normalization not in (1, 2):
            raise ValueError(f"Normalización inválida: {self.normalization}")
        if self.sign not in (1, -1):
            raise ValueError(f"Signo inválido: {self.sign}")

    @classmethod
    def from_labels(cls, theta_normalization: str = "pi", sign: str = "-") -> "PhaseConvention":
        normalization = {"pi": 1, "2pi": 2}.get(theta_normalization)
        if normalization is None:
            raise ValueError(f"Normalización de θ desconocida: {theta_normalization}")
        return cls(normalization=normalization, sign=-1 if sign.strip() == "-" else 1)

    @property
    def factor(self) -> int:
        return self.sign * self.normalization

    def label(self) -> str:
        return f"n_c={self.normalization}, ε={'+' if self.sign > 0 else '-'}"


DEFAULT_CONVENTION = PhaseConvention()
