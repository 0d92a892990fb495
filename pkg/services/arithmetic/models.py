import math
from enum import Enum
from fractions import Fraction
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field as PydanticField, field_validator

from services.arithmetic.AlgInt import AlgInt
from services.errors import UnknownField

# Дискриминанты мнимых квадратичных полей с однозначным разложением
PRINCIPAL_DISCRIMINANTS = (-4, -8, -3, -7, -11, -19, -43, -67, -163)


class Field(BaseModel):
    """
    Мнимое квадратичное поле K с главным кольцом целых 𝒪_K = ℤ + ℤω.

    ω² = trace·ω − norm_omega, где
    D ≡ 0 (mod 4): ω = √D/2, trace = 0, norm_omega = −D/4;
    D ≡ 1 (mod 4): ω = (1+√D)/2, trace = 1, norm_omega = (1−D)/4.
    """

    model_config = ConfigDict(frozen=True)

    discriminant: int = PydanticField(..., description="Дискриминант D_K")

    @field_validator("discriminant")
    @classmethod
    def _check_discriminant(cls, value: int) -> int:
        if value not in PRINCIPAL_DISCRIMINANTS:
            raise UnknownField(
                f"Дискриминант {value} не поддерживается, допустимы: {PRINCIPAL_DISCRIMINANTS}"
            )
        return value

    @property
    def trace(self) -> int:
        return 0 if self.discriminant % 4 == 0 else 1

    @property
    def norm_omega(self) -> int:
        if self.discriminant % 4 == 0:
            return -self.discriminant // 4
        return (1 - self.discriminant) // 4

    @property
    def abs_disc(self) -> int:
        return -self.discriminant

    @property
    def unit_count(self) -> int:
        return {-4: 4, -3: 6}.get(self.discriminant, 2)

    @property
    def omega(self) -> complex:
        return complex(self.trace / 2, math.sqrt(self.abs_disc) / 2)

    @property
    def covolume(self) -> float:
        """Площадь фундаментального параллелограмма 𝒪_K."""
        return math.sqrt(self.abs_disc) / 2

    @property
    def name(self) -> str:
        if self.discriminant == -4:
            return "Q(i)"
        if self.discriminant == -8:
            return "Q(i√2)"
        if self.discriminant % 4 == 0:
            return f"Q(√{self.discriminant // 4})"
        return f"Q(√{self.discriminant})"

    def element(self, x: int, y: int) -> AlgInt:
        return AlgInt(x, y, self)

    def one(self) -> AlgInt:
        return AlgInt(1, 0, self)


class SplitType(str, Enum):
    """Тип разложения рационального простого в 𝒪_K."""

    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


class PrimeSplit(BaseModel):
    """
    Разложение рационального простого p.

    Атрибуты:
        p: рациональное простое
        kind: тип разложения
        generators: образующие простых идеалов над p (π и π̄ для split, p для inert)
        ideal_norms: нормы соответствующих простых идеалов
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p: int
    kind: SplitType
    generators: Tuple[AlgInt, ...]
    ideal_norms: Tuple[int, ...]


class IdealFactorization(BaseModel):
    """Разложение a = unit · ∏ πᵢ^eᵢ с попарно неассоциированными πᵢ."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    unit: AlgInt
    factors: Tuple[Tuple[AlgInt, int], ...] = ()

    def prime_norms(self) -> List[int]:
        return [prime.norm() for prime, _ in self.factors]

    def expand(self) -> AlgInt:
        result = self.unit
        for prime, exponent in self.factors:
            for _ in range(exponent):
                result = result * prime
        return result


class EulerProduct(BaseModel):
    """Значение усеченного эйлерова произведения и оценка хвоста логарифма."""

    value: float
    tail_bound: float = PydanticField(..., description="Оценка |log(истинное) − log(value)|")
    prime_bound: int


class ZetaValue(BaseModel):
    value: float
    error_bound: float
    terms: int


class ExactConstant(BaseModel):
    """Точная рациональная константа и ее вещественное значение."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    exact: Fraction
    value: float
