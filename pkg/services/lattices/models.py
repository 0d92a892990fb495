import math
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from services.errors import ValidationFailure


class Grid(BaseModel):
    """
    ℤ-решетка со сдвигом a + Λ на плоскости.

    Атрибуты:
        basis: точный приведенный базис (v1, v2), координаты заданы выражениями sympy
        gram: точная матрица Грама (g11, g12, g22), g12 ≤ 0
        shift: координаты сдвига a в базисе (v1, v2), каждая в [0, 1)
        v1, v2: базис как комплексные числа
        discriminant: дискриминант поля, если решетка является идеалом 𝒪_K
        embedding: координаты v1, v2 по базису (1, ω) кольца 𝒪_K
        generator: образующий идеала по базису (1, ω)
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    basis: Tuple[Tuple[object, object], Tuple[object, object]]
    gram: Tuple[Fraction, Fraction, Fraction]
    shift: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    v1: complex
    v2: complex
    discriminant: Optional[int] = None
    embedding: Optional[Tuple[Tuple[int, int], Tuple[int, int]]] = None
    generator: Optional[Tuple[int, int]] = None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grid):
            return False
        same_basis = all(
            (a - b).equals(0) for va, vb in zip(self.basis, other.basis) for a, b in zip(va, vb)
        )
        return same_basis and self.gram == other.gram and self.shift == other.shift

    def __hash__(self) -> int:
        return hash((self.gram, self.shift))

    @property
    def gram_det(self) -> Fraction:
        g11, g12, g22 = self.gram
        return g11 * g22 - g12 * g12

    @property
    def covol(self) -> float:
        return math.sqrt(self.gram_det)

    @property
    def systole(self) -> float:
        return math.sqrt(self.gram[0])

    @property
    def diam(self) -> float:
        g11, g12, g22 = self.gram
        return math.sqrt(g11 + g22 + 2 * abs(g12))

    @property
    def is_lattice(self) -> bool:
        return self.shift == (Fraction(0), Fraction(0))

    @property
    def offset(self) -> complex:
        s, t = self.shift
        return float(s) * self.v1 + float(t) * self.v2

    @property
    def shift_den(self) -> int:
        return math.lcm(self.shift[0].denominator, self.shift[1].denominator)

    @property
    def form(self) -> Tuple[int, int, int, int]:
        """
        Целочисленная форма |p|²: для p = (m+s)v1 + (n+t)v2 и
        M = d·m + d·s, N = d·n + d·t (d: знаменатель сдвига)
        |p|² = (A M² + B M N + C N²) / den.

        :return: (A, B, C, den)
        """
        g11, g12, g22 = self.gram
        scale = math.lcm(g11.denominator, (2 * g12).denominator, g22.denominator)
        d = self.shift_den
        return (
            int(g11 * scale),
            int(2 * g12 * scale),
            int(g22 * scale),
            scale * d * d,
        )


class Sector(BaseModel):
    """
    Усеченный угловой сектор C(z, θ, R): точки ρe^{it}z с t ∈ (−θ/2, θ/2]
    и 0 < ρ ≤ R/|z|, т.е. 0 < |p| ≤ R.
    """

    model_config = ConfigDict(frozen=True)

    direction: complex = Field(..., description="Ненулевое направление z")
    aperture: float = Field(..., description="Раствор θ ∈ (0, 2π]")
    radius: float = Field(..., ge=0, description="Радиус R ≥ 0")

    @field_validator("direction")
    @classmethod
    def _nonzero(cls, value: complex) -> complex:
        if value == 0:
            raise ValidationFailure("Направление сектора должно быть ненулевым")
        return value

    @field_validator("aperture")
    @classmethod
    def _aperture(cls, value: float) -> float:
        if not 0 < value <= 2 * math.pi + 1e-12:
            raise ValidationFailure(f"Раствор сектора должен лежать в (0, 2π], получено {value}")
        return value

    @property
    def full(self) -> bool:
        return self.aperture >= 2 * math.pi


class GridPoints(BaseModel):
    """
    Точки решетки в каноничном (лексикографическом по (m, n)) порядке.

    Атрибуты:
        coords: целые координаты (m, n) в приведенном базисе
        norm_num: числители |p|² (общий знаменатель norm_den)
        values: точки как комплексные числа
        alg: координаты по (1, ω) для решеток-идеалов
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    coords: np.ndarray
    norm_num: np.ndarray
    norm_den: int
    values: np.ndarray
    alg: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return int(self.norm_num.shape[0])

    def moduli(self) -> np.ndarray:
        return np.sqrt(self.norm_num / self.norm_den)

    def tuples(self) -> list:
        """Точки как пары (Re, Im) с округлением до 12 знаков для сравнения в тестах."""
        return [(round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0) for z in self.values]

    def select(self, mask: np.ndarray) -> "GridPoints":
        return GridPoints(
            coords=self.coords[mask],
            norm_num=self.norm_num[mask],
            norm_den=self.norm_den,
            values=self.values[mask],
            alg=None if self.alg is None else self.alg[mask],
        )
