import math
from fractions import Fraction
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field


class OrthoEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    norm: int = Field(..., gt=0)
    numerator: int = Field(..., gt=0, description="2·Σ φ_K(q) по q нормы norm")

    @property
    def length(self) -> float:
        return math.log(self.norm)


class OrthoSpectrum(BaseModel):
    """
    Спектр длин общих перпендикуляров 2 ln|q| = ln N(q), q ∈ 𝔟 − {0}, |q| ≤ N,
    с кратностями numerator / unit_count.
    """

    model_config = ConfigDict(frozen=True)

    discriminant: int
    generator: Tuple[int, int]
    horizon: int
    unit_count: int
    entries: List[OrthoEntry] = Field(default_factory=list)

    def multiplicity(self, entry: OrthoEntry) -> Fraction:
        return Fraction(entry.numerator, self.unit_count)

    def multiplicities(self) -> dict:
        return {e.norm: self.multiplicity(e) for e in self.entries}


class Prop71Report(BaseModel):
    """Сравнение меры пар спектра с образом 2Re эйлерово-взвешенного множества."""

    equal: bool
    atoms_left: int
    atoms_right: int
    mismatched: int
    max_discrepancy: float
