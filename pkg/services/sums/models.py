from typing import Dict, Optional

from pydantic import BaseModel, Field, model_validator


class SumReport(BaseModel):
    """
    Результат прямого перебора и главный член асимптотики.

    Атрибуты:
        brute: значение суммы перебором
        exact: то же значение как целое, если сумма целочисленная
        predicted: главный член
        ratio: brute / predicted (None при predicted = 0)
        inputs: параметры вызова
        extra: дополнительные величины (константы, второй путь вычисления)
    """

    brute: float
    exact: Optional[int] = None
    predicted: float
    ratio: Optional[float] = None
    inputs: Dict[str, str] = Field(default_factory=dict)
    extra: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _fill_ratio(self) -> "SumReport":
        if self.ratio is None and self.predicted != 0:
            self.ratio = self.brute / self.predicted
        return self
