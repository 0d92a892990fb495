import logging
import os
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field

from services.correlation.models import CompareReport

logger = logging.getLogger(__name__)


class RunSummary(BaseModel):
    """
    JSON-сводка запуска.

    Атрибуты:
        command: имя команды
        config: эхо конфигурации
        total_raw_mass: точная масса пар до перенормировки
        renormalizer: значение делителя ψ′(N)
        metrics: метрики сравнения (L1, sup, радиальный профиль)
        constants: константы с оценками хвоста
        extra: прочие величины команды
    """

    command: str
    config: Dict[str, Any] = Field(default_factory=dict)
    total_raw_mass: Optional[int] = None
    renormalizer: Optional[float] = None
    metrics: Optional[CompareReport] = None
    constants: Dict[str, Any] = Field(default_factory=dict)
    extra: Dict[str, Any] = Field(default_factory=dict)


class SummaryWriter:
    """Запись сводки в JSON через pydantic."""

    def __init__(self, indent: int = 2):
        self.indent = indent

    def write(self, summary: RunSummary, path: str) -> None:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(summary.model_dump_json(indent=self.indent))
        logger.info(f"[SummaryWriter] Сводка записана в {path}")

    @staticmethod
    def read(path: str) -> RunSummary:
        with open(path, "r", encoding="utf-8") as f:
            return RunSummary.model_validate_json(f.read())
