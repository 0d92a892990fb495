import os
from abc import ABC, abstractmethod
from typing import Any, Dict

from services.commands.models import RunConfig
from transport.csv.HistogramWriter import HistogramWriter
from transport.json.SummaryWriter import RunSummary, SummaryWriter


class BaseCommand(ABC):
    """
    Абстрактный базовый класс команд CLI.
    Команда получает проверенную конфигурацию и возвращает словарь-сводку;
    артефакты (CSV, JSON) пишутся по путям из конфигурации.
    """

    @staticmethod
    def writer(config: RunConfig) -> HistogramWriter:
        """CSV-писатель, который повторяет конфигурацию в комментариях."""
        echo = config.echo()
        echo.pop("out", None)
        echo.pop("summary", None)
        return HistogramWriter({key: str(value) for key, value in echo.items()})

    @staticmethod
    def sibling(path: str, tag: str) -> str:
        """Путь соседнего артефакта: out.csv → out.<tag>.csv."""
        stem, ext = os.path.splitext(path)
        return f"{stem}.{tag}{ext or '.csv'}"

    @staticmethod
    def finish(config: RunConfig, summary: RunSummary) -> Dict[str, Any]:
        if config.summary:
            SummaryWriter().write(summary, config.summary)
        return summary.model_dump(mode="json")

    @abstractmethod
    def execute(self, config: RunConfig) -> Dict[str, Any]:
        """
        Выполняет команду.

        :param config: конфигурация запуска
        :return: сводка результата (сериализуемая в JSON)
        :raises LogLatticeError: ошибки валидации и вычисления
        """
        pass
