import logging
from typing import Any, Dict

from services.commands.BaseCommand import BaseCommand
from services.commands.models import RunConfig
from services.commands.theory.TheoryCommand import build_density, density_jumps
from services.correlation.compare import compare
from services.errors import ConfigError
from transport.csv.HistogramWriter import HistogramWriter
from transport.json.SummaryWriter import RunSummary

logger = logging.getLogger(__name__)


class CompareCommand(BaseCommand):
    """
    Сравнение эмпирической гистограммы (CSV) с теоретической гистограммой
    (CSV) или с плотностью, заданной --density.
    """

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        if not config.empirical_csv:
            raise ConfigError("Нужен --empirical-csv")
        hist = HistogramWriter.read_hist2d(config.empirical_csv)

        if config.theory_csv:
            expected = HistogramWriter.read_hist2d(config.theory_csv)
        elif config.density:
            expected = build_density(config)
        else:
            raise ConfigError("Нужен --theory-csv или --density")

        exclude = []
        if config.exclude_discontinuities and config.density:
            exclude = density_jumps(config, hist.geometry.enclosing_radius)

        report = compare(hist, expected, config.quadrature_rule(), exclude, config.r_range())
        summary = RunSummary(
            command=config.command,
            config=config.echo(),
            total_raw_mass=hist.total_raw_mass,
            renormalizer=hist.renormalizer,
            metrics=report,
        )
        return self.finish(config, summary)
