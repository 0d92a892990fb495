import logging
from typing import Any, Dict

from services.commands.BaseCommand import BaseCommand
from services.commands.models import RunConfig
from services.correlation.PairHistogrammer import PairHistogrammer
from services.correlation.logsets import build_logset
from transport.json.SummaryWriter import RunSummary

logger = logging.getLogger(__name__)


class EmpiricalCommand(BaseCommand):
    """Эмпирическая гистограмма меры пар."""

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        scaling = config.scaling_spec()
        logset = build_logset(config.source(), config.N, config.weights)
        histogrammer = PairHistogrammer(
            logset,
            scaling,
            config.hist_geometry(),
            renorm=config.renorm_spec(),
            diagonal_included=config.diagonal,
            workers=config.workers,
        )
        hist = histogrammer.execute(config.method)

        if config.out:
            self.writer(config).write_hist2d(hist, config.out)

        summary = RunSummary(
            command=config.command,
            config=config.echo(),
            total_raw_mass=hist.total_raw_mass,
            renormalizer=hist.renormalizer,
            extra={
                "points": len(logset),
                "psi": histogrammer.psi,
                "regime": scaling.regime.model_dump(mode="json"),
                "window_mass": hist.window_mass,
                "window_raw_mass": int(hist.raw.sum()),
                "method": hist.meta["method"],
            },
        )
        return self.finish(config, summary)
