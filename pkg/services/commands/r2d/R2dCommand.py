import logging
from typing import Any, Dict

import sympy

from services.commands.BaseCommand import BaseCommand
from services.commands.models import RunConfig
from services.correlation.compare import compare_1d
from services.correlation.densities import density_real
from services.correlation.logsets import build_logset
from services.correlation.pushforward import pushforward_2re
from services.lattices.grid import make_grid
from services.sums.counting import r2d_pair_measure
from transport.json.SummaryWriter import RunSummary

logger = logging.getLogger(__name__)


class R2dCommand(BaseCommand):
    """Мера Σ r_{2,d}(m) r_{2,d}(n) Δ_{ln m − ln n} и ее сравнение с (1/2)e^{−|t|}."""

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        N = config.N or 10
        measure = r2d_pair_measure(config.d, N)
        hist = measure.to_histogram(config.half_width, config.bins)
        if config.out:
            writer = self.writer(config)
            writer.write_atoms(measure, config.out)
            writer.write_hist1d(hist, self.sibling(config.out, "hist"))

        report = compare_1d(hist, lambda t: density_real(t, "r2d"), config.quadrature_rule())
        extra = {"atoms": len(measure.atoms), "total_mass": str(measure.total())}

        if config.verify:
            grid = make_grid((1, 0), (0, sympy.sqrt(config.d)))
            pushed = pushforward_2re(build_logset(grid, N), diagonal_included=True)
            extra["pushforward_equal"] = pushed.atoms == measure.atoms
            logger.info(f"[R2dCommand] d={config.d}, N={N}: равенство {extra['pushforward_equal']}")

        summary = RunSummary(command=config.command, config=config.echo(), metrics=report, extra=extra)
        return self.finish(config, summary)
