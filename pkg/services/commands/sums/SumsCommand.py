import logging
from typing import Any, Dict

from services.commands.BaseCommand import BaseCommand
from services.commands.models import RunConfig
from services.errors import ConfigError
from services.lattices.grid import gauss_error_bound, power_sum, power_sum_asymptotic
from services.sums.counting import ideal_count, prop65_partial_sum
from services.sums.models import SumReport
from services.sums.sectorial import mertens_sum, mirsky_sum
from transport.json.SummaryWriter import RunSummary

logger = logging.getLogger(__name__)

KINDS = ("power", "mertens", "mirsky", "ideal-count", "prop65")


class SumsCommand(BaseCommand):
    """Арифметические суммы перебором против главного члена."""

    def _power(self, config: RunConfig) -> SumReport:
        grid = config.grid_source()
        brute = power_sum(grid, config.power, config.x)
        return SumReport(
            brute=brute,
            predicted=power_sum_asymptotic(grid, config.power, config.x),
            inputs={"grid": config.grid or "gauss", "k": str(config.power), "x": repr(config.x)},
            extra={"error_bound_k0": gauss_error_bound(grid, config.x)},
        )

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        if config.kind not in KINDS:
            raise ConfigError(f"Неизвестный вид суммы '{config.kind}', доступны: {', '.join(KINDS)}")
        if config.x is None:
            raise ConfigError("Нужен --x")

        if config.kind == "power":
            report = self._power(config)
        elif config.kind == "mertens":
            report = mertens_sum(config.number_field(), config.ideal_generator(), config.sector(), config.x)
        elif config.kind == "mirsky":
            report = mirsky_sum(
                config.number_field(),
                config.ideal_generator(),
                config.element(config.k, "k"),
                config.sector(),
                config.x,
                config.prime_bound,
            )
        elif config.kind == "ideal-count":
            report = ideal_count(config.number_field(), config.x)
        else:
            report = prop65_partial_sum(config.number_field(), config.x, config.prime_bound)

        logger.info(f"[SumsCommand] {config.kind}: отношение {report.ratio}")
        summary = RunSummary(command=config.command, config=config.echo(), extra={"sum": report.model_dump(mode="json")})
        return self.finish(config, summary)
