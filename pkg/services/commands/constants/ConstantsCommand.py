import logging
from typing import Any, Dict

from config import ZETA_TOLERANCE
from services.arithmetic.constants import (
    limit_constant,
    mertens_constant_c_m,
    partial_sum_constant,
    tail_bound,
    zeta_K_2,
)
from services.commands.BaseCommand import BaseCommand
from services.commands.models import RunConfig
from transport.json.SummaryWriter import RunSummary

logger = logging.getLogger(__name__)


def field_constants(field, prime_bound: int, tolerance: float = ZETA_TOLERANCE) -> Dict[str, Any]:
    """Константы поля с оценками ошибок; общий код для CLI и HTTP."""
    zeta = zeta_K_2(field, tolerance)
    limit = limit_constant(field, prime_bound)
    c1 = partial_sum_constant(field, prime_bound)
    return {
        "field": field.discriminant,
        "name": field.name,
        "unit_count": field.unit_count,
        "covolume": field.covolume,
        "zeta_K_2": {"value": zeta.value, "error_bound": zeta.error_bound, "terms": zeta.terms},
        "limit_constant": {"value": limit.value, "tail_bound": limit.tail_bound},
        "partial_sum_constant": {"value": c1.value, "tail_bound": c1.tail_bound},
        "prime_bound": prime_bound,
        "log_tail_bound": tail_bound(prime_bound),
    }


class ConstantsCommand(BaseCommand):
    """ζ_K(2), предельная константа и C₁ для поля."""

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        field = config.number_field()
        constants = field_constants(field, config.prime_bound)
        m = config.ideal_generator()
        if m.norm() != 1:
            c_m = mertens_constant_c_m(m)
            constants["c_m"] = {"exact": str(c_m.exact), "value": c_m.value}
        logger.info(f"[ConstantsCommand] {field.name}: предельная константа {constants['limit_constant']['value']:.6f}")
        summary = RunSummary(command=config.command, config=config.echo(), constants=constants)
        return self.finish(config, summary)
