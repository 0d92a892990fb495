import logging
from typing import Any, Dict, List

from services.commands.BaseCommand import BaseCommand
from services.commands.models import RunConfig
from services.correlation.compare import theory_histogram
from services.correlation.densities import (
    BaseDensity,
    PoissonianDensity,
    ThetaDensity,
    UnscaledDensity,
    UnscaledN4Density,
    WeightedLinearDensity,
)
from services.correlation.models import RegimeKind
from services.errors import ConfigError
from services.lattices.grid import discontinuity_radii, grid_from_ideal
from services.lattices.models import Grid
from transport.json.SummaryWriter import RunSummary

logger = logging.getLogger(__name__)

DENSITIES = ("unscaled", "unscaled-euler", "unscaled-n4", "poissonian", "theta-infty", "theta-n", "weighted-linear")
CYLINDER_DENSITIES = ("unscaled", "unscaled-euler", "unscaled-n4")


def _grid(config: RunConfig) -> Grid:
    if config.field is not None:
        return grid_from_ideal(config.ideal_generator())
    return config.grid_source()


def _lambda(config: RunConfig) -> float:
    if config.density == "theta-n":
        if config.N is None:
            raise ConfigError("Плотности theta-n нужен --N")
        return config.scaling_spec().psi(config.N) / config.N
    if config.lam is not None:
        return config.lam
    regime = config.scaling_spec().regime
    if regime.kind != RegimeKind.FINITE:
        raise ConfigError("Плотности theta-infty нужен --lam или масштабирование power:1[:c]")
    return regime.lam


def build_density(config: RunConfig) -> BaseDensity:
    """Плотность по имени --density."""
    kind = config.density
    if kind not in DENSITIES:
        raise ConfigError(f"Неизвестная плотность '{kind}', доступны: {', '.join(DENSITIES)}")
    if kind == "unscaled":
        return UnscaledDensity("unit")
    if kind == "unscaled-euler":
        return UnscaledDensity("euler")
    if kind == "unscaled-n4":
        return UnscaledN4Density(_grid(config))
    if kind == "poissonian":
        return PoissonianDensity(_grid(config))
    if kind in ("theta-infty", "theta-n"):
        return ThetaDensity(_grid(config), _lambda(config))
    return WeightedLinearDensity(config.number_field(), config.ideal_generator(), config.prime_bound)


def density_jumps(config: RunConfig, radius: float) -> List[float]:
    """Радиусы окружностей разрыва радиальной плотности внутри диска."""
    if config.density in ("theta-infty", "theta-n"):
        lam = _lambda(config)
        return [lam * r for r in discontinuity_radii(_grid(config), radius / lam)]
    if config.density == "weighted-linear":
        return discontinuity_radii(grid_from_ideal(config.ideal_generator()), radius)
    return []


def theory_geometry(config: RunConfig):
    return config.hist_geometry(psi_regime_scaled=config.density not in CYLINDER_DENSITIES)


class TheoryCommand(BaseCommand):
    """Теоретическая гистограмма: интегралы плотности по бинам."""

    def execute(self, config: RunConfig) -> Dict[str, Any]:
        density = build_density(config)
        geometry = theory_geometry(config)
        hist = theory_histogram(geometry, density, config.quadrature_rule(), meta={"density": config.density})
        if config.out:
            self.writer(config).write_hist2d(hist, config.out)
        logger.info(f"[TheoryCommand] {config.density}: масса в окне {hist.window_mass:.6g}")
        summary = RunSummary(
            command=config.command,
            config=config.echo(),
            extra={"window_mass": hist.window_mass},
        )
        return self.finish(config, summary)
