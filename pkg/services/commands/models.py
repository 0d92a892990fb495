import math
from typing import Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import BINS, DEFAULT_PRIME_BOUND, SUBSAMPLE, WORKERS
from presets.PresetProvider import PresetProvider
from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.fields import get_field
from services.arithmetic.models import Field as NumberField
from services.correlation.models import (
    GeometryKind,
    HistGeometry,
    RenormKind,
    RenormSpec,
    ScalingSpec,
    WeightKind,
)
from services.errors import ConfigError, ValidationFailure
from services.lattices.grid import make_grid
from services.lattices.models import Grid, Sector

COMMANDS = ("empirical", "theory", "compare", "sums", "r2d", "ortho", "constants")


def parse_pair(text: str, what: str) -> Tuple[int, int]:
    """'x,y' → (x, y) целых."""
    try:
        x, y = (int(part) for part in str(text).split(","))
    except ValueError:
        raise ValidationFailure(f"{what}: ожидалось 'x,y' из целых, получено '{text}'")
    return x, y


class RunConfig(BaseModel):
    """
    Полная конфигурация одного запуска CLI.

    Источник точек: либо решетка (grid: имя пресета или 'x1,y1;x2,y2',
    offset: сдвиг 'x,y'), либо поле (field: дискриминант) и образующий
    идеала ideal = 'x,y' по базису (1, ω).
    """

    model_config = ConfigDict(extra="forbid")

    command: str

    # источник
    grid: Optional[str] = None
    offset: Optional[str] = None
    field: Optional[int] = None
    ideal: str = "1,0"

    # мера пар
    N: Optional[int] = Field(None, ge=1)
    scaling: str = "one"
    window: float = Field(5.0, gt=0, description="A для plane/polar, X для cylinder")
    bins: int = Field(BINS, ge=1)
    bins_im: Optional[int] = Field(None, ge=1)
    geometry: Optional[GeometryKind] = None
    weights: WeightKind = WeightKind.UNIT
    renorm: Optional[str] = None
    diagonal: bool = False
    method: str = "auto"
    force: bool = False

    # теория и сравнение
    density: Optional[str] = None
    lam: Optional[float] = Field(None, gt=0)
    quadrature: str = "subsample"
    subsample: int = Field(SUBSAMPLE, ge=1)
    empirical_csv: Optional[str] = None
    theory_csv: Optional[str] = None
    r_min: Optional[float] = None
    r_max: Optional[float] = None
    exclude_discontinuities: bool = False

    # суммы
    kind: Optional[str] = None
    x: Optional[float] = None
    k: str = "0,0"
    power: int = Field(0, ge=0, description="k в Σ|p|^k для kind=power")
    direction: str = "1,0"
    aperture: float = Field(2 * math.pi, gt=0)

    # r2d / ortho
    d: int = Field(1, ge=1)
    half_width: float = Field(3.0, gt=0)
    verify: bool = False

    # общее
    prime_bound: int = Field(DEFAULT_PRIME_BOUND, ge=2)
    workers: int = Field(WORKERS, ge=1)
    out: Optional[str] = None
    summary: Optional[str] = None

    @field_validator("command")
    @classmethod
    def _check_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ConfigError(f"Неизвестная команда '{value}', доступны: {', '.join(COMMANDS)}")
        return value

    @field_validator("method")
    @classmethod
    def _check_method(cls, value: str) -> str:
        if value not in ("auto", "naive", "windowed"):
            raise ConfigError(f"Неизвестный метод перебора '{value}'")
        return value

    @model_validator(mode="after")
    def _check_combinations(self) -> "RunConfig":
        if self.grid is not None and self.field is not None:
            raise ConfigError("Укажите либо --grid, либо --field")
        if self.weights == WeightKind.EULER and self.field is None:
            raise ConfigError("Веса euler требуют источник --field (идеал 𝒪_K)")
        if self.command in ("empirical", "ortho") and self.N is None:
            raise ConfigError(f"Команде {self.command} нужен --N")
        if self.command == "empirical":
            scaling = self.scaling_spec()
            renorm = self.renorm_spec()
            if scaling.regime.scaled and renorm.kind == RenormKind.PROBABILITY and not self.force:
                raise ConfigError(
                    "Вероятностная нормировка неприменима в масштабированном режиме; используйте --force"
                )
        return self

    #region Разбор

    def scaling_spec(self) -> ScalingSpec:
        return ScalingSpec.parse(self.scaling)

    def renorm_spec(self) -> RenormSpec:
        if self.renorm is None:
            return RenormSpec.default_for(self.scaling_spec().regime, self.weights)
        return RenormSpec.parse(self.renorm)

    def number_field(self) -> NumberField:
        if self.field is None:
            raise ConfigError("Нужен --field (дискриминант)")
        return get_field(self.field)

    def ideal_generator(self) -> AlgInt:
        return AlgInt(*parse_pair(self.ideal, "ideal"), self.number_field())

    def element(self, text: str, what: str) -> AlgInt:
        return AlgInt(*parse_pair(text, what), self.number_field())

    def grid_source(self) -> Grid:
        text = self.grid or "gauss"
        if ";" in text:
            v1, v2 = text.split(";")
            return make_grid(v1, v2, self.offset)
        grid = PresetProvider().grid(text)
        if self.offset is not None:
            w1, w2 = grid.basis
            return make_grid(w1, w2, self.offset)
        return grid

    def source(self) -> Union[Grid, AlgInt]:
        if self.field is not None:
            return self.ideal_generator()
        return self.grid_source()

    def hist_geometry(self, psi_regime_scaled: Optional[bool] = None) -> HistGeometry:
        scaled = self.scaling_spec().regime.scaled if psi_regime_scaled is None else psi_regime_scaled
        kind = self.geometry or (GeometryKind.PLANE if scaled else GeometryKind.CYLINDER)
        return HistGeometry(kind=kind, extent=self.window, n1=self.bins, n2=self.bins_im or self.bins)

    def sector(self) -> Sector:
        x, y = (float(part) for part in self.direction.split(","))
        return Sector(direction=complex(x, y), aperture=min(self.aperture, 2 * math.pi), radius=self.x or 0.0)

    def r_range(self) -> Optional[Tuple[float, float]]:
        if self.r_min is None and self.r_max is None:
            return None
        return (self.r_min or 0.0, self.r_max if self.r_max is not None else math.inf)

    def quadrature_rule(self):
        return "midpoint" if self.quadrature == "midpoint" else self.subsample

    def echo(self) -> dict:
        return self.model_dump(mode="json", exclude_none=True)

    #endregion
