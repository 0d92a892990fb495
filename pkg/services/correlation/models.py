import math
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from services.errors import ComputationFailure, GeometryMismatch, ValidationFailure
from services.lattices.models import Grid, GridPoints


#region Масштабирование и перенормировка

class ScalingKind(str, Enum):
    """Вид функции масштабирования ψ."""

    CONSTANT_ONE = "constant_one"
    POWER = "power"
    N_OVER_LOG = "n_over_log"
    CUSTOM = "custom"


class RegimeKind(str, Enum):
    """Режим λ_ψ = lim ψ(N)/N."""

    UNSCALED = "unscaled"
    ZERO = "zero"
    FINITE = "finite"
    INFINITE = "infinite"


class Regime(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: RegimeKind
    lam: Optional[float] = Field(None, description="λ > 0 для конечного режима")

    @model_validator(mode="after")
    def _check_lambda(self) -> "Regime":
        if self.kind == RegimeKind.FINITE and not (self.lam and self.lam > 0):
            raise ValidationFailure("Для конечного режима нужно λ > 0")
        return self

    @property
    def scaled(self) -> bool:
        return self.kind != RegimeKind.UNSCALED


class ScalingSpec(BaseModel):
    """
    Функция масштабирования ψ(N).

    power: ψ(N) = coefficient·N^α; n_over_log: ψ(N) = N/ln N;
    custom: таблица N → ψ(N) с явно заданным режимом.
    """

    model_config = ConfigDict(frozen=True)

    kind: ScalingKind = ScalingKind.CONSTANT_ONE
    alpha: float = Field(1.0, ge=0)
    coefficient: float = Field(1.0, gt=0)
    table: Dict[int, float] = Field(default_factory=dict)
    regime_override: Optional[Regime] = None

    @model_validator(mode="after")
    def _check_custom(self) -> "ScalingSpec":
        if self.kind == ScalingKind.CUSTOM:
            if self.regime_override is None:
                raise ValidationFailure("Для таблицы ψ нужно явно указать режим")
            if any(v <= 0 for v in self.table.values()):
                raise ValidationFailure("Значения ψ(N) должны быть положительными")
        return self

    @classmethod
    def parse(cls, text: str) -> "ScalingSpec":
        """Разбор строки: one | power:α[:c] | n-over-log."""
        text = text.strip().lower()
        if text in ("one", "1", "constant_one", "none"):
            return cls(kind=ScalingKind.CONSTANT_ONE)
        if text in ("n-over-log", "n_over_log"):
            return cls(kind=ScalingKind.N_OVER_LOG)
        if text.startswith("power:"):
            parts = text.split(":")[1:]
            try:
                alpha = float(Fraction(parts[0]))
                coefficient = float(Fraction(parts[1])) if len(parts) > 1 else 1.0
            except (ValueError, ZeroDivisionError, IndexError):
                raise ValidationFailure(f"Некорректное масштабирование '{text}'")
            return cls(kind=ScalingKind.POWER, alpha=alpha, coefficient=coefficient)
        raise ValidationFailure(f"Неизвестное масштабирование '{text}'")

    def psi(self, N: int) -> float:
        if self.kind == ScalingKind.CONSTANT_ONE:
            return 1.0
        if self.kind == ScalingKind.POWER:
            return self.coefficient * float(N) ** self.alpha
        if self.kind == ScalingKind.N_OVER_LOG:
            if N < 2:
                raise ValidationFailure("ψ(N) = N/ln N требует N ≥ 2")
            return N / math.log(N)
        if N not in self.table:
            raise ValidationFailure(f"В таблице ψ нет значения для N={N}")
        return float(self.table[N])

    @property
    def regime(self) -> Regime:
        if self.regime_override is not None:
            return self.regime_override
        if self.kind == ScalingKind.CONSTANT_ONE:
            return Regime(kind=RegimeKind.UNSCALED)
        if self.kind == ScalingKind.N_OVER_LOG:
            return Regime(kind=RegimeKind.ZERO)
        if self.alpha == 0:
            return Regime(kind=RegimeKind.UNSCALED)
        if self.alpha < 1:
            return Regime(kind=RegimeKind.ZERO)
        if self.alpha == 1:
            return Regime(kind=RegimeKind.FINITE, lam=self.coefficient)
        return Regime(kind=RegimeKind.INFINITE)

    def label(self) -> str:
        if self.kind == ScalingKind.POWER:
            return f"power:{self.alpha:g}:{self.coefficient:g}"
        return self.kind.value


class RenormKind(str, Enum):
    PROBABILITY = "probability"
    BY_PSI = "psi"
    BY_N4_OVER_PSI2 = "n4-psi2"
    BY_PSI2 = "psi2"
    BY_N6 = "n6"
    EXPLICIT = "explicit"


class RenormSpec(BaseModel):
    """Делитель ψ′(N), на который делятся массы гистограммы."""

    model_config = ConfigDict(frozen=True)

    kind: RenormKind
    value: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _check_value(self) -> "RenormSpec":
        if self.kind == RenormKind.EXPLICIT and self.value is None:
            raise ValidationFailure("Для явной перенормировки нужно значение")
        return self

    @classmethod
    def parse(cls, text: str) -> "RenormSpec":
        text = text.strip().lower()
        if text.startswith("explicit:"):
            try:
                return cls(kind=RenormKind.EXPLICIT, value=float(text.split(":", 1)[1]))
            except ValueError:
                raise ValidationFailure(f"Некорректная перенормировка '{text}'")
        try:
            return cls(kind=RenormKind(text))
        except ValueError:
            raise ValidationFailure(
                f"Неизвестная перенормировка '{text}', допустимы: {[k.value for k in RenormKind]}"
            )

    @classmethod
    def default_for(cls, regime: Regime, weight_kind: "WeightKind") -> "RenormSpec":
        if regime.kind == RegimeKind.UNSCALED:
            return cls(kind=RenormKind.PROBABILITY)
        if regime.kind == RegimeKind.ZERO:
            return cls(kind=RenormKind.BY_N4_OVER_PSI2)
        if regime.kind == RegimeKind.FINITE:
            if weight_kind == WeightKind.EULER:
                return cls(kind=RenormKind.BY_N6)
            return cls(kind=RenormKind.BY_PSI2)
        return cls(kind=RenormKind.BY_PSI)

    def divisor(self, N: int, psi: float, total_raw_mass: int) -> float:
        if self.kind == RenormKind.PROBABILITY:
            if total_raw_mass <= 0:
                raise ComputationFailure("Нулевая полная масса: вероятностная нормировка невозможна")
            return float(total_raw_mass)
        if self.kind == RenormKind.BY_PSI:
            return psi
        if self.kind == RenormKind.BY_N4_OVER_PSI2:
            return float(N) ** 4 / psi ** 2
        if self.kind == RenormKind.BY_PSI2:
            return psi ** 2
        if self.kind == RenormKind.BY_N6:
            return float(N) ** 6
        return float(self.value)

    def label(self) -> str:
        return f"explicit:{self.value:g}" if self.kind == RenormKind.EXPLICIT else self.kind.value

#endregion


#region Геометрия гистограмм

class GeometryKind(str, Enum):
    PLANE = "plane"
    CYLINDER = "cylinder"
    POLAR = "polar"


class HistGeometry(BaseModel):
    """
    Сетка бинов.

    plane: [−A, A)² с n1 × n2 бинами;
    cylinder: [−X, X) × [−π·s, π·s), s = im_scale;
    polar: диск радиуса A, n1 радиальных × n2 угловых бинов, угол в [−π, π).
    Все бины полуоткрыты.
    """

    model_config = ConfigDict(frozen=True)

    kind: GeometryKind
    extent: float = Field(..., gt=0, description="A (plane, polar) или X (cylinder)")
    n1: int = Field(..., ge=1)
    n2: int = Field(..., ge=1)
    im_scale: float = Field(1.0, gt=0)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n1, self.n2

    @property
    def size(self) -> int:
        return self.n1 * self.n2

    @property
    def im_half(self) -> float:
        if self.kind == GeometryKind.CYLINDER:
            return math.pi * self.im_scale
        return self.extent

    @property
    def enclosing_radius(self) -> float:
        """Радиус диска, содержащего окно."""
        if self.kind == GeometryKind.POLAR:
            return self.extent
        return math.hypot(self.extent, self.im_half)

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        if self.kind == GeometryKind.POLAR:
            return (
                np.linspace(0.0, self.extent, self.n1 + 1),
                np.linspace(-math.pi, math.pi, self.n2 + 1),
            )
        return (
            np.linspace(-self.extent, self.extent, self.n1 + 1),
            np.linspace(-self.im_half, self.im_half, self.n2 + 1),
        )

    def steps(self) -> Tuple[float, float]:
        if self.kind == GeometryKind.POLAR:
            return self.extent / self.n1, 2 * math.pi / self.n2
        return 2 * self.extent / self.n1, 2 * self.im_half / self.n2

    def locate(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        """Плоский индекс бина для каждой точки или −1 вне окна."""
        h1, h2 = self.steps()
        if self.kind == GeometryKind.POLAR:
            u = np.hypot(re, im)
            v = np.arctan2(im, re)
            v = np.where(v >= math.pi, v - 2 * math.pi, v)
            i = np.floor(u / h1).astype(np.int64)
            j = np.floor((v + math.pi) / h2).astype(np.int64)
        else:
            i = np.floor((re + self.extent) / h1).astype(np.int64)
            j = np.floor((im + self.im_half) / h2).astype(np.int64)
        valid = (i >= 0) & (i < self.n1) & (j >= 0) & (j < self.n2)
        return np.where(valid, i * self.n2 + j, -1)

    def bin_areas(self) -> np.ndarray:
        h1, h2 = self.steps()
        if self.kind == GeometryKind.POLAR:
            r_edges, _ = self.edges()
            ring = (r_edges[1:] ** 2 - r_edges[:-1] ** 2) / 2 * h2
            return np.repeat(ring[:, None], self.n2, axis=1)
        return np.full(self.shape, h1 * h2)

    def centres(self) -> Tuple[np.ndarray, np.ndarray]:
        """Центры бинов как (Re, Im) массивы формы shape."""
        e1, e2 = self.edges()
        c1 = (e1[:-1] + e1[1:]) / 2
        c2 = (e2[:-1] + e2[1:]) / 2
        u, v = np.meshgrid(c1, c2, indexing="ij")
        if self.kind == GeometryKind.POLAR:
            return u * np.cos(v), u * np.sin(v)
        return u, v

    def centre_radii(self) -> np.ndarray:
        re, im = self.centres()
        return np.hypot(re, im)

    def bin_rings(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Кольца радиального профиля: (ring_index для каждого бина, границы колец).

        Для polar кольца совпадают с радиальными бинами; для прямоугольных
        сеток бины группируются по радиусу центра с шагом половины ширины окна / n1.
        """
        if self.kind == GeometryKind.POLAR:
            r_edges, _ = self.edges()
            return np.repeat(np.arange(self.n1)[:, None], self.n2, axis=1), r_edges
        n_rings = max(self.n1 // 2, 1)
        outer = min(self.extent, self.im_half)
        r_edges = np.linspace(0.0, outer, n_rings + 1)
        ring = np.floor(self.centre_radii() / (outer / n_rings)).astype(np.int64)
        return np.where(ring < n_rings, ring, -1), r_edges

    def ensure_same(self, other: "HistGeometry") -> None:
        if self != other:
            raise GeometryMismatch(f"Несовместимые геометрии: {self} и {other}")

    def describe(self) -> Dict[str, str]:
        return {
            "geometry": self.kind.value,
            "extent": repr(self.extent),
            "n1": str(self.n1),
            "n2": str(self.n2),
            "im_scale": repr(self.im_scale),
        }

#endregion


#region Множества логарифмов и гистограммы

class WeightKind(str, Enum):
    UNIT = "unit"
    EULER = "euler"


class WeightedLogSet(BaseModel):
    """
    Конечное множество точек цилиндра log z с целыми весами.

    Атрибуты:
        points: исходные точки решетки (0 < |z| ≤ N)
        log_re, log_im: ln|z| и arg z ∈ (−π, π]
        shape_re: ln|z| без общего множителя масштаба; разности shape_re
            равны разностям log_re и не зависят от растяжения решетки
        weights: веса ω(z) ≥ 1
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    grid: Grid
    points: GridPoints
    log_re: np.ndarray
    log_im: np.ndarray
    shape_re: np.ndarray
    weights: np.ndarray
    N: int
    weight_kind: WeightKind

    def __len__(self) -> int:
        return int(self.weights.shape[0])

    @property
    def sum_weights(self) -> int:
        return int(sum(int(w) for w in self.weights))

    @property
    def sum_sq_weights(self) -> int:
        return int(sum(int(w) * int(w) for w in self.weights))

    def total_raw_mass(self, diagonal_included: bool) -> int:
        s = self.sum_weights
        return s * s if diagonal_included else s * s - self.sum_sq_weights


class Hist2D(BaseModel):
    """
    Бинированная мера пар.

    raw: точные целые массы (до деления), masses = raw / renormalizer.
    Для теоретических гистограмм raw отсутствует.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    geometry: HistGeometry
    masses: np.ndarray
    raw: Optional[np.ndarray] = None
    total_raw_mass: int = 0
    renormalizer: float = 1.0
    diagonal_included: bool = False
    meta: Dict[str, str] = Field(default_factory=dict)

    def merge(self, other: "Hist2D") -> "Hist2D":
        """Сумма двух гистограмм одной геометрии и перенормировки."""
        self.geometry.ensure_same(other.geometry)
        if self.raw is None or other.raw is None:
            raise GeometryMismatch("Объединяются только эмпирические гистограммы")
        if self.renormalizer != other.renormalizer:
            raise GeometryMismatch("Разные перенормировки")
        raw = self.raw + other.raw
        return self.model_copy(update={
            "raw": raw,
            "masses": raw / self.renormalizer,
            "total_raw_mass": self.total_raw_mass + other.total_raw_mass,
        })

    def densities(self) -> np.ndarray:
        return self.masses / self.geometry.bin_areas()

    @property
    def window_mass(self) -> float:
        return float(self.masses.sum())


def bin_half_open(values: np.ndarray, edges: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Массы по полуоткрытым бинам [edges[i], edges[i+1]); точки вне [edges[0], edges[-1]) отброшены."""
    index = np.searchsorted(edges, values, side="right") - 1
    inside = (index >= 0) & (index < len(edges) - 1)
    return np.bincount(index[inside], weights=weights[inside], minlength=len(edges) - 1)


class Hist1D(BaseModel):
    """Бинированная мера на прямой: полуоткрытые бины [edges[i], edges[i+1])."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    edges: np.ndarray
    masses: np.ndarray
    total_mass: float = 0.0
    meta: Dict[str, str] = Field(default_factory=dict)

    def ensure_same(self, other: "Hist1D") -> None:
        if self.edges.shape != other.edges.shape or not np.array_equal(self.edges, other.edges):
            raise GeometryMismatch("Несовместимые одномерные сетки")

    def widths(self) -> np.ndarray:
        return np.diff(self.edges)


class AtomMeasure1D(BaseModel):
    """
    Конечная мера на прямой с точными ключами: атом в ln(key), масса рациональна.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    atoms: Dict[Fraction, Fraction] = Field(default_factory=dict)

    def total(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def scaled(self, factor: Fraction) -> "AtomMeasure1D":
        return AtomMeasure1D(atoms={k: v * factor for k, v in self.atoms.items()})

    def sorted_items(self) -> List[Tuple[Fraction, Fraction]]:
        return sorted(self.atoms.items())

    def to_histogram(self, half_width: float, bins: int, probability: bool = True) -> Hist1D:
        edges = np.linspace(-half_width, half_width, bins + 1)
        keys = self.sorted_items()
        positions = np.array([math.log(k.numerator) - math.log(k.denominator) for k, _ in keys])
        weights = np.array([float(v) for _, v in keys])
        masses = bin_half_open(positions, edges, weights)
        total = float(self.total())
        if probability and total > 0:
            masses = masses / total
        return Hist1D(edges=edges, masses=masses, total_mass=total)

#endregion


#region Отчеты сравнения

class RingStat(BaseModel):
    r_lo: float
    r_hi: float
    empirical: float
    expected: float
    excluded: bool = False


class CompareReport(BaseModel):
    """
    Метрики эмпирической гистограммы против плотности.

    Атрибуты:
        l1: Σ |m_b − e_b| по бинам
        sup: max |m_b − e_b| / площадь бина (в единицах плотности)
        mean_abs_deviation: среднее |m_b − e_b| / площадь по выбранным бинам
        radial_profile: средние плотности по кольцам
        radial_mean_relative_deviation: среднее |emp − exp| / exp по невыключенным кольцам
    """

    l1: float
    sup: float
    mean_abs_deviation: float
    radial_profile: List[RingStat] = Field(default_factory=list)
    radial_mean_relative_deviation: Optional[float] = None
    bins_used: int = 0

#endregion
