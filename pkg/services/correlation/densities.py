"""
Предельные плотности корреляции пар.

Каждая плотность представлена объектом с методом ``evaluate(re, im)`` над массивами
numpy; точечные функции density_* вызывают его для одной точки.
Радиальные плотности (θ∞, θ_N, эйлерово-линейная) хранят отсортированные
квадраты модулей решетки и накопленные суммы, так что значение в точке
находится бинарным поиском.
"""
import logging
import math
from abc import ABC, abstractmethod
from typing import Dict, Tuple

import numpy as np

from config import DEFAULT_PRIME_BOUND
from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.constants import mirsky_constant_c_mk
from services.arithmetic.fields import canonical_associate
from services.arithmetic.models import Field
from services.errors import ValidationFailure
from services.lattices.grid import enumerate_disk, grid_from_ideal, lattice_of
from services.lattices.models import Grid

logger = logging.getLogger(__name__)


class BaseDensity(ABC):
    """Плотность на плоскости или цилиндре."""

    radial: bool = False

    @abstractmethod
    def evaluate(self, re: np.ndarray, im: np.ndarray) -> np.ndarray:
        """
        Значения плотности в точках re + i·im.

        :param re: вещественные части
        :param im: мнимые части
        :return: массив той же формы
        """
        pass

    def __call__(self, z: complex) -> float:
        return float(self.evaluate(np.array([z.real]), np.array([z.imag]))[0])


#region Нескалированный режим

class UnscaledDensity(BaseDensity):
    """unit: (1/2π)e^{−2|Re z|}; euler: (1/π)e^{−4|Re z|}."""

    def __init__(self, mode: str = "unit"):
        if mode not in ("unit", "euler"):
            raise ValidationFailure(f"Неизвестный режим плотности '{mode}'")
        self.mode = mode

    def evaluate(self, re, im):
        re = np.asarray(re, dtype=np.float64)
        if self.mode == "unit":
            return np.exp(-2 * np.abs(re)) / (2 * math.pi)
        return np.exp(-4 * np.abs(re)) / math.pi


class UnscaledN4Density(BaseDensity):
    """(π/(2 covol²)) e^{−2|Re z|} для нормировки N⁴."""

    def __init__(self, g: Grid):
        self.scale = math.pi / (2 * g.covol ** 2)

    def evaluate(self, re, im):
        return self.scale * np.exp(-2 * np.abs(np.asarray(re, dtype=np.float64)))

#endregion


class PoissonianDensity(BaseDensity):
    radial = True

    def __init__(self, g: Grid):
        self.value = math.pi / (2 * g.covol ** 2)

    def evaluate(self, re, im):
        return np.full(np.broadcast(np.asarray(re), np.asarray(im)).shape, self.value)


class _RadialTable:
    """Отсортированные |k|² с накопленными весами; расширяется по запросу."""

    def __init__(self, loader):
        self.loader = loader
        self.radius = 0.0
        self.norms = np.zeros(0)
        self.cumulative = np.zeros(1)

    def ensure(self, radius: float) -> None:
        if radius <= self.radius and self.norms.size:
            return
        radius = max(radius, 2 * self.radius, 1.0)
        norms, weights = self.loader(radius)
        order = np.argsort(norms, kind="stable")
        self.norms = norms[order]
        self.cumulative = np.concatenate([[0.0], np.cumsum(weights[order])])
        self.radius = radius

    def partial(self, radius_sq: np.ndarray) -> np.ndarray:
        """Σ весов по |k|² ≤ radius_sq (границы включены)."""
        return self.cumulative[np.searchsorted(self.norms, radius_sq, side="right")]


class ThetaDensity(BaseDensity):
    """
    (1/(covol·|z|⁴)) Σ_{p ∈ Λ, 0 < |p| ≤ |z|/λ} |p|².

    При λ = ψ(N)/N это конечная плотность θ_N, при λ = lim ψ(N)/N получается θ∞.
    """

    radial = True

    def __init__(self, g: Grid, lam: float):
        if not lam > 0:
            raise ValidationFailure(f"λ должно быть положительным, получено {lam}")
        self.grid = lattice_of(g)
        self.lam = lam
        self.table = _RadialTable(self._load)

    def _load(self, radius: float) -> Tuple[np.ndarray, np.ndarray]:
        points = enumerate_disk(self.grid, radius, exclude_zero=True)
        norms = points.norm_num / points.norm_den
        return norms, norms

    def evaluate(self, re, im):
        r = np.hypot(np.asarray(re, dtype=np.float64), np.asarray(im, dtype=np.float64))
        scaled = r / self.lam
        if scaled.size:
            self.table.ensure(float(scaled.max()))
        sums = self.table.partial(scaled ** 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = sums / (self.grid.covol * r ** 4)
        return np.where(r > 0, value, 0.0)


class WeightedLinearDensity(BaseDensity):
    """
    (1/|z|⁸) Σ_{k ∈ Λ, |k| ≤ |z|} (2 c_{Λ,k}/√|D|)|k|⁶ для Λ = m𝒪_K.

    c_{Λ,k} зависит только от класса ассоциированных k и вычисляется один раз на класс.
    """

    radial = True

    def __init__(self, field: Field, m: AlgInt, prime_bound: int = DEFAULT_PRIME_BOUND):
        self.field = field
        self.m = m
        self.prime_bound = prime_bound
        self.grid = grid_from_ideal(m)
        self.constants: Dict[Tuple[int, int], float] = {}
        self.table = _RadialTable(self._load)

    def _constant(self, k: AlgInt) -> float:
        key = canonical_associate(k).coords
        if key not in self.constants:
            self.constants[key] = mirsky_constant_c_mk(self.m, k, self.prime_bound).value
        return self.constants[key]

    def _load(self, radius: float) -> Tuple[np.ndarray, np.ndarray]:
        points = enumerate_disk(self.grid, radius, exclude_zero=True)
        norms = points.norm_num / points.norm_den
        consts = np.array([
            self._constant(AlgInt(int(x), int(y), self.field)) for x, y in points.alg
        ])
        logger.debug(f"[WeightedLinearDensity] {len(points)} точек, {len(self.constants)} классов")
        return norms, 2 * consts / math.sqrt(self.field.abs_disc) * norms ** 3

    def evaluate(self, re, im):
        r = np.hypot(np.asarray(re, dtype=np.float64), np.asarray(im, dtype=np.float64))
        if r.size:
            self.table.ensure(float(r.max()))
        sums = self.table.partial(r ** 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = sums / r ** 8
        return np.where(r > 0, value, 0.0)


#region Одномерные плотности

def density_real(t, mode: str = "r2d"):
    """r2d: (1/2)e^{−|t|}; ortho: e^{−2|t|}."""
    t = np.asarray(t, dtype=np.float64)
    if mode == "r2d":
        value = 0.5 * np.exp(-np.abs(t))
    elif mode == "ortho":
        value = np.exp(-2 * np.abs(t))
    else:
        raise ValidationFailure(f"Неизвестный режим одномерной плотности '{mode}'")
    return float(value) if value.ndim == 0 else value

#endregion


#region Точечные функции

def density_unscaled(z: complex, mode: str = "unit") -> float:
    return UnscaledDensity(mode)(z)


def density_unscaled_n4(g: Grid, z: complex) -> float:
    return UnscaledN4Density(g)(z)


def density_poissonian(g: Grid) -> float:
    return PoissonianDensity(g).value


def density_theta_infty(g: Grid, lam: float, z: complex) -> float:
    return ThetaDensity(g, lam)(z)


def density_theta_n(g: Grid, N: int, psi: float, z: complex) -> float:
    """θ_N: λ = ψ(N)/N."""
    return ThetaDensity(g, psi / N)(z)


def density_weighted_linear(field: Field, m: AlgInt, z: complex, prime_bound: int = DEFAULT_PRIME_BOUND) -> float:
    return WeightedLinearDensity(field, m, prime_bound)(z)

#endregion
