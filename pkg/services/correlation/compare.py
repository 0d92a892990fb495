import logging
import math
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from config import SUBSAMPLE
from services.correlation.densities import BaseDensity
from services.correlation.models import (
    CompareReport,
    GeometryKind,
    Hist1D,
    Hist2D,
    HistGeometry,
    RingStat,
)
from services.errors import ValidationFailure

logger = logging.getLogger(__name__)

Quadrature = Union[str, int]


def _subsample(quadrature: Quadrature) -> int:
    if quadrature == "midpoint":
        return 1
    if quadrature == "subsample":
        return SUBSAMPLE
    if isinstance(quadrature, int) and quadrature >= 1:
        return quadrature
    raise ValidationFailure(f"Неизвестная квадратура '{quadrature}'")


def bin_integrals(geometry: HistGeometry, density: BaseDensity, quadrature: Quadrature = "subsample") -> np.ndarray:
    """
    Интегралы плотности по бинам: средняя точка (n = 1) или сетка n×n
    подточек внутри каждого бина.
    """
    n = _subsample(quadrature)
    e1, e2 = geometry.edges()
    h1, h2 = geometry.steps()
    frac = (np.arange(n) + 0.5) / n
    u = (e1[:-1, None] + frac[None, :] * h1).ravel()
    v = (e2[:-1, None] + frac[None, :] * h2).ravel()
    uu, vv = np.meshgrid(u, v, indexing="ij")

    if geometry.kind == GeometryKind.POLAR:
        values = density.evaluate(uu * np.cos(vv), uu * np.sin(vv)) * uu
    else:
        values = density.evaluate(uu, vv)

    cell = (h1 / n) * (h2 / n)
    blocks = values.reshape(geometry.n1, n, geometry.n2, n)
    return blocks.sum(axis=(1, 3)) * cell


def theory_histogram(geometry: HistGeometry, density: BaseDensity, quadrature: Quadrature = "subsample",
                     meta: Optional[dict] = None) -> Hist2D:
    masses = bin_integrals(geometry, density, quadrature)
    return Hist2D(geometry=geometry, masses=masses, meta={**geometry.describe(), **(meta or {})})


#region Радиальный профиль

def radial_profile(hist: Hist2D, expected: np.ndarray, exclude_radii: Sequence[float] = ()) -> list:
    ring_index, r_edges = hist.geometry.bin_rings()
    areas = hist.geometry.bin_areas()
    profile = []
    for i in range(len(r_edges) - 1):
        sel = ring_index == i
        area = float(areas[sel].sum())
        if area == 0:
            continue
        lo, hi = float(r_edges[i]), float(r_edges[i + 1])
        profile.append(RingStat(
            r_lo=lo,
            r_hi=hi,
            empirical=float(hist.masses[sel].sum()) / area,
            expected=float(expected[sel].sum()) / area,
            excluded=any(lo < r < hi for r in exclude_radii),
        ))
    return profile


def _mean_relative(profile: list, r_range: Optional[Tuple[float, float]]) -> Optional[float]:
    rel = [
        abs(ring.empirical - ring.expected) / ring.expected
        for ring in profile
        if not ring.excluded
        and ring.expected > 0
        and (r_range is None or (ring.r_lo >= r_range[0] - 1e-12 and ring.r_hi <= r_range[1] + 1e-12))
    ]
    return float(np.mean(rel)) if rel else None

#endregion


def compare_masses(
    hist: Hist2D,
    expected: np.ndarray,
    exclude_radii: Sequence[float] = (),
    r_range: Optional[Tuple[float, float]] = None,
) -> CompareReport:
    """Метрики для двух массивов масс одной геометрии."""
    geometry = hist.geometry
    if expected.shape != geometry.shape:
        raise ValidationFailure(f"Форма ожидаемых масс {expected.shape} не совпадает с {geometry.shape}")
    areas = geometry.bin_areas()
    diff = np.abs(hist.masses - expected)
    density_diff = diff / areas

    if r_range is not None:
        radii = geometry.centre_radii()
        chosen = (radii >= r_range[0]) & (radii <= r_range[1])
    else:
        chosen = np.ones(geometry.shape, dtype=bool)

    profile = radial_profile(hist, expected, exclude_radii)
    report = CompareReport(
        l1=float(diff.sum()),
        sup=float(density_diff.max()) if density_diff.size else 0.0,
        mean_abs_deviation=float(density_diff[chosen].mean()) if chosen.any() else 0.0,
        radial_profile=profile,
        radial_mean_relative_deviation=_mean_relative(profile, r_range),
        bins_used=int(chosen.sum()),
    )
    logger.info(f"[compare] L1={report.l1:.6g}, sup={report.sup:.6g}, MAD={report.mean_abs_deviation:.6g}")
    return report


def compare(
    hist: Hist2D,
    density: Union[BaseDensity, Hist2D],
    quadrature: Quadrature = "subsample",
    exclude_radii: Sequence[float] = (),
    r_range: Optional[Tuple[float, float]] = None,
) -> CompareReport:
    """
    Сравнение эмпирической гистограммы с плотностью или с готовой
    теоретической гистограммой той же геометрии.

    :raises GeometryMismatch: разные геометрии
    """
    if isinstance(density, Hist2D):
        hist.geometry.ensure_same(density.geometry)
        expected = density.masses
    else:
        expected = bin_integrals(hist.geometry, density, quadrature)
    return compare_masses(hist, expected, exclude_radii, r_range)


def compare_1d(
    hist: Hist1D,
    density: Union[Callable[[np.ndarray], np.ndarray], Hist1D],
    quadrature: Quadrature = "subsample",
) -> CompareReport:
    if isinstance(density, Hist1D):
        hist.ensure_same(density)
        expected = density.masses
    else:
        n = _subsample(quadrature)
        widths = hist.widths()
        frac = (np.arange(n) + 0.5) / n
        points = hist.edges[:-1, None] + frac[None, :] * widths[:, None]
        expected = np.asarray(density(points)).sum(axis=1) * widths / n
    diff = np.abs(hist.masses - expected)
    density_diff = diff / hist.widths()
    return CompareReport(
        l1=float(diff.sum()),
        sup=float(density_diff.max()) if density_diff.size else 0.0,
        mean_abs_deviation=float(density_diff.mean()) if density_diff.size else 0.0,
        bins_used=int(diff.size),
    )


#region Статистики окна

def annulus_statistics(hist: Hist2D, r_min: float, r_max: float) -> Tuple[float, float]:
    """
    Средняя плотность по бинам с центром в r_min ≤ |z| ≤ r_max и коэффициент вариации.
    """
    radii = hist.geometry.centre_radii()
    sel = (radii >= r_min) & (radii <= r_max)
    if not sel.any():
        raise ValidationFailure(f"Нет бинов в кольце [{r_min}, {r_max}]")
    values = hist.densities()[sel]
    mean = float(values.mean())
    cv = float(values.std() / mean) if mean > 0 else math.inf
    return mean, cv


def mass_inside(hist: Hist2D, radius: float) -> float:
    """Масса бинов, целиком лежащих в диске |z| < radius."""
    geometry = hist.geometry
    e1, e2 = geometry.edges()
    if geometry.kind == GeometryKind.POLAR:
        inside = np.repeat((e1[1:] <= radius)[:, None], geometry.n2, axis=1)
    else:
        far_u = np.maximum(np.abs(e1[:-1]), np.abs(e1[1:]))
        far_v = np.maximum(np.abs(e2[:-1]), np.abs(e2[1:]))
        inside = np.hypot(far_u[:, None], far_v[None, :]) <= radius
    return float(hist.masses[inside].sum())

#endregion
