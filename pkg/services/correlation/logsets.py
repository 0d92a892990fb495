import logging
import math
from fractions import Fraction
from typing import Union

import numpy as np

from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.EulerPhiSieve import EulerPhiSieve
from services.arithmetic.fields import get_field
from services.correlation.models import WeightedLogSet, WeightKind
from services.errors import ValidationFailure, WeightMismatch
from services.lattices.grid import enumerate_disk, grid_from_ideal
from services.lattices.models import Grid

logger = logging.getLogger(__name__)

LogSource = Union[Grid, AlgInt]


def _source_grid(source: LogSource) -> Grid:
    if isinstance(source, AlgInt):
        return grid_from_ideal(source)
    if isinstance(source, Grid):
        return source
    raise ValidationFailure(f"Неизвестный источник точек: {type(source).__name__}")


def point_arguments(values: np.ndarray, unit: float) -> np.ndarray:
    """arg z ∈ (−π, π] для z / unit."""
    scaled = values / unit
    arg = np.arctan2(scaled.imag, scaled.real)
    return np.where(arg <= -math.pi, arg + 2 * math.pi, arg)


def build_logset(source: LogSource, N: int, weight_kind: WeightKind = WeightKind.UNIT) -> WeightedLogSet:
    """
    Точки 0 < |z| ≤ N источника с логарифмами и весами.

    :param source: решетка (Grid) или образующий идеала (AlgInt)
    :param N: горизонт
    :param weight_kind: unit или euler (φ_K, только для идеалов)
    :raises WeightMismatch: euler для решетки, не являющейся идеалом
    """
    if N < 1:
        raise ValidationFailure(f"N должно быть ≥ 1, получено {N}")
    grid = _source_grid(source)
    weight_kind = WeightKind(weight_kind)
    if weight_kind == WeightKind.EULER and (grid.discriminant is None or not grid.is_lattice):
        raise WeightMismatch("Веса φ_K определены только для идеалов 𝒪_K")

    points = enumerate_disk(grid, r2=Fraction(N * N), exclude_zero=True)

    if weight_kind == WeightKind.EULER and len(points):
        field = get_field(grid.discriminant)
        xs, ys = points.alg[:, 0], points.alg[:, 1]
        norms = xs * xs + field.trace * xs * ys + field.norm_omega * ys * ys
        sieve = EulerPhiSieve(field, int(norms.max()))
        weights = sieve.phi(xs, ys)
    else:
        weights = np.ones(len(points), dtype=np.int64)

    if len(points):
        content = int(np.gcd.reduce(points.norm_num))
        shape_re = 0.5 * np.log((points.norm_num // content).astype(np.float64))
        log_re = shape_re + 0.5 * math.log(content / points.norm_den)
    else:
        shape_re = np.zeros(0)
        log_re = np.zeros(0)

    log_im = point_arguments(points.values, grid.systole)
    logger.info(f"[build_logset] N={N}, {len(points)} точек, веса {weight_kind.value}")
    return WeightedLogSet(
        grid=grid,
        points=points,
        log_re=log_re,
        log_im=log_im,
        shape_re=shape_re,
        weights=weights,
        N=N,
        weight_kind=weight_kind,
    )
