"""
Секториальные суммы Мертенса и Мирского по идеалу 𝔪 в усеченном секторе.
"""
import logging
import math

import numpy as np

from config import DEFAULT_PRIME_BOUND, ZETA_TOLERANCE
from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.EulerPhiSieve import EulerPhiSieve
from services.arithmetic.constants import (
    mertens_constant_c_m,
    mirsky_constant_c_mk,
    mirsky_constant_unit_ideal,
    zeta_K_2,
)
from services.arithmetic.models import Field
from services.errors import ValidationFailure, ZeroElement
from services.lattices.grid import enumerate_sector, grid_from_ideal
from services.lattices.models import Sector
from services.sums.models import SumReport

logger = logging.getLogger(__name__)


def _sector_alg(m: AlgInt, sector: Sector, x: float):
    if x < 1:
        raise ValidationFailure(f"x должно быть ≥ 1, получено {x}")
    if not m:
        raise ZeroElement("𝔪 должен быть ненулевым")
    points = enumerate_sector(grid_from_ideal(m), sector.model_copy(update={"radius": float(x)}))
    return points.alg[:, 0], points.alg[:, 1]


def _inputs(field: Field, m: AlgInt, sector: Sector, x: float, **more) -> dict:
    return {
        "field": str(field.discriminant),
        "m": f"{m.x},{m.y}",
        "direction": repr(sector.direction),
        "aperture": repr(sector.aperture),
        "x": repr(x),
        **{key: str(value) for key, value in more.items()},
    }


def mertens_sum(field: Field, m: AlgInt, sector: Sector, x: float) -> SumReport:
    """
    Σ_{a ∈ 𝔪 ∩ C(z, θ, x)} φ_K(a) против θx⁴ / (2√|D| ζ_K(2) c_𝔪).
    """
    xs, ys = _sector_alg(m, sector, x)
    norms = xs * xs + field.trace * xs * ys + field.norm_omega * ys * ys
    total = 0
    if norms.size:
        phi = EulerPhiSieve(field, int(norms.max())).phi(xs, ys)
        total = int(np.sum(phi, dtype=np.int64))

    zeta = zeta_K_2(field, ZETA_TOLERANCE)
    c_m = mertens_constant_c_m(m)
    predicted = sector.aperture * x ** 4 / (2 * math.sqrt(field.abs_disc) * zeta.value * c_m.value)
    logger.info(f"[mertens_sum] {field.name}, x={x}: {total} против {predicted:.6g}")
    return SumReport(
        brute=float(total),
        exact=total,
        predicted=predicted,
        inputs=_inputs(field, m, sector, x),
        extra={"zeta_K_2": zeta.value, "c_m": c_m.value},
    )


def mirsky_sum(
    field: Field,
    m: AlgInt,
    k: AlgInt,
    sector: Sector,
    x: float,
    prime_bound: int = DEFAULT_PRIME_BOUND,
) -> SumReport:
    """
    S(x) = Σ_{a ∈ 𝔪 ∩ C(z, θ, x)} φ_K(a)·φ_K(a + k) против θ c_{𝔪,k} x⁶ / (3√|D|).

    Слагаемое с a + k = 0 отбрасывается.
    """
    xs, ys = _sector_alg(m, sector, x)
    kx, ky = xs + k.x, ys + k.y
    keep = (kx != 0) | (ky != 0)
    xs, ys, kx, ky = xs[keep], ys[keep], kx[keep], ky[keep]

    total = 0
    if xs.size:
        norms_a = xs * xs + field.trace * xs * ys + field.norm_omega * ys * ys
        norms_b = kx * kx + field.trace * kx * ky + field.norm_omega * ky * ky
        sieve = EulerPhiSieve(field, int(max(norms_a.max(), norms_b.max())))
        products = sieve.phi(xs, ys) * sieve.phi(kx, ky)
        total = int(np.sum(products, dtype=np.int64))

    c_mk = mirsky_constant_c_mk(m, k, prime_bound)
    predicted = sector.aperture * c_mk.value * x ** 6 / (3 * math.sqrt(field.abs_disc))
    extra = {"c_mk": c_mk.value, "tail_bound": c_mk.tail_bound}
    if m.norm() == 1:
        extra["c_unit_ideal"] = mirsky_constant_unit_ideal(k, prime_bound).value
    logger.info(f"[mirsky_sum] {field.name}, k=({k.x},{k.y}), x={x}: {total} против {predicted:.6g}")
    return SumReport(
        brute=float(total),
        exact=total,
        predicted=predicted,
        inputs=_inputs(field, m, sector, x, k=f"{k.x},{k.y}", prime_bound=prime_bound),
        extra=extra,
    )
