import logging
import math
from typing import Optional

from fastapi import APIRouter, Depends, HTTPException
from pydantic import BaseModel, Field

from config import DEFAULT_PRIME_BOUND, MAX_DENSITY_RADIUS
from presets.PresetProvider import PresetProvider
from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.fields import get_field
from services.commands.models import parse_pair
from services.correlation.densities import (
    density_poissonian,
    density_real,
    density_theta_infty,
    density_unscaled,
    density_weighted_linear,
)
from services.errors import ComputationFailure, ValidationFailure

router = APIRouter()
logger = logging.getLogger(__name__)


class DensityRequest(BaseModel):
    """
    Параметры точечного вычисления плотности.

    Атрибуты:
        re, x, y, t: координаты точки (по виду плотности)
        grid: имя пресета решетки
        lam: λ для theta-infty
        field, ideal, prime_bound: поле и идеал для weighted-linear
        mode: r2d | ortho для real
    """
    re: float = 0.0
    x: float = 0.0
    y: float = 0.0
    t: float = 0.0
    grid: str = "gauss"
    lam: Optional[float] = Field(None, gt=0)
    field: int = -4
    ideal: str = "1,0"
    prime_bound: int = Field(DEFAULT_PRIME_BOUND, ge=2)
    mode: str = "r2d"


def _evaluate(kind: str, params: DensityRequest) -> float:
    z = complex(params.x, params.y)
    if kind in ("theta-infty", "weighted-linear") and abs(z) > MAX_DENSITY_RADIUS:
        raise ValidationFailure(f"|z| не должен превышать {MAX_DENSITY_RADIUS}")
    if kind == "unscaled":
        return density_unscaled(complex(params.re, 0.0), "unit")
    if kind == "unscaled-euler":
        return density_unscaled(complex(params.re, 0.0), "euler")
    if kind == "poissonian":
        return density_poissonian(PresetProvider().grid(params.grid))
    if kind == "theta-infty":
        if params.lam is None:
            raise ValidationFailure("Нужен параметр lam")
        return density_theta_infty(PresetProvider().grid(params.grid), params.lam, z)
    if kind == "weighted-linear":
        field = get_field(params.field)
        m = AlgInt(*parse_pair(params.ideal, "ideal"), field)
        return density_weighted_linear(field, m, z, params.prime_bound)
    if kind == "real":
        return density_real(params.t, params.mode)
    raise ValidationFailure(f"Неизвестная плотность '{kind}'")


@router.get("/api/v1/density/{kind}")
async def get_density(kind: str, params: DensityRequest = Depends()):
    try:
        value = _evaluate(kind, params)
    except ValidationFailure as e:
        raise HTTPException(status_code=422, detail=str(e))
    except ComputationFailure as e:
        logger.error(f"[density_routes] {e}")
        raise HTTPException(status_code=500, detail=str(e))
    if not math.isfinite(value):
        raise HTTPException(status_code=500, detail="Плотность не вычислена")
    return {"kind": kind, "value": value}
