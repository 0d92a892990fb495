import logging

from fastapi import APIRouter, Depends, HTTPException
from pydantic import BaseModel, Field

from config import DEFAULT_PRIME_BOUND
from services.arithmetic.fields import get_field
from services.commands.constants.ConstantsCommand import field_constants
from services.errors import ComputationFailure, ValidationFailure

router = APIRouter()
logger = logging.getLogger(__name__)


class ConstantsRequest(BaseModel):
    """
    Параметры запроса констант.

    Атрибуты:
        field: Дискриминант поля
        prime_bound: Граница усечения эйлеровых произведений
    """
    field: int = -4
    prime_bound: int = Field(DEFAULT_PRIME_BOUND, ge=2)


@router.get("/api/v1/constants")
async def get_constants(params: ConstantsRequest = Depends()):
    try:
        return field_constants(get_field(params.field), params.prime_bound)
    except ValidationFailure as e:
        raise HTTPException(status_code=422, detail=str(e))
    except ComputationFailure as e:
        logger.error(f"[constants_routes] {e}")
        raise HTTPException(status_code=500, detail=str(e))
