import logging
from datetime import datetime
from typing import Dict

import numpy
import sympy
from fastapi import APIRouter
from pydantic import BaseModel

router = APIRouter()
logger = logging.getLogger(__name__)


class HealthStatus(BaseModel):
    """
    Модель статуса сервиса.

    Атрибуты:
        status: Общий статус сервиса
        timestamp: Временная метка проверки
        uptime: Время работы в секундах
        versions: Версии вычислительных библиотек
    """
    status: str
    timestamp: str
    uptime: float
    versions: Dict[str, str]


# Время запуска сервиса
service_start_time = datetime.now()


@router.get("/api/v1/health", response_model=HealthStatus)
async def health_check():
    """Проверка живости: сервис не зависит от внешних систем."""
    logger.info("Performing health check")
    return HealthStatus(
        status="healthy",
        timestamp=datetime.now().isoformat(),
        uptime=(datetime.now() - service_start_time).total_seconds(),
        versions={"numpy": numpy.__version__, "sympy": sympy.__version__},
    )
