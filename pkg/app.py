import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from config import (
    LOG_LEVEL,
    LOG_FORMAT,
    CORS_ORIGINS
)

from routing.constants_routes import router as constants_router
from routing.density_routes import router as density_router
from routing.health_routes import router as health_router

"""
HTTP API log-lattice (только чтение).

Обеспечивает:
- Проверку живости сервиса
- Константы полей (ζ_K(2), предельная константа, C₁)
- Значения предельных плотностей в точке
Эмпирические гистограммы по HTTP не строятся.
"""

# Настройка логирования
logging.basicConfig(level=getattr(logging, LOG_LEVEL), format=LOG_FORMAT)
logger = logging.getLogger(__name__)

app = FastAPI(title="log-lattice")

# Настройка CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Подключение роутеров
app.include_router(health_router)
app.include_router(constants_router)
app.include_router(density_router)


if __name__ == "__main__":
    import uvicorn
    from config import APP_HOST, APP_PORT

    uvicorn.run(app, host=APP_HOST, port=APP_PORT)
