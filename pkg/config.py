"""
Конфигурация log-lattice.

Все настройки разделены на логические секции. Модули импортируют нужные
значения напрямую: ``from config import LOG_LEVEL, ...``.
Любой параметр командной строки можно переопределить файлом key=value
через ``--config`` (см. handlers/cli_handler.py).
"""

#region <<  Настройки логирования >>
LOG_LEVEL = "INFO"  # Уровень логирования (DEBUG, INFO, WARNING, ERROR, CRITICAL)
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"  # Формат логов
#endregion <<  Настройки логирования >>

#region << Вычисления >>
DEFAULT_PRIME_BOUND = 1_000_000  # Граница усечения эйлеровых произведений
ZETA_TOLERANCE = 1e-10           # Точность ζ_K(2) по умолчанию
PAIR_CHUNK_ROWS = 128            # Строк на один векторизованный блок пар
PAIR_BATCH_PAIRS = 2_000_000     # Пар на один блок в оконном переборе
WORKERS = 1                      # Число процессов multiprocessing.Pool по умолчанию
SUBSAMPLE = 4                    # Подразбиение n×n для интегралов по бинам
BINS = 100                       # Число бинов по каждой оси по умолчанию
WINDOW_SLACK = 1e-9              # Относительный запас границ отбора в оконном переборе
#endregion << Вычисления >>

#region << Форматирование артефактов >>
SIGNIFICANT_DIGITS = 17  # Значащих цифр в CSV: double читается обратно без потерь
#endregion << Форматирование артефактов >>

#region << Пресеты >>
# Встроенные решетки и поля лежат в presets/versions/v{PRESETS_VERSION}.yaml
PRESETS_VERSION = "1"
#endregion << Пресеты >>

#region <<  Настройки безопасности >>
CORS_ORIGINS = ["*"]  # Список разрешенных источников для CORS
#endregion <<  Настройки безопасности >>

#region << FastAPI >>
APP_HOST = "localhost"  # Хост FastAPI сервера
APP_PORT = 8000         # Порт FastAPI сервера
MAX_DENSITY_RADIUS = 200.0  # Максимальный |z| для плотностей, вычисляемых перебором решетки
#endregion << FastAPI >>
