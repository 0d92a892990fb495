import logging
from importlib import import_module

from pydantic import ValidationError

from services.commands.models import COMMANDS, RunConfig
from services.errors import ComputationFailure, ValidationFailure

logger = logging.getLogger(__name__)


class CommandProvider:
    """
    Провайдер команд CLI.

    Класс отвечает за:
    - Проверку параметров запуска через RunConfig
    - Динамическую загрузку реализации команды services.commands.<code>
    - Перевод исключений в словарь с ошибкой и кодом выхода
    """

    @staticmethod
    def load(code: str):
        """
        Класс команды по ее коду: 'r2d' → services.commands.r2d.R2dCommand.

        :raises ImportError: если модуль команды не найден
        """
        module = import_module(f"services.commands.{code}")
        return getattr(module, f"{code.capitalize()}Command")

    def execute(self, params: dict) -> dict:
        """
        Выполняет команду.

        :param params: параметры запуска, включая ключ command
        :return: {"result": ..., "exit_code": 0} или {"error": ..., "exit_code": 1|2}
        """
        try:
            code = params.get("command")
            logger.info(f"[CommandProvider] Команда '{code}', параметры: {params}")

            #region Проверяем параметры
            if code not in COMMANDS:
                return {"error": f"Неизвестная команда '{code}', доступны: {', '.join(COMMANDS)}", "exit_code": 1}
            config = RunConfig(**params)
            #endregion

            command = CommandProvider.load(code)()
            result = command.execute(config)
            logger.info(f"[CommandProvider] Команда '{code}' выполнена")
            return {"result": result, "exit_code": 0}
        except (ValidationError, ValidationFailure) as e:
            error_msg = f"Ошибка валидации: {e}"
            logger.error(f"[CommandProvider] {error_msg}")
            return {"error": error_msg, "exit_code": 1}
        except ComputationFailure as e:
            error_msg = f"Ошибка вычисления: {e}"
            logger.error(f"[CommandProvider] {error_msg}")
            return {"error": error_msg, "exit_code": 2}
        except Exception as e:
            error_msg = f"Ошибка в CommandProvider: {e}"
            logger.exception(f"[CommandProvider] {error_msg}")
            return {"error": error_msg, "exit_code": 2}
