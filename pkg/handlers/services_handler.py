import logging
from importlib import import_module


def run_command(params: dict) -> dict:
    """
    Выполнение команды через CommandProvider.

    Создает экземпляр провайдера, передает ему параметры и возвращает
    словарь с результатом либо с ошибкой и кодом выхода.

    :param params: параметры запуска, включая ключ command
    :return: {"result": ..., "exit_code": 0} или {"error": ..., "exit_code": 1|2}
    """
    cmd_class_name = "CommandProvider"
    cmd = "services.commands." + cmd_class_name

    if not params or not params.get("command"):
        logging.error(f"[run_command] Не указана команда: '{params}'")
        return {"error": "Не указана команда", "exit_code": 1}

    try:
        cmd_module = import_module(cmd)
        cmd_class = getattr(cmd_module, cmd_class_name)
        result = cmd_class().execute(params)
        if "error" in result:
            logging.error(f"[run_command] Ошибка: {result['error']}")
        return result
    except Exception as e:
        logging.error(f"[run_command] Ошибка: {e}")
        return {"error": str(e), "exit_code": 2}
