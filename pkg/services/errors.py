"""
Иерархия исключений.

Библиотечные функции выбрасывают исключения; граница команд
(services/commands/CommandProvider.py) и HTTP-маршруты переводят их
в словарь ``{"error": ...}`` и код выхода.
"""


class LogLatticeError(Exception):
    """Базовая ошибка. exit_code: код выхода CLI."""

    exit_code = 2


class ValidationFailure(LogLatticeError):
    """Некорректные входные данные (код выхода 1)."""

    exit_code = 1


class DegenerateBasis(ValidationFailure):
    pass


class ZeroElement(ValidationFailure):
    pass


class InvalidTolerance(ValidationFailure):
    pass


class WeightMismatch(ValidationFailure):
    pass


class WindowTooLarge(ValidationFailure):
    pass


class GeometryMismatch(ValidationFailure):
    pass


class ConfigError(ValidationFailure):
    pass


class UnknownField(ValidationFailure):
    pass


class ComputationFailure(LogLatticeError):
    """Ошибка во время вычисления (код выхода 2)."""

    exit_code = 2


class BoundTooSmall(ComputationFailure):
    pass
