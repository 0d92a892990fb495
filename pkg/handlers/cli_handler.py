"""
Командная строка log-lattice.

Запуск: ``python -m handlers.cli_handler <команда> [опции]``.
Любую опцию можно задать в файле key=value, переданном через --config;
явные опции командной строки важнее файла.
"""
import json
import logging
import sys

import click

from config import LOG_FORMAT, LOG_LEVEL
from handlers.services_handler import run_command
from services.errors import ConfigError


def read_config_file(path: str) -> dict:
    """Файл key=value: по паре на строку, # начинает комментарий, '-' в ключах равен '_'."""
    values = {}
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{number}: ожидалось key=value, получено '{line}'")
            key = key.strip().lstrip("-").replace("-", "_")
            values["lam" if key == "lambda" else key] = value.strip()
    return values


def _load_config(ctx: click.Context, param: click.Parameter, value: str):
    if not value:
        return value
    try:
        ctx.default_map = {**(ctx.default_map or {}), **read_config_file(value)}
    except ConfigError as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param)
    return value


class CliGroup(click.Group):
    """Группа команд: ошибки разбора опций и файла --config завершаются кодом 1."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = 1
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = 1
            raise


def _apply(options):
    def decorator(f):
        for option in reversed(options):
            f = option(f)
        return f
    return decorator


#region Группы опций

CONFIG_OPTIONS = [
    click.option("--config", type=click.Path(exists=True, dir_okay=False), callback=_load_config,
                 is_eager=True, expose_value=False, help="Файл key=value с опциями"),
    click.option("--out", help="Путь CSV-артефакта"),
    click.option("--summary", help="Путь JSON-сводки"),
]

SOURCE_OPTIONS = [
    click.option("--grid", help="Пресет (gauss, eisenstein, square2) или базис 'x1,y1;x2,y2'"),
    click.option("--offset", help="Сдвиг решетки 'x,y'"),
    click.option("--field", type=int, help="Дискриминант поля"),
    click.option("--ideal", help="Образующий идеала 'x,y' по базису (1, ω)"),
    click.option("--prime-bound", type=int, help="Граница эйлеровых произведений"),
]

PAIR_OPTIONS = [
    click.option("--N", "N", type=int, help="Горизонт N"),
    click.option("--scaling", help="one | power:α[:c] | n-over-log"),
    click.option("--window", type=float, help="Полуширина окна A (X для цилиндра)"),
    click.option("--bins", type=int, help="Число бинов по первой оси"),
    click.option("--bins-im", type=int, help="Число бинов по второй оси"),
    click.option("--geometry", type=click.Choice(["plane", "cylinder", "polar"])),
    click.option("--weights", type=click.Choice(["unit", "euler"])),
    click.option("--renorm", help="probability | psi | n4-psi2 | psi2 | n6 | explicit:<значение>"),
    click.option("--diagonal", is_flag=True, help="Учитывать пары (x, x)"),
    click.option("--method", type=click.Choice(["auto", "naive", "windowed"])),
    click.option("--force", is_flag=True, help="Разрешить вероятностную нормировку в масштабированном режиме"),
    click.option("--workers", type=int, help="Число процессов"),
]

THEORY_OPTIONS = [
    click.option("--density", help="unscaled | unscaled-euler | unscaled-n4 | poissonian | theta-infty | theta-n | weighted-linear"),
    click.option("--lambda", "lam", type=float, help="λ для theta-infty"),
    click.option("--quadrature", type=click.Choice(["midpoint", "subsample"])),
    click.option("--subsample", type=int, help="Подразбиение n×n"),
]

COMPARE_OPTIONS = [
    click.option("--empirical-csv", type=click.Path(exists=True, dir_okay=False)),
    click.option("--theory-csv", type=click.Path(exists=True, dir_okay=False)),
    click.option("--r-min", type=float),
    click.option("--r-max", type=float),
    click.option("--exclude-discontinuities", is_flag=True),
]

SUM_OPTIONS = [
    click.option("--kind", type=click.Choice(["power", "mertens", "mirsky", "ideal-count", "prop65"])),
    click.option("--x", "x", type=float, help="Радиус или граница нормы"),
    click.option("--k", "k", help="Сдвиг k = 'x,y' в сумме Мирского"),
    click.option("--power", type=int, help="Показатель в Σ|p|^k"),
    click.option("--direction", help="Направление сектора 'x,y'"),
    click.option("--aperture", type=float, help="Раствор сектора θ"),
]

LINE_OPTIONS = [
    click.option("--d", "d", type=int, help="d в x² + d·y²"),
    click.option("--half-width", type=float, help="Полуширина одномерной гистограммы T"),
    click.option("--verify", is_flag=True, help="Проверить точное тождество"),
]

#endregion


def _run(name: str, kwargs: dict) -> None:
    params = {key: value for key, value in kwargs.items() if value is not None}
    params["command"] = name
    result = run_command(params)
    if result.get("exit_code", 2) == 0:
        click.echo(json.dumps(result["result"], ensure_ascii=False, indent=2))
    else:
        click.echo(f"Ошибка: {result['error']}", err=True)
    sys.exit(result.get("exit_code", 2))


@click.group(cls=CliGroup)
@click.option("--log-level", default=LOG_LEVEL, type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]))
def cli(log_level: str):
    """Корреляции пар логарифмов решеток и идеалов мнимых квадратичных полей."""
    logging.basicConfig(level=getattr(logging, log_level), format=LOG_FORMAT)


@cli.command()
@_apply(CONFIG_OPTIONS + SOURCE_OPTIONS + PAIR_OPTIONS)
def empirical(**kwargs):
    """Эмпирическая гистограмма меры пар."""
    _run("empirical", kwargs)


@cli.command()
@_apply(CONFIG_OPTIONS + SOURCE_OPTIONS + PAIR_OPTIONS + THEORY_OPTIONS)
def theory(**kwargs):
    """Теоретическая гистограмма предельной плотности."""
    _run("theory", kwargs)


@cli.command()
@_apply(CONFIG_OPTIONS + SOURCE_OPTIONS + PAIR_OPTIONS + THEORY_OPTIONS + COMPARE_OPTIONS)
def compare(**kwargs):
    """Метрики эмпирической гистограммы против теории."""
    _run("compare", kwargs)


@cli.command()
@_apply(CONFIG_OPTIONS + SOURCE_OPTIONS + SUM_OPTIONS)
def sums(**kwargs):
    """Суммы Гаусса, Мертенса, Мирского и счет идеалов."""
    _run("sums", kwargs)


@cli.command()
@_apply(CONFIG_OPTIONS + [PAIR_OPTIONS[0], PAIR_OPTIONS[3]] + THEORY_OPTIONS[2:] + LINE_OPTIONS)
def r2d(**kwargs):
    """Мера пар r_{2,d}."""
    _run("r2d", kwargs)


@cli.command()
@_apply(CONFIG_OPTIONS + SOURCE_OPTIONS + [PAIR_OPTIONS[0], PAIR_OPTIONS[3]] + THEORY_OPTIONS[2:] + LINE_OPTIONS[1:])
def ortho(**kwargs):
    """Спектр ортодлин и его корреляции пар."""
    _run("ortho", kwargs)


@cli.command()
@_apply(CONFIG_OPTIONS + SOURCE_OPTIONS)
def constants(**kwargs):
    """Константы поля: ζ_K(2), предельная константа, C₁."""
    _run("constants", kwargs)


if __name__ == "__main__":
    cli()
