"""
Точное построение и перебор ℤ-решеток со сдвигом.

Принадлежность диску решается в целых числах: |p|² ≤ r² проверяется
как A M² + B M N + C N² ≤ ⌊r²·den⌋, где r² рационально
(для вещественного r берется точное двоичное значение float).
"""
import logging
import math
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from services.arithmetic.AlgInt import AlgInt
from services.errors import DegenerateBasis, ValidationFailure, ZeroElement
from services.lattices.models import Grid, GridPoints, Sector

logger = logging.getLogger(__name__)

VectorLike = Union[Sequence[object], complex]
ENUM_BLOCK = 1 << 21


#region Точные координаты

def _to_vector(value: VectorLike) -> Tuple[sympy.Expr, sympy.Expr]:
    """Плоский вектор из пары (x, y) строк/чисел или из complex."""
    if isinstance(value, complex):
        return sympy.nsimplify(value.real), sympy.nsimplify(value.imag)
    if isinstance(value, str):
        parts = value.split(",")
        if len(parts) != 2:
            raise ValidationFailure(f"Ожидался вектор 'x,y', получено '{value}'")
        value = parts
    x, y = value
    try:
        return sympy.sympify(x), sympy.sympify(y)
    except (sympy.SympifyError, TypeError) as e:
        raise ValidationFailure(f"Некорректная координата вектора: {e}")


def _to_fraction(expr: sympy.Expr, what: str) -> Fraction:
    simplified = sympy.nsimplify(sympy.simplify(expr))
    if not simplified.is_rational:
        raise ValidationFailure(f"{what} должно быть рациональным, получено {simplified}")
    rational = sympy.Rational(simplified)
    return Fraction(int(rational.p), int(rational.q))


def _dot(u, v) -> sympy.Expr:
    return sympy.expand(u[0] * v[0] + u[1] * v[1])


def _combine(a: int, u, b: int, v):
    return (sympy.expand(a * u[0] + b * v[0]), sympy.expand(a * u[1] + b * v[1]))


def _round_half_up(value: Fraction) -> int:
    return math.floor(value + Fraction(1, 2))

#endregion


def lagrange_gauss(g11: Fraction, g12: Fraction, g22: Fraction) -> Tuple[List[List[int]], Tuple[Fraction, Fraction, Fraction]]:
    """
    Приведение Лагранжа-Гаусса по матрице Грама.

    :return: (T, gram): унимодулярная матрица (строки задают новые векторы
        в старом базисе) и приведенная матрица Грама с g12 ≤ 0
    """
    T = [[1, 0], [0, 1]]
    while True:
        if g11 > g22:
            T = [T[1], T[0]]
            g11, g22 = g22, g11
        mu = _round_half_up(g12 / g11)
        if mu:
            T[1] = [T[1][0] - mu * T[0][0], T[1][1] - mu * T[0][1]]
            g22 = g22 - 2 * mu * g12 + mu * mu * g11
            g12 = g12 - mu * g11
        if g22 >= g11:
            break
    if g12 > 0:
        T[1] = [-T[1][0], -T[1][1]]
        g12 = -g12
    return T, (g11, g12, g22)


def make_grid(v1: VectorLike, v2: VectorLike, a: Optional[VectorLike] = None) -> Grid:
    """
    Построение решетки со сдвигом a + (ℤv1 + ℤv2) с приведенным базисом.

    :param v1: первый вектор, точные координаты (строки sympy, числа)
    :param v2: второй вектор
    :param a: сдвиг; по умолчанию 0
    :return: Grid с приведенным базисом и сдвигом в [0, 1)²
    :raises DegenerateBasis: det(v1, v2) = 0
    """
    u1, u2 = _to_vector(v1), _to_vector(v2)
    det = sympy.simplify(u1[0] * u2[1] - u1[1] * u2[0])
    if det.equals(0):
        raise DegenerateBasis(f"Вырожденный базис: det({u1}, {u2}) = 0")

    gram = (
        _to_fraction(_dot(u1, u1), "g11"),
        _to_fraction(_dot(u1, u2), "g12"),
        _to_fraction(_dot(u2, u2), "g22"),
    )
    T, reduced = lagrange_gauss(*gram)
    w1 = _combine(T[0][0], u1, T[0][1], u2)
    w2 = _combine(T[1][0], u1, T[1][1], u2)

    shift = (Fraction(0), Fraction(0))
    if a is not None:
        shift = _basis_coordinates(_to_vector(a), w1, w2, reduced)

    grid = Grid(
        basis=(w1, w2),
        gram=reduced,
        shift=shift,
        v1=complex(float(w1[0]), float(w1[1])),
        v2=complex(float(w2[0]), float(w2[1])),
    )
    logger.debug(f"[make_grid] gram={reduced}, shift={shift}, covol={grid.covol:.6f}")
    return grid


def _basis_coordinates(a, w1, w2, gram) -> Tuple[Fraction, Fraction]:
    g11, g12, g22 = gram
    det = g11 * g22 - g12 * g12
    d1 = _to_fraction(_dot(a, w1), "a·v1")
    d2 = _to_fraction(_dot(a, w2), "a·v2")
    s = (g22 * d1 - g12 * d2) / det
    t = (g11 * d2 - g12 * d1) / det
    return s - math.floor(s), t - math.floor(t)


def grid_from_ideal(m: AlgInt) -> Grid:
    """
    Идеал m𝒪_K как решетка: исходный базис (m, m·ω), вложение в плоскость
    ω = (trace + i√|D|)/2.
    """
    if not m:
        raise ZeroElement("Образующий идеала должен быть ненулевым")
    field = m.field
    omega = (sympy.Rational(field.trace, 2), sympy.sqrt(field.abs_disc) / 2)

    def embed(b: AlgInt):
        return (sympy.expand(b.x + b.y * omega[0]), sympy.expand(b.y * omega[1]))

    m_omega = m * AlgInt(0, 1, field)
    u1, u2 = embed(m), embed(m_omega)
    gram = (
        Fraction(m.norm()),
        Fraction(field.trace * m.norm(), 2),
        Fraction(m.norm() * field.norm_omega),
    )
    T, reduced = lagrange_gauss(*gram)
    b1 = T[0][0] * m + T[0][1] * m_omega
    b2 = T[1][0] * m + T[1][1] * m_omega
    w1, w2 = embed(b1), embed(b2)
    return Grid(
        basis=(w1, w2),
        gram=reduced,
        v1=complex(float(w1[0]), float(w1[1])),
        v2=complex(float(w2[0]), float(w2[1])),
        discriminant=field.discriminant,
        embedding=(b1.coords, b2.coords),
        generator=m.coords,
    )


def scale_grid(g: Grid, k: int) -> Grid:
    """k·(a + Λ) для целого k ≥ 1."""
    w1, w2 = g.basis
    s, t = g.shift
    a = (
        sympy.Rational(s.numerator, s.denominator) * w1[0] + sympy.Rational(t.numerator, t.denominator) * w2[0],
        sympy.Rational(s.numerator, s.denominator) * w1[1] + sympy.Rational(t.numerator, t.denominator) * w2[1],
    )
    return make_grid(
        (k * w1[0], k * w1[1]), (k * w2[0], k * w2[1]), (k * a[0], k * a[1])
    )


def lattice_of(g: Grid) -> Grid:
    """Решетка Λ без сдвига."""
    if g.is_lattice:
        return g
    return g.model_copy(update={"shift": (Fraction(0), Fraction(0))})


#region Перебор точек

def _radius_squared(r: float, r2: Optional[Fraction]) -> Fraction:
    if r2 is not None:
        return Fraction(r2)
    if r < 0:
        raise ValidationFailure(f"Радиус должен быть неотрицательным, получено {r}")
    return Fraction(r) ** 2


def _row_bounds(g: Grid, r2: Fraction) -> Tuple[int, int, int, int]:
    """Ограничивающий прямоугольник (m_lo, m_hi, n_lo, n_hi) эллипса |p|² ≤ r²."""
    g11, g12, g22 = g.gram
    det = g.gram_det
    r = math.sqrt(r2)
    half_m = r * math.sqrt(g22 / det)
    half_n = r * math.sqrt(g11 / det)
    s, t = float(g.shift[0]), float(g.shift[1])
    return (
        math.floor(-half_m - s) - 1, math.ceil(half_m - s) + 1,
        math.floor(-half_n - t) - 1, math.ceil(half_n - t) + 1,
    )


def _box_fits_int64(g: Grid, bounds: Tuple[int, int, int, int]) -> bool:
    """Форма A M² + B M N + C N² не выходит за int64 ни в одном углу прямоугольника."""
    A, B, C, _ = g.form
    d = g.shift_den
    m_lo, m_hi, n_lo, n_hi = bounds
    M = max(abs(d * m_lo), abs(d * m_hi)) + d
    N = max(abs(d * n_lo), abs(d * n_hi)) + d
    return abs(A) * M * M + abs(B) * M * N + abs(C) * N * N < 1 << 63


def _iter_rows(g: Grid, r2: Fraction) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Блоки строк (m, n) ограничивающего прямоугольника в каноничном порядке."""
    m_lo, m_hi, n_lo, n_hi = _row_bounds(g, r2)
    n_vals = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    rows_per_block = max(1, ENUM_BLOCK // max(len(n_vals), 1))
    for start in range(m_lo, m_hi + 1, rows_per_block):
        m_vals = np.arange(start, min(start + rows_per_block, m_hi + 1), dtype=np.int64)
        mm, nn = np.meshgrid(m_vals, n_vals, indexing="ij")
        yield mm.ravel(), nn.ravel()


def enumerate_disk(g: Grid, r: float = 0.0, exclude_zero: bool = False, r2: Optional[Fraction] = None) -> GridPoints:
    """
    Все точки a + Λ с |p| ≤ r (замкнутый диск), без 0 при exclude_zero.

    :param r: радиус (используется, если r2 не задан)
    :param r2: точный квадрат радиуса
    """
    r2 = _radius_squared(r, r2)
    A, B, C, den = g.form
    d = g.shift_den
    s_num, t_num = int(g.shift[0] * d), int(g.shift[1] * d)
    limit = math.floor(r2 * den)
    if limit >= 1 << 62:
        raise ValidationFailure("Радиус слишком велик для точного целочисленного перебора")

    # в углах прямоугольника форма может выйти за int64, тогда счет идет в целых Python
    dtype = np.int64 if _box_fits_int64(g, _row_bounds(g, r2)) else object
    coords, norms = [], []
    for mm, nn in _iter_rows(g, r2):
        M = d * mm.astype(dtype) + s_num
        N = d * nn.astype(dtype) + t_num
        q = A * M * M + B * M * N + C * N * N
        mask = np.asarray(q <= limit, dtype=bool)
        if exclude_zero:
            mask &= np.asarray(q > 0, dtype=bool)
        coords.append(np.stack([mm[mask], nn[mask]], axis=1))
        norms.append(q[mask].astype(np.int64))

    coords = np.concatenate(coords) if coords else np.zeros((0, 2), dtype=np.int64)
    norm_num = np.concatenate(norms) if norms else np.zeros(0, dtype=np.int64)
    return _assemble(g, coords, norm_num, den)


def _assemble(g: Grid, coords: np.ndarray, norm_num: np.ndarray, den: int) -> GridPoints:
    s, t = float(g.shift[0]), float(g.shift[1])
    values = (coords[:, 0] + s) * g.v1 + (coords[:, 1] + t) * g.v2
    alg = None
    if g.embedding is not None:
        (a, b), (c, e) = g.embedding
        alg = np.stack([coords[:, 0] * a + coords[:, 1] * c, coords[:, 0] * b + coords[:, 1] * e], axis=1)
    return GridPoints(coords=coords, norm_num=norm_num, norm_den=den, values=values, alg=alg)


def in_sector(values: np.ndarray, sector: Sector) -> np.ndarray:
    """
    Угловое условие сектора: t = arg(p·conj(z)) ∈ (−θ/2, θ/2].

    Угол считается в float; значение −π переводится в π. При θ = 2π
    проходят все углы.
    """
    if sector.full:
        return np.ones(len(values), dtype=bool)
    w = values * np.conj(sector.direction)
    t = np.arctan2(w.imag, w.real)
    t = np.where(t <= -math.pi, t + 2 * math.pi, t)
    half = sector.aperture / 2
    return (t > -half) & (t <= half)


def enumerate_sector(g: Grid, sector: Sector, r2: Optional[Fraction] = None) -> GridPoints:
    """Точки a + Λ в C(z, θ, R): 0 < |p| ≤ R и угловое условие."""
    points = enumerate_disk(g, sector.radius, exclude_zero=True, r2=r2)
    return points.select(in_sector(points.values, sector))

#endregion


#region Степенные суммы

def power_sum(g: Grid, k: int, x: float, r2: Optional[Fraction] = None) -> float:
    """
    Σ_{p ∈ a+Λ, |p| ≤ x} |p|^k.

    Для четного k сумма точная (рациональная), для нечетного используется math.fsum
    по точкам в каноничном порядке.
    """
    if k < 0:
        raise ValidationFailure(f"Показатель должен быть неотрицательным, получено {k}")
    points = enumerate_disk(g, x, r2=r2)
    if k == 0:
        return float(len(points))
    if k % 2 == 0:
        half = k // 2
        values, counts = np.unique(points.norm_num, return_counts=True)
        total = sum(int(c) * int(v) ** half for v, c in zip(values, counts))
        return float(Fraction(total, points.norm_den ** half))
    return math.fsum(float(v) for v in points.moduli() ** k)


def power_sum_asymptotic(g: Grid, k: int, x: float) -> float:
    """Главный член 2π x^{k+2} / ((k+2)·covol)."""
    if x <= 0:
        raise ValidationFailure(f"x должно быть положительным, получено {x}")
    return 2 * math.pi * x ** (k + 2) / ((k + 2) * g.covol)


def gauss_error_bound(g: Grid, x: float) -> float:
    """Оценка кольцом: |#{|p| ≤ x} − πx²/covol| ≤ π(2x·diam + diam²)/covol."""
    return math.pi * (2 * x * g.diam + g.diam ** 2) / g.covol


def discontinuity_radii(g: Grid, radius: float) -> List[float]:
    """Различные |p| ≤ radius для ненулевых p ∈ Λ."""
    points = enumerate_disk(lattice_of(g), radius, exclude_zero=True)
    return [math.sqrt(Fraction(int(v), points.norm_den)) for v in np.unique(points.norm_num)]

#endregion
