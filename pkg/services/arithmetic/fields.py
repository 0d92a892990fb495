"""
Поля, единицы, ассоциированные элементы и квадратичный характер χ_D.
"""
import logging
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from sympy import jacobi_symbol

from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.models import Field

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def get_field(discriminant: int) -> Field:
    """Возвращает (кэшированный) объект поля по дискриминанту."""
    return Field(discriminant=int(discriminant))


@lru_cache(maxsize=None)
def units(field: Field) -> Tuple[AlgInt, ...]:
    """
    Группа единиц 𝒪_K^×: все элементы нормы 1.

    Для нормы 1 достаточно |x|, |y| ≤ 2 во всех девяти кольцах.
    """
    found = [
        AlgInt(x, y, field)
        for x in range(-2, 3)
        for y in range(-2, 3)
        if AlgInt(x, y, field).norm() == 1
    ]
    if len(found) != field.unit_count:
        raise RuntimeError(f"[fields] Найдено {len(found)} единиц в {field.name}, ожидалось {field.unit_count}")
    return tuple(found)


@lru_cache(maxsize=None)
def unit_matrices(field: Field) -> np.ndarray:
    """
    Матрицы умножения на единицы: (x, y) ↦ M_u (x, y).

    :return: массив формы (unit_count, 2, 2) int64
    """
    mats = []
    for u in units(field):
        col1 = (AlgInt(1, 0, field) * u).coords
        col2 = (AlgInt(0, 1, field) * u).coords
        mats.append([[col1[0], col2[0]], [col1[1], col2[1]]])
    return np.array(mats, dtype=np.int64)


def associates(a: AlgInt) -> List[AlgInt]:
    return [a * u for u in units(a.field)]


def canonical_associate(a: AlgInt) -> AlgInt:
    """Каноничный представитель класса ассоциированных: лексикографический максимум (x, y)."""
    return max(associates(a), key=lambda b: (b.x, b.y))


def canonical_mask(field: Field, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """
    Векторная версия canonical_associate: True там, где элемент
    является каноничным представителем своего класса.
    """
    keep = np.ones(len(xs), dtype=bool)
    for mat in unit_matrices(field):
        ux = mat[0, 0] * xs + mat[0, 1] * ys
        uy = mat[1, 0] * xs + mat[1, 1] * ys
        keep &= (xs > ux) | ((xs == ux) & (ys >= uy))
    return keep


@lru_cache(maxsize=None)
def chi_table(discriminant: int) -> np.ndarray:
    """
    Таблица характера Кронекера χ_D(n) = (D|n) для n mod |D|.

    Для нечетного D: χ_D(n) = (n | |D|) (символ Якоби);
    D = −4: χ(n) = (−1)^((n−1)/2) для нечетных n;
    D = −8: χ(n) = +1 при n ≡ 1, 3 и −1 при n ≡ 5, 7 (mod 8).
    """
    modulus = -discriminant
    table = np.zeros(modulus, dtype=np.int64)
    for n in range(modulus):
        if discriminant == -4:
            table[n] = 0 if n % 2 == 0 else (1 if n % 4 == 1 else -1)
        elif discriminant == -8:
            table[n] = {1: 1, 3: 1, 5: -1, 7: -1}.get(n % 8, 0)
        else:
            table[n] = jacobi_symbol(n, modulus) if np.gcd(n, modulus) == 1 else 0
    return table


def kronecker(discriminant: int, p: int) -> int:
    """Символ Кронекера (D|p) для простого p."""
    return int(chi_table(discriminant)[p % (-discriminant)])
