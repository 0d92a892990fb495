"""
Разложение рациональных простых в 𝒪_K и факторизация элементов.
"""
import logging
import math
from functools import lru_cache
from typing import Dict, Optional

from sympy import factorint

from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.fields import canonical_associate, kronecker
from services.arithmetic.models import Field, IdealFactorization, PrimeSplit, SplitType
from services.errors import ZeroElement

logger = logging.getLogger(__name__)


def _search_norm(field: Field, p: int) -> Optional[AlgInt]:
    """
    Перебор формы нормы в прямоугольнике |y| ≤ √(4p/|D|)+1, |x| ≤ √p+|y|+1.

    Возвращает первое найденное решение N(a) = p в порядке (y, x) или None.
    """
    y_max = math.isqrt(4 * p // field.abs_disc) + 1
    for y in range(0, y_max + 1):
        x_max = math.isqrt(p) + y + 1
        for x in range(-x_max, x_max + 1):
            a = AlgInt(x, y, field)
            if a.norm() == p:
                return a
    return None


@lru_cache(maxsize=None)
def split_prime(field: Field, p: int) -> PrimeSplit:
    """
    Тип разложения p по символу Кронекера (D|p) и образующие простых идеалов.

    :param field: поле K
    :param p: рациональное простое
    :return: PrimeSplit; образующие приведены к каноничным ассоциированным
    """
    symbol = kronecker(field.discriminant, p)

    if symbol == -1:
        return PrimeSplit(
            p=p, kind=SplitType.INERT, generators=(AlgInt(p, 0, field),), ideal_norms=(p * p,)
        )

    pi = _search_norm(field, p)
    if pi is None:
        raise RuntimeError(f"[split_prime] Не найден элемент нормы {p} в {field.name}")
    pi = canonical_associate(pi)

    if symbol == 0:
        return PrimeSplit(p=p, kind=SplitType.RAMIFIED, generators=(pi,), ideal_norms=(p,))

    pi_bar = canonical_associate(pi.conj())
    first, second = sorted((pi, pi_bar), key=lambda b: (b.x, b.y), reverse=True)
    return PrimeSplit(p=p, kind=SplitType.SPLIT, generators=(first, second), ideal_norms=(p, p))


def factor(a: AlgInt) -> IdealFactorization:
    """
    Факторизация a = unit · ∏ πᵢ^eᵢ.

    Норма раскладывается над ℤ, каждое простое поднимается через split_prime,
    показатели находятся повторным точным делением.
    """
    if not a:
        raise ZeroElement("Нельзя разложить нулевой элемент")

    field = a.field
    rest = a
    factors = []
    for p in sorted(factorint(a.norm())):
        for prime in split_prime(field, p).generators:
            exponent = 0
            while True:
                quotient = rest.divide(prime)
                if quotient is None:
                    break
                rest = quotient
                exponent += 1
            if exponent:
                factors.append((prime, exponent))

    if rest.norm() != 1:
        raise RuntimeError(f"[factor] Остаток {rest} не является единицей")
    return IdealFactorization(unit=rest, factors=tuple(factors))


def prime_ideal_key(prime: AlgInt) -> tuple:
    """Ключ простого идеала: координаты каноничного образующего."""
    return canonical_associate(prime).coords


def prime_ideal_norms(fact: IdealFactorization) -> Dict[tuple, int]:
    """Простые идеалы, делящие элемент: ключ → норма идеала."""
    return {prime_ideal_key(prime): prime.norm() for prime, _ in fact.factors}
