"""
Функция Эйлера φ_K, функция Мёбиуса μ_K, системы вычетов и делители идеалов.
"""
import itertools
import logging
import math
from typing import List, Tuple

import numpy as np

from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.fields import canonical_mask, units
from services.arithmetic.models import Field
from services.arithmetic.primes import factor
from services.errors import ZeroElement

logger = logging.getLogger(__name__)


def norm(a: AlgInt) -> int:
    return a.norm()


def euler_phi(a: AlgInt) -> int:
    """
    φ_K(a𝒪_K) = N(a) ∏_{𝔭|a} (1 − 1/N𝔭), точно в целых числах.

    :raises ZeroElement: для a = 0
    """
    if not a:
        raise ZeroElement("φ_K не определена в нуле")
    result = a.norm()
    for prime, _ in factor(a).factors:
        q = prime.norm()
        result = result // q * (q - 1)
    return result


def moebius(a: AlgInt) -> int:
    if not a:
        raise ZeroElement("μ_K не определена в нуле")
    fact = factor(a)
    if any(exponent >= 2 for _, exponent in fact.factors):
        return 0
    return -1 if len(fact.factors) % 2 else 1


def _hermite_diagonal(q: AlgInt) -> Tuple[int, int]:
    """
    Диагональ эрмитовой формы подрешетки q𝒪_K ⊂ ℤ²: (d1, d2), d1·d2 = N(q).

    d2: НОД вторых координат образующих q и q·ω; d1 = N(q)/d2.
    """
    q_omega = q * AlgInt(0, 1, q.field)
    d2 = math.gcd(q.y, q_omega.y)
    return q.norm() // d2, d2


def residues_mod(q: AlgInt) -> List[AlgInt]:
    """
    Полная система вычетов 𝒪_K / q𝒪_K: x + yω, 0 ≤ x < d1, 0 ≤ y < d2.
    """
    if not q:
        raise ZeroElement("Вычеты по модулю нуля не определены")
    d1, d2 = _hermite_diagonal(q)
    return [AlgInt(x, y, q.field) for y in range(d2) for x in range(d1)]


def is_invertible_mod(r: AlgInt, q: AlgInt) -> bool:
    """
    r обратим по модулю q ⇔ ℤ-оболочка {r, rω, q, qω} совпадает с 𝒪_K,
    т.е. НОД всех 2×2 миноров равен 1.
    """
    if not q:
        raise ZeroElement("Обратимость по модулю нуля не определена")
    omega = AlgInt(0, 1, q.field)
    vectors = [r.coords, (r * omega).coords, q.coords, (q * omega).coords]
    index = 0
    for (a, b), (c, d) in itertools.combinations(vectors, 2):
        index = math.gcd(index, a * d - b * c)
    return index == 1


def count_invertible_residues(q: AlgInt) -> int:
    """Переборный оракул для φ_K."""
    return sum(1 for r in residues_mod(q) if is_invertible_mod(r, q))


def ideal_divisors(a: AlgInt) -> List[AlgInt]:
    """Все идеальные делители a (по одному образующему на идеал) из факторизации."""
    fact = factor(a)
    one = AlgInt(1, 0, a.field)
    divisors = []
    ranges = [range(exponent + 1) for _, exponent in fact.factors]
    for exponents in itertools.product(*ranges):
        d = one
        for (prime, _), e in zip(fact.factors, exponents):
            for _ in range(e):
                d = d * prime
        divisors.append(d)
    return divisors


def elements_up_to_norm(field: Field, bound: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Все ненулевые x + yω с N ≤ bound в каноничном порядке (x, y).

    :return: массивы координат x, y (int64)
    """
    y_max = math.isqrt(4 * bound // field.abs_disc) + 1
    x_max = math.isqrt(bound) + y_max + 1
    xs, ys = np.meshgrid(
        np.arange(-x_max, x_max + 1, dtype=np.int64),
        np.arange(-y_max, y_max + 1, dtype=np.int64),
        indexing="ij",
    )
    xs, ys = xs.ravel(), ys.ravel()
    norms = xs * xs + field.trace * xs * ys + field.norm_omega * ys * ys
    mask = (norms > 0) & (norms <= bound)
    return xs[mask], ys[mask]


def ideal_representatives(field: Field, bound: float) -> List[AlgInt]:
    """
    Каноничные образующие всех (главных) идеалов нормы ≤ bound.

    Единицы действуют свободно на ненулевых элементах, поэтому каждый
    класс ассоциированных дает ровно одного представителя.
    """
    xs, ys = elements_up_to_norm(field, int(math.floor(bound)))
    keep = canonical_mask(field, xs, ys)
    reps = [AlgInt(int(x), int(y), field) for x, y in zip(xs[keep], ys[keep])]
    if len(reps) * len(units(field)) != len(xs):
        raise RuntimeError("[ideal_representatives] Нарушена свобода действия единиц")
    return reps
