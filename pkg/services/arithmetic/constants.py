"""
Аналитические константы: ζ_K(2), c_𝔪, c_{𝔪,k}, предельная константа
эйлерово-взвешенной плотности и константа частичных сумм N(𝔞)³ f(𝔞).

Эйлеровы произведения усекаются по рациональным простым p ≤ prime_bound.
Над каждым p лежит не более двух простых идеалов, дефицит логарифма
каждого множителя не больше 4/N𝔭², поэтому хвост логарифма ≤ 8/prime_bound.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Tuple

import numpy as np
from sympy import factorint

from config import DEFAULT_PRIME_BOUND
from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.fields import chi_table, get_field
from services.arithmetic.models import EulerProduct, ExactConstant, Field, ZetaValue
from services.arithmetic.primes import factor, prime_ideal_norms
from services.arithmetic.sieve import primes_up_to
from services.errors import BoundTooSmall, InvalidTolerance, ValidationFailure, ZeroElement

logger = logging.getLogger(__name__)

ZETA_2 = math.pi ** 2 / 6
ZETA_CHUNK = 1_000_000


def tail_bound(prime_bound: int) -> float:
    return 8.0 / prime_bound


def _check_bound(prime_bound: int) -> None:
    if prime_bound < 2:
        raise ValidationFailure(f"prime_bound должен быть ≥ 2, получено {prime_bound}")


@lru_cache(maxsize=32)
def prime_ideal_norm_array(discriminant: int, prime_bound: int) -> np.ndarray:
    """
    Нормы всех простых идеалов над p ≤ prime_bound (float64, с повторением
    для расщепляющихся p).
    """
    primes = primes_up_to(prime_bound).astype(np.float64)
    kind = chi_table(discriminant)[primes_up_to(prime_bound) % (-discriminant)]
    norms = np.concatenate([
        primes[kind == 1],
        primes[kind == 1],
        primes[kind == 0],
        primes[kind == -1] ** 2,
    ])
    norms.setflags(write=False)
    return norms


def _log_product(field: Field, prime_bound: int, log_factor: Callable[[np.ndarray], np.ndarray]) -> float:
    norms = prime_ideal_norm_array(field.discriminant, prime_bound)
    return float(np.sum(log_factor(norms)))


@lru_cache(maxsize=64)
def _generic_log(discriminant: int, prime_bound: int, which: str) -> float:
    field = get_field(discriminant)
    if which == "coprime":
        return _log_product(field, prime_bound, lambda q: np.log1p(-2.0 / q ** 2))
    if which == "all_divide_k":
        return _log_product(field, prime_bound, lambda q: np.log1p(-2.0 / q ** 2 + 1.0 / q ** 3))
    if which == "mirsky_extra":
        return _log_product(field, prime_bound, lambda q: np.log1p(1.0 / (q * (q ** 2 - 2.0))))
    if which == "limit_extra":
        return _log_product(field, prime_bound, lambda q: np.log1p(1.0 / (q ** 2 * (q ** 2 - 2.0))))
    raise ValueError(which)


#region ζ_K(2)

def zeta_K_2(field: Field, tol: float = 1e-10) -> ZetaValue:
    """
    ζ_K(2) = ζ(2)·L(2, χ_D).

    Ряд L(2, χ_D) обрезается на M членах; по Абелю хвост не больше
    |D|/(M+1)², так как частичные суммы χ_D ограничены |D|/2.

    :raises InvalidTolerance: tol ≤ 0
    """
    if not tol > 0:
        raise InvalidTolerance(f"Точность должна быть положительной, получено {tol}")

    modulus = field.abs_disc
    terms = max(int(math.ceil(math.sqrt(ZETA_2 * modulus / tol))), modulus)
    table = chi_table(field.discriminant).astype(np.float64)

    total = 0.0
    # от малых членов к большим
    for stop in range(terms, 0, -ZETA_CHUNK):
        start = max(stop - ZETA_CHUNK, 0) + 1
        n = np.arange(start, stop + 1, dtype=np.int64)
        total += float(np.sum(table[n % modulus] / n.astype(np.float64) ** 2))

    error = ZETA_2 * modulus / (terms + 1) ** 2
    logger.debug(f"[zeta_K_2] {field.name}: {terms} членов, оценка ошибки {error:.3e}")
    return ZetaValue(value=ZETA_2 * total, error_bound=error, terms=terms)

#endregion


#region Константы Мертенса и Мирского

def mertens_constant_c_m(m: AlgInt) -> ExactConstant:
    """c_𝔪 = N(𝔪) ∏_{𝔭|𝔪} (1 + 1/N𝔭)."""
    if not m:
        raise ZeroElement("𝔪 должен быть ненулевым")
    value = Fraction(m.norm())
    for q in prime_ideal_norms(factor(m)).values():
        value *= 1 + Fraction(1, q)
    return ExactConstant(exact=value, value=float(value))


def local_factor(q: int, divides_m: bool, divides_k: bool) -> Fraction:
    """
    Локальный множитель c_{𝔪,k} при простом 𝔭 нормы q.

    (𝔭, 𝔪) = 𝔭 при 𝔭 | 𝔪, иначе 𝒪_K; условие (𝔭, 𝔪) | k выполнено всегда,
    когда 𝔭 ∤ 𝔪, и равносильно 𝔭 | k, когда 𝔭 | 𝔪.
    """
    g = Fraction(q if divides_m else 1)
    q2 = Fraction(q * q)
    condition = (not divides_m) or divides_k
    first = 1 - g / q2 if condition else Fraction(1)
    kappa = 1 / (1 - g / q2) if condition else Fraction(1)
    kappa_prime = 1 - Fraction(1, q) if divides_k else Fraction(1)
    return first * (1 - kappa * kappa_prime * g / q2)


def _special_primes(m: AlgInt, k: AlgInt, prime_bound: int) -> Tuple[Dict[tuple, int], Dict[tuple, int]]:
    m_primes = prime_ideal_norms(factor(m))
    k_primes = prime_ideal_norms(factor(k)) if k else {}

    relevant = m.norm() * (k.norm() if k else 1)
    largest = max(factorint(relevant), default=1)
    if largest > prime_bound:
        raise BoundTooSmall(
            f"prime_bound={prime_bound} меньше наибольшего простого делителя N(m)·N(k) = {largest}"
        )
    return m_primes, k_primes


def mirsky_constant_c_mk(m: AlgInt, k: AlgInt, prime_bound: int = DEFAULT_PRIME_BOUND) -> EulerProduct:
    """
    c_{𝔪,k} в общем виде через локальные множители.

    Для k = 0 нулевой идеал делится на любой 𝔭.

    :raises ZeroElement: m = 0
    :raises BoundTooSmall: prime_bound меньше простых делителей N(m)·N(k)
    """
    if not m:
        raise ZeroElement("𝔪 должен быть ненулевым")
    _check_bound(prime_bound)
    return _mirsky_cached(m.field, m.coords, k.coords, prime_bound)


@lru_cache(maxsize=4096)
def _mirsky_cached(field: Field, m_coords: tuple, k_coords: tuple, prime_bound: int) -> EulerProduct:
    m = AlgInt(*m_coords, field)
    k = AlgInt(*k_coords, field)
    m_primes, k_primes = _special_primes(m, k, prime_bound)
    k_is_zero = not k

    generic_kind = "all_divide_k" if k_is_zero else "coprime"
    log_value = _generic_log(field.discriminant, prime_bound, generic_kind)

    correction = Fraction(1, m.norm())
    for key in set(m_primes) | set(k_primes):
        q = m_primes.get(key, k_primes.get(key))
        divides_k = k_is_zero or key in k_primes
        generic = local_factor(q, False, k_is_zero)
        correction *= local_factor(q, key in m_primes, divides_k) / generic

    value = float(correction) * math.exp(log_value)
    return EulerProduct(value=value, tail_bound=tail_bound(prime_bound), prime_bound=prime_bound)


def mirsky_constant_unit_ideal(k: AlgInt, prime_bound: int = DEFAULT_PRIME_BOUND) -> EulerProduct:
    """
    c_{𝒪_K,k} = ∏_𝔭 (1 − 2/N𝔭²) ∏_{𝔭|k} (1 + 1/(N𝔭(N𝔭² − 2))).
    """
    _check_bound(prime_bound)
    field = k.field
    log_value = _generic_log(field.discriminant, prime_bound, "coprime")
    if not k:
        log_value += _generic_log(field.discriminant, prime_bound, "mirsky_extra")
        value = math.exp(log_value)
    else:
        largest = max(factorint(k.norm()), default=1)
        if largest > prime_bound:
            raise BoundTooSmall(f"prime_bound={prime_bound} меньше простого делителя N(k) = {largest}")
        extra = Fraction(1)
        for q in prime_ideal_norms(factor(k)).values():
            extra *= 1 + Fraction(1, q * (q * q - 2))
        value = float(extra) * math.exp(log_value)
    return EulerProduct(value=value, tail_bound=tail_bound(prime_bound), prime_bound=prime_bound)

#endregion


#region Предельные константы

def limit_constant(field: Field, prime_bound: int = DEFAULT_PRIME_BOUND) -> EulerProduct:
    """(π/|D|) ∏_𝔭 (1 − 2/N𝔭²)(1 + 1/(N𝔭²(N𝔭² − 2)))."""
    _check_bound(prime_bound)
    log_value = (
        _generic_log(field.discriminant, prime_bound, "coprime")
        + _generic_log(field.discriminant, prime_bound, "limit_extra")
    )
    value = math.pi / field.abs_disc * math.exp(log_value)
    logger.info(f"[limit_constant] {field.name}: {value:.6f} (prime_bound={prime_bound})")
    return EulerProduct(value=value, tail_bound=tail_bound(prime_bound), prime_bound=prime_bound)


def partial_sum_constant(field: Field, prime_bound: int = DEFAULT_PRIME_BOUND) -> EulerProduct:
    """C₁ = (2π/(|𝒪_K^×|√|D|)) ∏_𝔭 (1 + 1/(N𝔭²(N𝔭² − 2)))."""
    _check_bound(prime_bound)
    log_value = _generic_log(field.discriminant, prime_bound, "limit_extra")
    value = 2 * math.pi / (field.unit_count * math.sqrt(field.abs_disc)) * math.exp(log_value)
    return EulerProduct(value=value, tail_bound=tail_bound(prime_bound), prime_bound=prime_bound)


def ideal_family_renormalizer(field: Field, m: AlgInt, norm_horizon: float) -> float:
    """
    4π²N′²/(|D| N(𝔪)²): квадрат числа элементов 𝔪 с 0 < N ≤ N′ в главном члене.
    """
    if not m:
        raise ZeroElement("𝔪 должен быть ненулевым")
    return 4 * math.pi ** 2 * norm_horizon ** 2 / (field.abs_disc * m.norm() ** 2)

#endregion
