import logging
import math
from fractions import Fraction
from typing import Dict

import numpy as np
import sympy

from config import DEFAULT_PRIME_BOUND
from services.arithmetic.constants import partial_sum_constant
from services.arithmetic.ideals import elements_up_to_norm, ideal_representatives
from services.arithmetic.models import Field
from services.arithmetic.primes import factor, prime_ideal_norms
from services.correlation.models import AtomMeasure1D
from services.errors import ValidationFailure
from services.lattices.grid import enumerate_disk, make_grid
from services.sums.models import SumReport

logger = logging.getLogger(__name__)


def r2d_counts(d: int, N: int) -> Dict[int, int]:
    """r_{2,d}(n) = #{(x, y) : x² + d·y² = n} для 0 < n ≤ N²."""
    if d < 1 or N < 1:
        raise ValidationFailure(f"Нужны d ≥ 1 и N ≥ 1, получено d={d}, N={N}")
    grid = make_grid((1, 0), (0, sympy.sqrt(d)))
    points = enumerate_disk(grid, r2=Fraction(N * N), exclude_zero=True)
    values, counts = np.unique(points.norm_num, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def r2d_pair_measure(d: int, N: int) -> AtomMeasure1D:
    """
    Σ_{0 < m, n ≤ N²} r_{2,d}(m) r_{2,d}(n) Δ_{ln m − ln n}, ключ: дробь m/n.
    """
    counts = r2d_counts(d, N)
    atoms: Dict[Fraction, Fraction] = {}
    for n, rn in counts.items():
        for m, rm in counts.items():
            key = Fraction(m, n)
            atoms[key] = atoms.get(key, Fraction(0)) + rm * rn
    return AtomMeasure1D(atoms=atoms)


def ideal_count(field: Field, y: float) -> SumReport:
    """Число идеалов нормы ≤ y против 2πy / (|𝒪_K^×|√|D|)."""
    if y < 1:
        raise ValidationFailure(f"y должно быть ≥ 1, получено {y}")
    xs, _ = elements_up_to_norm(field, int(math.floor(y)))
    elements = int(xs.size)
    if elements % field.unit_count:
        raise RuntimeError("[ideal_count] Число элементов не делится на число единиц")
    count = elements // field.unit_count
    predicted = 2 * math.pi * y / (field.unit_count * math.sqrt(field.abs_disc))
    return SumReport(
        brute=float(count),
        exact=count,
        predicted=predicted,
        inputs={"field": str(field.discriminant), "y": repr(y)},
    )


def ideal_weight(norms_of_primes) -> float:
    """f(𝔞) = ∏_{𝔭|𝔞} (1 + 1/(N𝔭(N𝔭² − 2)))."""
    value = 1.0
    for q in norms_of_primes:
        value *= 1 + 1 / (q * (q * q - 2))
    return value


def prop65_partial_sum(field: Field, x: float, prime_bound: int = DEFAULT_PRIME_BOUND) -> SumReport:
    """Σ_{N(𝔞) ≤ x} N(𝔞)³ f(𝔞) против (C₁/4)x⁴."""
    if x < 1:
        raise ValidationFailure(f"x должно быть ≥ 1, получено {x}")
    terms = []
    for a in ideal_representatives(field, x):
        primes = prime_ideal_norms(factor(a)).values()
        terms.append(float(a.norm()) ** 3 * ideal_weight(primes))
    total = math.fsum(terms)
    c1 = partial_sum_constant(field, prime_bound)
    predicted = c1.value / 4 * x ** 4
    logger.info(f"[prop65_partial_sum] {field.name}, x={x}: {len(terms)} идеалов")
    return SumReport(
        brute=total,
        predicted=predicted,
        inputs={"field": str(field.discriminant), "x": repr(x), "prime_bound": str(prime_bound)},
        extra={"C1": c1.value, "tail_bound": c1.tail_bound},
    )
