import logging
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from services.correlation.models import AtomMeasure1D, Hist1D, WeightedLogSet, bin_half_open

logger = logging.getLogger(__name__)


def weight_by_norm(logset: WeightedLogSet) -> Tuple[np.ndarray, list]:
    """
    Суммарный вес точек каждой нормы: (различные числители норм, веса как int).
    """
    norms, inverse = np.unique(logset.points.norm_num, return_inverse=True)
    totals = [0] * len(norms)
    for position, w in zip(inverse, logset.weights):
        totals[int(position)] += int(w)
    return norms, totals


def pushforward_2re(logset: WeightedLogSet, diagonal_included: bool = False) -> AtomMeasure1D:
    """
    Образ меры пар при 2Re: атом log y − log x переходит в ln N(y) − ln N(x).

    Ключ атома: несократимая дробь N(y)/N(x), масса точная.
    Число пар различных норм квадратично, поэтому функция для небольших N.
    """
    norms, totals = weight_by_norm(logset)
    atoms: Dict[Fraction, Fraction] = {}
    for n, wn in zip(norms, totals):
        for n2, wn2 in zip(norms, totals):
            key = Fraction(int(n2), int(n))
            atoms[key] = atoms.get(key, Fraction(0)) + wn * wn2
    if not diagonal_included and len(logset):
        atoms[Fraction(1)] -= logset.sum_sq_weights
        if atoms[Fraction(1)] == 0:
            del atoms[Fraction(1)]
    logger.debug(f"[pushforward_2re] {len(norms)} норм, {len(atoms)} атомов")
    return AtomMeasure1D(atoms=atoms)


def pushforward_histogram(
    logset: WeightedLogSet,
    half_width: float,
    bins: int,
    diagonal_included: bool = False,
    probability: bool = True,
) -> Hist1D:
    """Бинированный образ 2Re на [−T, T) без перебора точных ключей."""
    norms, totals = weight_by_norm(logset)
    logs = np.log(norms.astype(np.float64))
    weights = np.array(totals, dtype=np.float64)
    edges = np.linspace(-half_width, half_width, bins + 1)

    masses = np.zeros(bins)
    for log_n, w in zip(logs, weights):
        part = bin_half_open(logs - log_n, edges, w * weights)
        masses += part
    total = float(logset.total_raw_mass(diagonal_included))
    if not diagonal_included:
        zero_bin = np.searchsorted(edges, 0.0, side="right") - 1
        if 0 <= zero_bin < bins:
            masses[zero_bin] -= float(logset.sum_sq_weights)
    if probability and total > 0:
        masses = masses / total
    return Hist1D(edges=edges, masses=masses, total_mass=total)
