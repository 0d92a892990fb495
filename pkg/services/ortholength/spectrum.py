"""
Спектр ортодлин от окрестности каспа до себя в Γ₀[𝔟]\\ℍ³.

Длины равны ln N(q) для q ∈ 𝔟 − {0}; кратность класса длины равна
(2/|𝒪_K^×|)·Σ φ_K(q) по q этой нормы. Геометрия используется только
в переборном оракуле для малых N.
"""
import logging
from fractions import Fraction
from typing import Dict

import numpy as np

from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.ideals import count_invertible_residues
from services.arithmetic.models import Field
from services.correlation.logsets import build_logset
from services.correlation.models import AtomMeasure1D, Hist1D, WeightKind, bin_half_open
from services.correlation.pushforward import pushforward_2re
from services.errors import ValidationFailure, ZeroElement
from services.ortholength.models import OrthoEntry, OrthoSpectrum, Prop71Report

logger = logging.getLogger(__name__)


def ortho_spectrum(field: Field, b: AlgInt, N: int) -> OrthoSpectrum:
    """
    :raises ZeroElement: b = 0
    """
    if not b:
        raise ZeroElement("Идеал 𝔟 должен быть ненулевым")
    if N < 1:
        raise ValidationFailure(f"N должно быть ≥ 1, получено {N}")
    logset = build_logset(b, N, WeightKind.EULER)
    xs, ys = logset.points.alg[:, 0], logset.points.alg[:, 1]
    norms = xs * xs + field.trace * xs * ys + field.norm_omega * ys * ys

    sums: Dict[int, int] = {}
    for n, w in zip(norms, logset.weights):
        sums[int(n)] = sums.get(int(n), 0) + int(w)
    entries = [OrthoEntry(norm=n, numerator=2 * s) for n, s in sorted(sums.items())]
    logger.info(f"[ortho_spectrum] {field.name}, 𝔟=({b.x},{b.y}), N={N}: {len(entries)} длин")
    return OrthoSpectrum(
        discriminant=field.discriminant,
        generator=b.coords,
        horizon=N,
        unit_count=field.unit_count,
        entries=entries,
    )


def ortho_pair_measure(spec: OrthoSpectrum) -> AtomMeasure1D:
    """Атомы в ln(n′/n) с массой ω(ℓ)ω(ℓ′), диагональ включена."""
    w2 = spec.unit_count ** 2
    atoms: Dict[Fraction, Fraction] = {}
    for e in spec.entries:
        for e2 in spec.entries:
            key = Fraction(e2.norm, e.norm)
            atoms[key] = atoms.get(key, Fraction(0)) + Fraction(e.numerator * e2.numerator, w2)
    return AtomMeasure1D(atoms=atoms)


def verify_prop71(field: Field, b: AlgInt, N: int) -> Prop71Report:
    """
    Мера пар спектра против (4/|𝒪_K^×|²)·(2Re)_* меры эйлерово-взвешенного
    множества 𝔟 с диагональю; сравнение точное, по атомам.
    """
    left = ortho_pair_measure(ortho_spectrum(field, b, N)).atoms
    logset = build_logset(b, N, WeightKind.EULER)
    right = pushforward_2re(logset, diagonal_included=True).scaled(Fraction(4, field.unit_count ** 2)).atoms

    keys = set(left) | set(right)
    diffs = [abs(left.get(k, Fraction(0)) - right.get(k, Fraction(0))) for k in keys]
    mismatched = sum(1 for d in diffs if d != 0)
    report = Prop71Report(
        equal=mismatched == 0,
        atoms_left=len(left),
        atoms_right=len(right),
        mismatched=mismatched,
        max_discrepancy=float(max(diffs, default=Fraction(0))),
    )
    logger.info(f"[verify_prop71] {field.name}, N={N}: равенство={report.equal}")
    return report


def ortho_histogram(spec: OrthoSpectrum, half_width: float, bins: int) -> Hist1D:
    """Вероятностная гистограмма меры пар на [−T, T)."""
    norms = np.array([e.norm for e in spec.entries], dtype=np.float64)
    weights = np.array([e.numerator for e in spec.entries], dtype=np.float64)
    logs = np.log(norms)
    edges = np.linspace(-half_width, half_width, bins + 1)
    masses = np.zeros(bins)
    for log_n, w in zip(logs, weights):
        part = bin_half_open(logs - log_n, edges, w * weights)
        masses += part
    total = float(weights.sum()) ** 2
    if total > 0:
        masses = masses / total
    return Hist1D(edges=edges, masses=masses, total_mass=total / spec.unit_count ** 2)


def ortho_multiplicity_oracle(field: Field, b: AlgInt, N: int) -> Dict[int, Fraction]:
    """
    Кратности по нормам из прямого подсчета обратимых вычетов p mod q.

    Предназначено для N ≤ 3.
    """
    logset = build_logset(b, N)
    result: Dict[int, Fraction] = {}
    for x, y in logset.points.alg:
        q = AlgInt(int(x), int(y), field)
        n = q.norm()
        result[n] = result.get(n, Fraction(0)) + Fraction(2 * count_invertible_residues(q), field.unit_count)
    return result
