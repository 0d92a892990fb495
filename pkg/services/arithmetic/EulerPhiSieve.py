import logging

import numpy as np

from services.arithmetic.fields import chi_table
from services.arithmetic.models import Field
from services.arithmetic.sieve import smallest_prime_factor
from services.errors import ZeroElement

logger = logging.getLogger(__name__)


class EulerPhiSieve:
    """
    Векторное вычисление φ_K для массивов элементов.

    Норма раскладывается по таблице наименьших простых делителей,
    тип каждого простого p берется из χ_D(p mod |D|). Для расщепляющегося p
    оба простых идеала над p делят a тогда и только тогда, когда p делит
    обе координаты a.
    """

    def __init__(self, field: Field, max_norm: int):
        self.field = field
        self.max_norm = int(max_norm)
        self.spf = smallest_prime_factor(max(self.max_norm, 2))
        self.chi = chi_table(field.discriminant)
        logger.debug(f"[EulerPhiSieve] {field.name}: решето до {self.max_norm}")

    def norms(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        f = self.field
        return xs * xs + f.trace * xs * ys + f.norm_omega * ys * ys

    def phi(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """
        φ_K(x + yω) для массивов координат.

        :raises ZeroElement: если среди элементов есть ноль
        :raises ValueError: если норма превышает границу решета
        """
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        norms = self.norms(xs, ys)
        if np.any(norms == 0):
            raise ZeroElement("φ_K не определена в нуле")
        if norms.size and norms.max() > self.max_norm:
            raise ValueError(f"Норма {int(norms.max())} больше границы решета {self.max_norm}")

        phi = norms.copy()
        rest = norms.copy()
        modulus = self.field.abs_disc
        while True:
            active = np.nonzero(rest > 1)[0]
            if active.size == 0:
                break
            p = self.spf[rest[active]]

            # снимаем все степени p с остатка
            sub_rest = rest[active]
            divisible = np.ones(active.size, dtype=bool)
            while divisible.any():
                sub_rest = np.where(divisible, sub_rest // p, sub_rest)
                divisible = (sub_rest % p) == 0
            rest[active] = sub_rest

            kind = self.chi[p % modulus]
            sub_phi = phi[active]
            inert = kind == -1
            sub_phi = np.where(inert, sub_phi // (p * p) * (p * p - 1), sub_phi // p * (p - 1))
            both = (kind == 1) & (xs[active] % p == 0) & (ys[active] % p == 0)
            sub_phi = np.where(both, sub_phi // p * (p - 1), sub_phi)
            phi[active] = sub_phi
        return phi
