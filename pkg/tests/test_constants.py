import math
from fractions import Fraction

import pytest
from sympy import primerange

from services.arithmetic.AlgInt import AlgInt
from services.arithmetic.constants import (
    ideal_family_renormalizer,
    limit_constant,
    local_factor,
    mertens_constant_c_m,
    mirsky_constant_c_mk,
    mirsky_constant_unit_ideal,
    partial_sum_constant,
    tail_bound,
    zeta_K_2,
)
from services.arithmetic.fields import get_field, kronecker
from services.errors import BoundTooSmall, InvalidTolerance, ValidationFailure, ZeroElement

from conftest import ALL_DISCRIMINANTS


class TestZeta:
    def test_gaussian(self, qi):
        value = zeta_K_2(qi, 1e-6)
        assert 1.50 < value.value < 1.52
        assert value.error_bound <= 1e-6

    def test_eisenstein(self, q3):
        assert 1.28 < zeta_K_2(q3, 1e-6).value < 1.30

    def test_tolerance_is_honoured(self, qi):
        coarse = zeta_K_2(qi, 1e-4)
        fine = zeta_K_2(qi, 1e-10)
        assert abs(coarse.value - fine.value) <= coarse.error_bound + fine.error_bound

    def test_invalid_tolerance(self, qi):
        with pytest.raises(InvalidTolerance):
            zeta_K_2(qi, 0)


class TestMertensConstant:
    @pytest.mark.parametrize("coords, expected", [((1, 0), 1), ((0, 1), 1), ((1, 1), 3), ((2, 0), 6)])
    def test_values(self, gi, coords, expected):
        assert mertens_constant_c_m(gi(*coords)).exact == expected

    def test_zero(self, gi):
        with pytest.raises(ZeroElement):
            mertens_constant_c_m(gi(0))


class TestLocalFactor:
    @pytest.mark.parametrize("divides_m, divides_k, expected", [
        (False, False, 1 - Fraction(2, 25)),
        (False, True, 1 - Fraction(2, 25) + Fraction(1, 125)),
        (True, False, 1 - Fraction(1, 5)),
        (True, True, (1 - Fraction(1, 5)) ** 2),
    ])
    def test_cases(self, divides_m, divides_k, expected):
        assert local_factor(5, divides_m, divides_k) == expected


class TestMirskyConstant:
    PRIME_BOUND = 10_000

    def test_coprime_shift(self, gi):
        value = mirsky_constant_c_mk(gi(1), gi(1), self.PRIME_BOUND).value
        assert 0 < value < 1

    @pytest.mark.parametrize("k", [(1, 0), (1, 1), (3, 0), (2, 1), (0, 0)])
    def test_general_matches_unit_ideal_form(self, gi, k):
        general = mirsky_constant_c_mk(gi(1), gi(*k), self.PRIME_BOUND).value
        unit = mirsky_constant_unit_ideal(gi(*k), self.PRIME_BOUND).value
        assert general == pytest.approx(unit, rel=1e-9)

    @pytest.mark.parametrize("prime_bound", [10_000, pytest.param(1_000_000, marks=pytest.mark.slow)])
    @pytest.mark.parametrize("discriminant, k, k_norms", [
        (-4, (1, 0), []),
        (-4, (1, 1), [2]),
        (-4, (3, 0), [9]),
        (-4, (2, 1), [5]),
        (-4, (5, 0), [5, 5]),
        (-3, (2, 0), [4]),
        (-7, (1, 1), [2]),
    ])
    def test_direct_euler_product(self, discriminant, k, k_norms, prime_bound):
        """Произведение по рациональным простым p ≤ B с разбором по типу разложения."""
        field = get_field(discriminant)
        expected = 1.0
        for p in primerange(2, prime_bound + 1):
            symbol = kronecker(discriminant, p)
            if symbol == 1:
                expected *= (1 - 2 / p ** 2) ** 2
            elif symbol == -1:
                expected *= 1 - 2 / p ** 4
            else:
                expected *= 1 - 2 / p ** 2
        for q in k_norms:
            expected *= 1 + 1 / (q * (q * q - 2))

        shift = AlgInt(*k, field)
        assert mirsky_constant_unit_ideal(shift, prime_bound).value == pytest.approx(expected, rel=1e-9)
        assert mirsky_constant_c_mk(AlgInt(1, 0, field), shift, prime_bound).value == pytest.approx(expected, rel=1e-9)

    def test_depends_on_associate_class_only(self, gi):
        a = mirsky_constant_c_mk(gi(1, 1), gi(2, 1), self.PRIME_BOUND).value
        b = mirsky_constant_c_mk(gi(1, 1), gi(-1, 2), self.PRIME_BOUND).value
        assert a == b

    def test_ideal_scales_by_norm(self, gi):
        """𝔪 = (3) взаимно прост с k = 1: множитель (1 − 1/9)/(1 − 2/81) и 1/N(𝔪)."""
        base = mirsky_constant_c_mk(gi(1), gi(1), self.PRIME_BOUND).value
        value = mirsky_constant_c_mk(gi(3), gi(1), self.PRIME_BOUND).value
        assert value == pytest.approx(base / 9 * (1 - 1 / 9) / (1 - 2 / 81), rel=1e-12)

    def test_bound_too_small(self, gi):
        with pytest.raises(BoundTooSmall):
            mirsky_constant_c_mk(gi(1), gi(7), 5)

    def test_zero_ideal(self, gi):
        with pytest.raises(ZeroElement):
            mirsky_constant_c_mk(gi(0), gi(1), self.PRIME_BOUND)

    def test_invalid_bound(self, gi):
        with pytest.raises(ValidationFailure):
            mirsky_constant_unit_ideal(gi(1), 1)


class TestLimitConstants:
    def test_gaussian(self, qi):
        assert limit_constant(qi, 1_000_000).value == pytest.approx(0.346, abs=0.002)

    def test_eisenstein(self, q3):
        assert limit_constant(q3, 1_000_000).value == pytest.approx(0.634, abs=0.002)

    @pytest.mark.parametrize("discriminant", ALL_DISCRIMINANTS)
    def test_below_trivial_bound(self, discriminant):
        field = get_field(discriminant)
        result = limit_constant(field, 1000)
        assert 0 < result.value < math.pi / field.abs_disc
        assert result.tail_bound == tail_bound(1000)

    def test_partial_sum_constant(self, qi):
        value = partial_sum_constant(qi, 10_000).value
        assert math.pi / 4 < value < math.pi / 4 * 1.2

    def test_truncation_converges(self, qi):
        coarse = limit_constant(qi, 1000)
        fine = limit_constant(qi, 100_000)
        assert abs(math.log(coarse.value) - math.log(fine.value)) <= coarse.tail_bound

    def test_family_renormalizer(self, qi):
        assert ideal_family_renormalizer(qi, AlgInt(1, 0, qi), 10) == pytest.approx(100 * math.pi ** 2)
