import math

import pytest

from services.arithmetic.primes import factor, prime_ideal_norms
from services.errors import ValidationFailure, ZeroElement
from services.lattices.models import Sector
from services.sums.counting import ideal_count, ideal_weight, prop65_partial_sum
from services.sums.sectorial import mertens_sum, mirsky_sum

PRIME_BOUND = 10_000


class TestMertens:
    def test_units(self, qi, gi, full_sector):
        report = mertens_sum(qi, gi(1), full_sector, 1)
        assert report.exact == 4
        assert report.brute == 4.0

    def test_sector_additivity(self, qi, gi):
        full = Sector(direction=1 + 0j, aperture=2 * math.pi, radius=0.0)
        first = Sector(direction=1 + 0j, aperture=math.pi / 3, radius=0.0)
        second = Sector(direction=-1 + 0j, aperture=5 * math.pi / 3, radius=0.0)
        x = 40
        total = mertens_sum(qi, gi(1), full, x).exact
        assert mertens_sum(qi, gi(1), first, x).exact + mertens_sum(qi, gi(1), second, x).exact == total

    def test_full_sector_ratio(self, qi, gi, full_sector):
        assert 0.97 <= mertens_sum(qi, gi(1), full_sector, 300).ratio <= 1.03

    @pytest.mark.parametrize("m", [(1, 0), (1, 1)])
    def test_narrow_sector_ratio(self, qi, gi, m):
        sector = Sector(direction=1 + 0j, aperture=math.pi / 3, radius=0.0)
        assert 0.95 <= mertens_sum(qi, gi(*m), sector, 300).ratio <= 1.05

    def test_ideal_constant_is_reported(self, qi, gi, full_sector):
        assert mertens_sum(qi, gi(1, 1), full_sector, 10).extra["c_m"] == 3

    def test_small_radius(self, qi, gi, full_sector):
        with pytest.raises(ValidationFailure):
            mertens_sum(qi, gi(1), full_sector, 0.5)

    def test_zero_ideal(self, qi, gi, full_sector):
        with pytest.raises(ZeroElement):
            mertens_sum(qi, gi(0), full_sector, 10)


class TestMirsky:
    def test_units_shift_one(self, qi, gi, full_sector):
        # 1 + 1 = 2 дает φ = 2, −1 + 1 = 0 отбрасывается, ±i + 1 дают по 1
        report = mirsky_sum(qi, gi(1), gi(1), full_sector, 1, PRIME_BOUND)
        assert report.exact == 4

    def test_zero_shift(self, qi, gi, full_sector):
        assert mirsky_sum(qi, gi(1), gi(0), full_sector, 1, PRIME_BOUND).exact == 4

    @pytest.mark.parametrize("k", [(1, 0), (1, 1), (3, 0)])
    def test_ratio(self, qi, gi, full_sector, k):
        report = mirsky_sum(qi, gi(1), gi(*k), full_sector, 200, PRIME_BOUND)
        assert 0.95 <= report.ratio <= 1.05

    def test_unit_ideal_constant_is_reported(self, qi, gi, full_sector):
        report = mirsky_sum(qi, gi(1), gi(1, 1), full_sector, 5, PRIME_BOUND)
        assert report.extra["c_unit_ideal"] == pytest.approx(report.extra["c_mk"], rel=1e-9)
        assert "c_unit_ideal" not in mirsky_sum(qi, gi(1, 1), gi(1), full_sector, 5, PRIME_BOUND).extra

    def test_rotation_invariant_at_full_aperture(self, qi, gi):
        a = Sector(direction=1 + 0j, aperture=2 * math.pi, radius=0.0)
        b = Sector(direction=3 + 1j, aperture=2 * math.pi, radius=0.0)
        assert mirsky_sum(qi, gi(1), gi(2, 1), a, 30, PRIME_BOUND).exact == \
            mirsky_sum(qi, gi(1), gi(2, 1), b, 30, PRIME_BOUND).exact


class TestIdealCount:
    @pytest.mark.parametrize("y, count", [(1, 1), (2, 2), (4, 3), (5, 5)])
    def test_small(self, qi, y, count):
        assert ideal_count(qi, y).exact == count

    def test_asymptotic(self, qi):
        report = ideal_count(qi, 100_000)
        assert report.predicted == pytest.approx(math.pi / 2 * 100_000)
        assert report.ratio == pytest.approx(1.0, abs=0.01)

    def test_eisenstein(self, q3):
        assert ideal_count(q3, 50_000).ratio == pytest.approx(1.0, abs=0.01)


class TestProp65:
    def test_unit_ideal(self, qi):
        assert prop65_partial_sum(qi, 1, PRIME_BOUND).brute == 1.0

    def test_weight(self):
        assert ideal_weight([]) == 1.0
        assert ideal_weight([2, 5]) == pytest.approx((1 + 1 / 4) * (1 + 1 / 115))

    def test_weight_ignores_multiplicity(self, gi):
        assert ideal_weight(prime_ideal_norms(factor(gi(4))).values()) == pytest.approx(1.25)

    def test_small_sum(self, qi):
        # идеалы нормы ≤ 2: 𝒪_K и (1 + i)
        assert prop65_partial_sum(qi, 2, PRIME_BOUND).brute == pytest.approx(1 + 8 * (1 + 1 / 4))
