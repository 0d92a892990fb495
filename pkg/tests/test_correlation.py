import math

import numpy as np
import pytest

from services.arithmetic.AlgInt import AlgInt
from services.correlation.PairHistogrammer import PairHistogrammer, wrap_angle
from services.correlation.compare import annulus_statistics, compare, mass_inside, theory_histogram
from services.correlation.densities import (
    PoissonianDensity,
    ThetaDensity,
    UnscaledDensity,
    WeightedLinearDensity,
    density_poissonian,
    density_real,
    density_theta_infty,
    density_theta_n,
    density_unscaled,
    density_unscaled_n4,
)
from services.correlation.logsets import build_logset
from services.correlation.models import (
    GeometryKind,
    Hist2D,
    HistGeometry,
    RegimeKind,
    RenormKind,
    RenormSpec,
    ScalingSpec,
    WeightKind,
)
from services.errors import ComputationFailure, GeometryMismatch, ValidationFailure, WeightMismatch, WindowTooLarge
from services.lattices.grid import make_grid, scale_grid

ONE = ScalingSpec.parse("one")
LINEAR = ScalingSpec.parse("power:1")


def cylinder(extent: float = 2.0, n1: int = 4, n2: int = 4) -> HistGeometry:
    return HistGeometry(kind=GeometryKind.CYLINDER, extent=extent, n1=n1, n2=n2)


def plane(extent: float, n: int) -> HistGeometry:
    return HistGeometry(kind=GeometryKind.PLANE, extent=extent, n1=n, n2=n)


def polar(extent: float, n1: int, n2: int) -> HistGeometry:
    return HistGeometry(kind=GeometryKind.POLAR, extent=extent, n1=n1, n2=n2)


class TestScaling:
    @pytest.mark.parametrize("text, kind, lam", [
        ("one", RegimeKind.UNSCALED, None),
        ("power:0", RegimeKind.UNSCALED, None),
        ("power:1/2", RegimeKind.ZERO, None),
        ("n-over-log", RegimeKind.ZERO, None),
        ("power:1", RegimeKind.FINITE, 1.0),
        ("power:1:2", RegimeKind.FINITE, 2.0),
        ("power:3/2", RegimeKind.INFINITE, None),
    ])
    def test_regimes(self, text, kind, lam):
        regime = ScalingSpec.parse(text).regime
        assert regime.kind == kind
        assert regime.lam == lam

    def test_psi(self):
        assert ScalingSpec.parse("power:1/2").psi(100) == pytest.approx(10.0)
        assert ScalingSpec.parse("power:1:2").psi(30) == pytest.approx(60.0)
        assert ScalingSpec.parse("n-over-log").psi(100) == pytest.approx(100 / math.log(100))

    @pytest.mark.parametrize("text", ["bogus", "power:", "power:x"])
    def test_parse_errors(self, text):
        with pytest.raises(ValidationFailure):
            ScalingSpec.parse(text)


class TestRenorm:
    @pytest.mark.parametrize("scaling, weights, kind", [
        ("one", WeightKind.UNIT, RenormKind.PROBABILITY),
        ("power:1/2", WeightKind.UNIT, RenormKind.BY_N4_OVER_PSI2),
        ("power:1", WeightKind.UNIT, RenormKind.BY_PSI2),
        ("power:1", WeightKind.EULER, RenormKind.BY_N6),
        ("power:2", WeightKind.UNIT, RenormKind.BY_PSI),
    ])
    def test_defaults(self, scaling, weights, kind):
        assert RenormSpec.default_for(ScalingSpec.parse(scaling).regime, weights).kind == kind

    def test_divisors(self):
        assert RenormSpec.parse("n4-psi2").divisor(150, math.sqrt(150), 0) == pytest.approx(150 ** 3)
        assert RenormSpec.parse("psi2").divisor(60, 60.0, 0) == pytest.approx(3600)
        assert RenormSpec.parse("explicit:2.5").divisor(1, 1.0, 0) == 2.5

    def test_probability_of_empty_set(self):
        with pytest.raises(ComputationFailure):
            RenormSpec.parse("probability").divisor(1, 1.0, 0)

    def test_unknown(self):
        with pytest.raises(ValidationFailure):
            RenormSpec.parse("n5")


class TestGeometry:
    def test_polar_locate(self):
        g = polar(2.0, 2, 4)
        idx = g.locate(np.array([0.5, -1.5, 0.0, 3.0]), np.array([0.0, 0.0, -0.5, 0.0]))
        # угол π переходит в −π: первый угловой бин
        assert idx.tolist() == [0 * 4 + 2, 1 * 4 + 0, 0 * 4 + 1, -1]

    def test_half_open_plane(self):
        g = plane(1.0, 2)
        idx = g.locate(np.array([-1.0, 1.0, 0.0]), np.array([-1.0, 0.0, 0.0]))
        assert idx.tolist() == [0, -1, 3]

    def test_bin_areas_cover_window(self):
        assert polar(3.0, 5, 7).bin_areas().sum() == pytest.approx(9 * math.pi)
        assert plane(2.0, 8).bin_areas().sum() == pytest.approx(16.0)

    def test_mismatch(self):
        with pytest.raises(GeometryMismatch):
            plane(1.0, 2).ensure_same(plane(1.0, 3))


def test_wrap_angle():
    d = np.array([math.pi, -math.pi, 1.5 * math.pi, -1.5 * math.pi, 0.25])
    assert wrap_angle(d) == pytest.approx([-math.pi, -math.pi, -0.5 * math.pi, 0.5 * math.pi, 0.25])


class TestLogSet:
    def test_unit_circle(self, gauss):
        s = build_logset(gauss, 1)
        assert len(s) == 4
        assert s.log_re == pytest.approx([0, 0, 0, 0])
        assert sorted(s.log_im) == pytest.approx([-math.pi / 2, 0, math.pi / 2, math.pi])

    def test_radius_two(self, gauss):
        assert len(build_logset(gauss, 2)) == 12

    def test_euler_weights_of_units(self, qi):
        s = build_logset(AlgInt(1, 0, qi), 1, WeightKind.EULER)
        assert s.weights.tolist() == [1, 1, 1, 1]

    def test_euler_weights(self, qi):
        s = build_logset(AlgInt(1, 0, qi), 2, WeightKind.EULER)
        by_norm = {}
        for x, y, w in zip(s.points.alg[:, 0], s.points.alg[:, 1], s.weights):
            by_norm.setdefault(int(x * x + y * y), set()).add(int(w))
        assert by_norm == {1: {1}, 2: {1}, 4: {2}}

    def test_euler_needs_ideal(self, gauss):
        with pytest.raises(WeightMismatch):
            build_logset(gauss, 2, WeightKind.EULER)

    def test_mass_accounting(self, qi):
        s = build_logset(AlgInt(1, 0, qi), 3, WeightKind.EULER)
        assert s.total_raw_mass(True) - s.total_raw_mass(False) == sum(int(w) ** 2 for w in s.weights)

    def test_shape_is_scale_free(self, gauss):
        small = build_logset(gauss, 15)
        large = build_logset(scale_grid(gauss, 3), 45)
        assert np.array_equal(small.shape_re, large.shape_re)
        assert np.array_equal(small.log_im, large.log_im)
        assert large.log_re == pytest.approx(small.log_re + math.log(3))


class TestNaive:
    def test_unit_circle_atoms(self, gauss):
        h = PairHistogrammer(build_logset(gauss, 1), ONE, cylinder(1.0, 2, 4))
        atoms = h.atoms()
        assert len(atoms) == 12
        assert all(re == 0 for _, _, re, _, _ in atoms)
        ims = sorted(im for _, _, _, im, _ in atoms)
        assert ims == pytest.approx([-math.pi] * 4 + [-math.pi / 2] * 4 + [math.pi / 2] * 4)

        hist = h.naive()
        assert hist.total_raw_mass == 12
        assert int(hist.raw.sum()) == 12
        assert hist.masses.sum() == pytest.approx(1.0)

    def test_diagonal_goes_to_origin(self, gauss):
        h = PairHistogrammer(build_logset(gauss, 1), ONE, cylinder(1.0, 2, 4), diagonal_included=True)
        hist = h.naive()
        assert hist.total_raw_mass == 16
        assert hist.raw[1, 2] == 4

    def test_full_cylinder_keeps_all_mass(self, gauss):
        hist = PairHistogrammer(build_logset(gauss, 5), ONE, cylinder(2.0, 8, 8)).naive()
        assert int(hist.raw.sum()) == hist.total_raw_mass

    def test_scale_invariance(self, gauss):
        geometry = cylinder(3.0, 12, 8)
        small = PairHistogrammer(build_logset(gauss, 15), ONE, geometry).naive()
        large = PairHistogrammer(build_logset(scale_grid(gauss, 3), 45), ONE, geometry).naive()
        assert small.total_raw_mass == large.total_raw_mass
        assert np.array_equal(small.raw, large.raw)

    def test_window_too_large(self, gauss):
        with pytest.raises(WindowTooLarge):
            PairHistogrammer(build_logset(gauss, 3), ONE, plane(5.0, 10))

    def test_workers_do_not_change_result(self, gauss):
        s = build_logset(gauss, 8)
        one = PairHistogrammer(s, ONE, cylinder(2.0, 6, 6), workers=1).naive()
        two = PairHistogrammer(s, ONE, cylinder(2.0, 6, 6), workers=2).naive()
        assert np.array_equal(one.raw, two.raw)


class TestWindowed:
    @pytest.mark.parametrize("source, scaling, N, geometry", [
        ("gauss", "power:1", 20, plane(2.0, 10)),
        ("eisenstein", "power:1", 20, polar(3.0, 6, 8)),
        ("gauss", "power:1/2", 30, plane(2.0, 10)),
        ("shifted", "power:1", 15, plane(2.0, 10)),
    ])
    def test_matches_naive(self, presets, source, scaling, N, geometry):
        if source == "shifted":
            grid = make_grid((1, 0), (0, 1), ("1/2", "1/3"))
        else:
            grid = presets.grid(source)
        h = PairHistogrammer(build_logset(grid, N), ScalingSpec.parse(scaling), geometry)
        assert h.atoms("naive") == h.atoms("windowed")
        assert np.array_equal(h.naive().raw, h.windowed().raw)

    def test_euler_weights_match_naive(self, qi):
        s = build_logset(AlgInt(1, 0, qi), 15, WeightKind.EULER)
        h = PairHistogrammer(s, LINEAR, plane(3.0, 12))
        assert h.atoms("naive") == h.atoms("windowed")
        assert np.array_equal(h.naive().raw, h.windowed().raw)

    def test_diagonal(self, gauss):
        h = PairHistogrammer(build_logset(gauss, 10), LINEAR, plane(2.0, 8), diagonal_included=True)
        assert np.array_equal(h.naive().raw, h.windowed().raw)

    def test_pair_swap_symmetry(self, gauss):
        atoms = PairHistogrammer(build_logset(gauss, 12), LINEAR, plane(2.0, 8)).atoms("windowed")
        forward = {(x, y): (re, im) for x, y, re, im, _ in atoms}
        for (x, y), (re, im) in forward.items():
            assert forward[(y, x)] == pytest.approx((-re, -im))

    @pytest.mark.parametrize("N", [30, 50, 100])
    def test_superlinear_loses_all_mass(self, gauss, N):
        hist = PairHistogrammer(build_logset(gauss, N), ScalingSpec.parse("power:3/2"), polar(5.0, 10, 16)).execute()
        assert hist.meta["method"] == "windowed"
        assert hist.total_raw_mass > 0
        assert int(hist.raw.sum()) == 0

    def test_level_repulsion(self, gauss):
        hist = PairHistogrammer(build_logset(gauss, 30), LINEAR, plane(3.0, 30)).execute()
        assert mass_inside(hist, 0.9) == 0

    def test_merge(self, gauss):
        h = PairHistogrammer(build_logset(gauss, 10), LINEAR, plane(2.0, 8))
        a, b = h.windowed(), h.windowed()
        merged = a.merge(b)
        assert np.array_equal(merged.raw, 2 * a.raw)
        assert merged.total_raw_mass == 2 * a.total_raw_mass


class TestDensities:
    def test_unscaled_at_origin(self):
        assert density_unscaled(0j, "unit") == pytest.approx(1 / (2 * math.pi))
        assert density_unscaled(0j, "euler") == pytest.approx(1 / math.pi)

    def test_unscaled_ignores_imaginary_part(self):
        d = UnscaledDensity("unit")
        assert d(0.5 + 2j) == pytest.approx(d(0.5 - 1j))

    def test_unscaled_n4(self, gauss, eisenstein):
        assert density_unscaled_n4(gauss, 0j) == pytest.approx(math.pi / 2)
        assert density_unscaled_n4(eisenstein, 1.0 + 3j) == pytest.approx(2 * math.pi / 3 * math.exp(-2))

    def test_poissonian(self, gauss, eisenstein):
        assert density_poissonian(gauss) == pytest.approx(math.pi / 2)
        assert density_poissonian(eisenstein) == pytest.approx(2 * math.pi / 3)
        assert density_poissonian(make_grid((2, 0), (3, 1))) == pytest.approx(math.pi / 8)

    def test_theta_vanishes_near_origin(self, gauss):
        assert density_theta_infty(gauss, 1.0, 0.9 + 0j) == 0
        assert density_theta_infty(gauss, 1.0, 0j) == 0

    def test_theta_first_shell(self, gauss):
        assert density_theta_infty(gauss, 1.0, 1.2 + 0j) == pytest.approx(4 / 1.2 ** 4)
        assert density_theta_infty(gauss, 1.0, 1.2j) == pytest.approx(4 / 1.2 ** 4)

    def test_theta_far_field(self, gauss):
        assert density_theta_infty(gauss, 1.0, 50 + 0j) == pytest.approx(math.pi / 2, rel=0.02)

    def test_theta_n(self, gauss):
        assert density_theta_n(gauss, 10, 20.0, 2.5 + 0j) == pytest.approx(density_theta_infty(gauss, 2.0, 2.5 + 0j))

    def test_theta_table_grows(self, gauss):
        d = ThetaDensity(gauss, 1.0)
        near = d(1.5 + 0j)
        far = d(20 + 0j)
        assert d(1.5 + 0j) == near
        assert far > 0

    def test_weighted_linear_vanishes_near_origin(self, qi):
        d = WeightedLinearDensity(qi, AlgInt(1, 0, qi), 10_000)
        assert d(0.5 + 0j) == 0

    def test_weighted_linear_far_field(self, qi):
        d = WeightedLinearDensity(qi, AlgInt(1, 0, qi), 100_000)
        assert d(30 + 0j) == pytest.approx(0.346, rel=0.15)

    @pytest.mark.parametrize("mode, expected", [("r2d", 0.5), ("ortho", 1.0)])
    def test_real(self, mode, expected):
        assert density_real(0.0, mode) == pytest.approx(expected)

    def test_real_unknown_mode(self):
        with pytest.raises(ValidationFailure):
            density_real(0.0, "other")


class TestCompare:
    def test_exact_integrals_give_zero(self, gauss):
        geometry = plane(3.0, 12)
        theory = theory_histogram(geometry, ThetaDensity(gauss, 1.0))
        assert compare(theory, ThetaDensity(gauss, 1.0)).l1 == 0

    def test_empty_against_zero_density(self, gauss):
        geometry = polar(0.9, 3, 4)
        empty = Hist2D(geometry=geometry, masses=np.zeros(geometry.shape))
        assert compare(empty, ThetaDensity(gauss, 1.0)).l1 == 0

    def test_against_histogram(self, gauss):
        geometry = plane(2.0, 4)
        theory = theory_histogram(geometry, PoissonianDensity(gauss))
        empty = Hist2D(geometry=geometry, masses=np.zeros(geometry.shape))
        report = compare(empty, theory)
        assert report.l1 == pytest.approx(math.pi / 2 * 16)
        assert report.sup == pytest.approx(math.pi / 2)

    def test_geometry_mismatch(self, gauss):
        theory = theory_histogram(plane(2.0, 4), PoissonianDensity(gauss))
        other = Hist2D(geometry=plane(2.0, 5), masses=np.zeros((5, 5)))
        with pytest.raises(GeometryMismatch):
            compare(other, theory)

    def test_annulus_of_constant_density(self, gauss):
        theory = theory_histogram(polar(5.0, 10, 16), PoissonianDensity(gauss), "midpoint")
        mean, cv = annulus_statistics(theory, 1.0, 5.0)
        assert mean == pytest.approx(math.pi / 2)
        assert cv == pytest.approx(0.0, abs=1e-9)

    def test_polar_integrals(self, gauss):
        theory = theory_histogram(polar(2.0, 4, 8), PoissonianDensity(gauss), "midpoint")
        assert theory.window_mass == pytest.approx(math.pi / 2 * 4 * math.pi)

    def test_radial_profile_excludes_jumps(self, gauss):
        geometry = polar(3.0, 6, 8)
        theory = theory_histogram(geometry, ThetaDensity(gauss, 1.0))
        report = compare(theory, ThetaDensity(gauss, 1.0), exclude_radii=[1.0, math.sqrt(2)])
        excluded = [ring for ring in report.radial_profile if ring.excluded]
        assert [(ring.r_lo, ring.r_hi) for ring in excluded] == [(1.0, 1.5)]
