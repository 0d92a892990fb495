import json

import pytest
from click.testing import CliRunner

from handlers.cli_handler import cli, read_config_file
from services.commands.models import RunConfig
from services.commands.theory.TheoryCommand import build_density, theory_geometry
from services.correlation.PairHistogrammer import PairHistogrammer
from services.correlation.compare import compare, theory_histogram
from services.correlation.logsets import build_logset
from services.errors import ConfigError
from transport.csv.HistogramWriter import HistogramWriter


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    result = runner.invoke(cli, [str(a) for a in args])
    payload = json.loads(result.stdout) if result.exit_code == 0 else None
    return result, payload


class TestConstants:
    def test_gaussian(self, runner):
        result, payload = invoke(runner, "constants", "--field", -4, "--prime-bound", 10_000)
        assert result.exit_code == 0
        assert payload["command"] == "constants"
        assert 1.50 < payload["constants"]["zeta_K_2"]["value"] < 1.52
        assert payload["constants"]["limit_constant"]["value"] == pytest.approx(0.346, abs=0.003)

    def test_ideal_constant(self, runner):
        _, payload = invoke(runner, "constants", "--field", -4, "--ideal", "1,1", "--prime-bound", 1000)
        assert payload["constants"]["c_m"]["exact"] == "3"

    def test_unknown_field(self, runner):
        result, _ = invoke(runner, "constants", "--field", -5)
        assert result.exit_code == 1
        assert "Ошибка" in result.stderr

    def test_config_file(self, runner, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("# поле Эйзенштейна\nfield = -3\nprime-bound = 1000\n", encoding="utf-8")
        result, payload = invoke(runner, "constants", "--config", path)
        assert result.exit_code == 0
        assert payload["constants"]["field"] == -3
        assert payload["constants"]["prime_bound"] == 1000

    def test_command_line_beats_config_file(self, runner, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("field = -3\nprime-bound = 1000\n", encoding="utf-8")
        _, payload = invoke(runner, "constants", "--config", path, "--field", -4)
        assert payload["constants"]["field"] == -4


def test_config_file_syntax(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("field -4\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        read_config_file(str(path))


class TestUsageErrors:
    def test_bad_option_value(self, runner):
        result, _ = invoke(runner, "empirical", "--N", "abc")
        assert result.exit_code == 1

    def test_bad_config_file(self, runner, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("field -4\n", encoding="utf-8")
        result, _ = invoke(runner, "constants", "--config", path)
        assert result.exit_code == 1
        assert "key=value" in result.stderr

    def test_missing_config_file(self, runner, tmp_path):
        result, _ = invoke(runner, "constants", "--config", tmp_path / "absent.conf")
        assert result.exit_code == 1

    def test_unknown_choice(self, runner):
        result, _ = invoke(runner, "empirical", "--N", 5, "--geometry", "sphere")
        assert result.exit_code == 1


class TestPipeline:
    def test_empirical_theory_compare(self, runner, tmp_path):
        emp, theory = tmp_path / "emp.csv", tmp_path / "theory.csv"
        common = ["--scaling", "power:1", "--window", 3, "--bins", 12]

        result, payload = invoke(runner, "empirical", "--grid", "gauss", "--N", 30, *common, "--out", emp)
        assert result.exit_code == 0
        assert payload["extra"]["method"] == "windowed"
        assert payload["renormalizer"] == pytest.approx(900.0)
        assert emp.exists()

        result, _ = invoke(runner, "theory", "--grid", "gauss", "--density", "theta-infty", *common, "--out", theory)
        assert result.exit_code == 0

        summary = tmp_path / "compare.json"
        result, payload = invoke(
            runner, "compare", "--empirical-csv", emp, "--theory-csv", theory, "--summary", summary,
        )
        assert result.exit_code == 0
        assert json.loads(summary.read_text(encoding="utf-8"))["metrics"]["l1"] == payload["metrics"]["l1"]

        config = RunConfig(command="empirical", grid="gauss", N=30, scaling="power:1", window=3, bins=12)
        hist = PairHistogrammer(
            build_logset(config.source(), config.N, config.weights), config.scaling_spec(), config.hist_geometry(),
        ).execute()
        theory_config = RunConfig(
            command="theory", grid="gauss", density="theta-infty", scaling="power:1", window=3, bins=12,
        )
        expected = theory_histogram(
            theory_geometry(theory_config), build_density(theory_config), theory_config.quadrature_rule(),
        )
        in_process = compare(hist, expected, config.quadrature_rule())
        assert in_process.l1 > 0
        assert payload["metrics"]["l1"] == pytest.approx(in_process.l1, rel=0, abs=1e-12)

    def test_probability_refused_when_scaled(self, runner):
        result, _ = invoke(runner, "empirical", "--N", 10, "--scaling", "power:1", "--window", 2, "--renorm", "probability")
        assert result.exit_code == 1

    def test_probability_forced(self, runner):
        result, payload = invoke(
            runner, "empirical", "--N", 10, "--scaling", "power:1", "--window", 2,
            "--renorm", "probability", "--force",
        )
        assert result.exit_code == 0
        assert payload["renormalizer"] == payload["total_raw_mass"]

    def test_unscaled_probability(self, runner):
        _, payload = invoke(runner, "empirical", "--N", 5, "--window", 2, "--bins", 8)
        assert payload["extra"]["window_mass"] == pytest.approx(1.0)
        assert payload["extra"]["method"] == "naive"

    def test_window_too_large(self, runner):
        result, _ = invoke(runner, "empirical", "--N", 5, "--scaling", "power:1/2", "--window", 10)
        assert result.exit_code == 1

    def test_euler_needs_field(self, runner):
        result, _ = invoke(runner, "empirical", "--N", 5, "--weights", "euler")
        assert result.exit_code == 1


class TestSums:
    def test_mertens_units(self, runner):
        result, payload = invoke(runner, "sums", "--kind", "mertens", "--field", -4, "--x", 1)
        assert result.exit_code == 0
        assert payload["extra"]["sum"]["exact"] == 4

    def test_power(self, runner):
        _, payload = invoke(runner, "sums", "--kind", "power", "--power", 2, "--x", 2)
        assert payload["extra"]["sum"]["brute"] == pytest.approx(28.0)

    def test_missing_radius(self, runner):
        result, _ = invoke(runner, "sums", "--kind", "mertens", "--field", -4)
        assert result.exit_code == 1


def test_r2d_verify(runner):
    result, payload = invoke(runner, "r2d", "--d", 2, "--N", 6, "--verify")
    assert result.exit_code == 0
    assert payload["extra"]["pushforward_equal"] is True


def test_r2d_binned_csv(runner, tmp_path):
    out = tmp_path / "r2d.csv"
    result, _ = invoke(runner, "r2d", "--d", 1, "--N", 4, "--bins", 8, "--out", out)
    assert result.exit_code == 0
    hist_path = tmp_path / "r2d.hist.csv"
    lines = [line for line in hist_path.read_text(encoding="utf-8").splitlines() if not line.startswith("#")]
    assert lines[0] == "t,mass"
    assert len(lines) == 1 + 8
    hist = HistogramWriter.read_hist1d(str(hist_path))
    assert hist.masses.sum() == pytest.approx(1.0)


def test_ortho_verify(runner, tmp_path):
    out = tmp_path / "pairs.csv"
    result, payload = invoke(runner, "ortho", "--field", -4, "--N", 6, "--verify", "--out", out)
    assert result.exit_code == 0
    assert payload["extra"]["identity"]["equal"] is True
    assert "num,den,mass_num,mass_den" in out.read_text(encoding="utf-8").splitlines()
    assert (tmp_path / "pairs.spectrum.csv").exists()
    assert "t,mass" in (tmp_path / "pairs.hist.csv").read_text(encoding="utf-8").splitlines()
