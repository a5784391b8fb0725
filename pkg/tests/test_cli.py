"""Tests for the command-line interface."""

import hashlib
import json

import pytest
from click.testing import CliRunner

from gerbe_holonomy import __version__
from gerbe_holonomy.cli.main import main


@pytest.fixture
def runner(monkeypatch, tmp_path):
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.delenv("GERBE_SEED", raising=False)
    return CliRunner()


@pytest.fixture
def invoke(runner):
    def run(*args):
        return runner.invoke(main, [str(a) for a in args])

    return run


def read_report(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestVerify:
    def test_cocycle_passes(self, invoke, scenario_path, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("verify", scenario_path("discrete_torsion"), "--out", out)
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["command"] == "verify"
        assert report["seed"] == 0
        assert report["scenario_digest"] == hashlib.sha256(scenario_path("discrete_torsion").read_bytes()).hexdigest()
        assert all(check["passed"] for check in report["checks"])
        assert "wall_time" not in report

    def test_perturbed_cocycle_fails(self, invoke, scenario_path, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("verify", scenario_path("perturbed"), "--out", out)
        assert result.exit_code == 1
        failed = [check["name"] for check in read_report(out)["checks"] if not check["passed"]]
        assert "2-cocycle h" in failed

    def test_missing_scenario(self, invoke, tmp_path):
        assert invoke("verify", tmp_path / "absent.json").exit_code == 2

    def test_malformed_scenario(self, invoke, write_scenario):
        path = write_scenario({"groupoid": {"group": "Z/2"}})
        result = invoke("verify", path)
        assert result.exit_code == 2
        assert "groupoid" in result.output

    def test_reports_are_byte_identical(self, invoke, scenario_path, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert invoke("verify", scenario_path("torus_reflection"), "--seed", 4, "--out", first).exit_code == 0
        assert invoke("verify", scenario_path("torus_reflection"), "--seed", 4, "--out", second).exit_code == 0
        assert first.read_bytes() == second.read_bytes()
        assert read_report(first)["seed"] == 4

    def test_seed_from_the_environment(self, runner, scenario_path, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(
            main, ["verify", str(scenario_path("discrete_torsion")), "--out", str(out)], env={"GERBE_SEED": "17"}
        )
        assert result.exit_code == 0
        assert read_report(out)["seed"] == 17

    def test_timings(self, invoke, scenario_path, tmp_path):
        out = tmp_path / "report.json"
        invoke("verify", scenario_path("discrete_torsion"), "--timings", "--out", out)
        assert read_report(out)["wall_time"] >= 0


class TestTransgressionCommands:
    def test_tau2_on_a_twisted_sector(self, invoke, scenario_path, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("tau2", scenario_path("discrete_torsion"), "--arrow", "lam,mu", "--out", out)
        assert result.exit_code == 0, result.output
        assert "phase(1/2)" in result.output
        report = read_report(out)
        assert report["values"]["F(lam)"] == "phase(1/2)"
        assert [check["name"] for check in report["checks"]] == ["F multiplicative"]

    def test_tau2_unknown_arrow(self, invoke, scenario_path):
        result = invoke("tau2", scenario_path("discrete_torsion"), "--arrow", "kappa")
        assert result.exit_code == 2
        assert "loop_arrows.kappa" in result.output

    def test_tau1(self, invoke, scenario_path, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("tau1", scenario_path("shift_circle"), "--loop", "psi", "--arrow", "lam", "--out", out)
        assert result.exit_code == 0, result.output
        assert "H(psi)" in read_report(out)["values"]

    def test_taun_on_cyclic_data(self, invoke, scenario_path, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("taun", scenario_path("cyclic_three"), "--n", 3, "--arrows", "lam,mu", "--check", "--out", out)
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert "F_3(lam,mu)" in report["values"]
        assert report["checks"][0]["exact"]

    def test_taun_degree_mismatch(self, invoke, scenario_path):
        assert invoke("taun", scenario_path("cyclic_three"), "--n", 2, "--arrows", "lam").exit_code == 2

    def test_square(self, invoke, scenario_path):
        result = invoke("square", scenario_path("shift_circle"))
        assert result.exit_code == 0, result.output


class TestSectorCommands:
    def test_inertia(self, invoke, scenario_path, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("inertia", scenario_path("discrete_torsion"), "--out", out)
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["values"]["objects"] == "4"
        assert len(report["tables"][0]["rows"]) == 16

    def test_inertia_needs_gerbe_data(self, invoke, scenario_path):
        assert invoke("inertia", scenario_path("shift_circle")).exit_code == 2

    def test_sectors(self, invoke, scenario_path, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("sectors", scenario_path("discrete_torsion"), "--out", out)
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert len([key for key in report["values"] if key.startswith("sector ")]) == 4


class TestGroupCommands:
    def test_h2(self, invoke, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("h2", "--group", "Z/2xZ/2", "--out", out)
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["values"]["invariant factors"] == "[2]"
        assert report["values"]["H^2(G, C*)"] == "Z/2"
        assert len(report["tables"]) == 1

    def test_h2_of_a_cyclic_group_is_trivial(self, invoke, tmp_path):
        out = tmp_path / "report.json"
        assert invoke("h2", "--group", "Z/6", "--no-tables", "--out", out).exit_code == 0
        assert read_report(out)["values"]["H^2(G, C*)"] == "0"

    def test_h2_bad_group(self, invoke):
        assert invoke("h2", "--group", "Z/0x?").exit_code == 2

    def test_torsion(self, invoke, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("torsion", "--group", "Z/2xZ/2", "--out", out)
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["values"]["class"] == "(1,)"
        rows = report["tables"][0]["rows"]
        assert ["(1,0)", "(0,1)", "phase(1/2)"] in rows
        assert report["checks"][-1]["name"] == "alternating bicharacter"

    def test_torsion_bad_class(self, invoke):
        assert invoke("torsion", "--group", "Z/2xZ/2", "--class", "one").exit_code == 2


class TestSelftest:
    def test_list(self, invoke):
        result = invoke("selftest", "--list")
        assert result.exit_code == 0
        assert "discrete-torsion" in result.output

    def test_single_suite(self, invoke, tmp_path):
        out = tmp_path / "report.json"
        result = invoke("selftest", "--suite", "discrete-torsion", "--out", out)
        assert result.exit_code == 0, result.output
        assert read_report(out)["command"] == "selftest discrete-torsion"

    def test_unknown_suite(self, invoke):
        assert invoke("selftest", "--suite", "nope").exit_code == 2


class TestMain:
    def test_welcome(self, invoke):
        result = invoke()
        assert result.exit_code == 0
        assert "Welcome to gerbe-holonomy" in result.output

    def test_info(self, invoke):
        result = invoke("info")
        assert result.exit_code == 0
        assert f"Version: {__version__}" in result.output

    def test_version(self, invoke):
        result = invoke("--version")
        assert __version__ in result.output

    def test_broken_config_file(self, invoke, tmp_path, scenario_path):
        config = tmp_path / "config.json"
        config.write_text('{"quadrature_n": 7}', encoding="utf-8")
        result = invoke("--config-file", config, "verify", scenario_path("discrete_torsion"))
        assert result.exit_code == 2
        assert "quadrature_n" in result.output
