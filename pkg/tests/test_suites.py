"""Tests for the built-in acceptance suites and the report model."""

import pytest

from gerbe_holonomy.models import CheckResult, Report, UnitTally
from gerbe_holonomy.phases import Phase
from gerbe_holonomy.suites import list_suites, run_all, run_suite

QUICK_SUITES = ["discrete-torsion", "schur-multiplier", "flat-transgression", "quadrature", "holonomy-invariance"]


class TestReport:
    def test_exact_checks_need_zero(self):
        report = Report(command="demo")
        assert report.add_check("exact", 0.0, 0.0, exact=True).passed
        assert not report.add_check("tiny", 1e-300, 0.0, exact=True).passed
        assert report.add_check("numeric", 1e-9, 1e-8).passed
        assert [c.name for c in report.failures] == ["tiny"]
        with pytest.raises(KeyError):
            report.check("missing")

    def test_negative_residuals_are_rejected(self):
        with pytest.raises(ValueError):
            CheckResult(name="bad", residual=-1.0, passed=True)

    def test_json_omits_unset_fields(self):
        text = Report(command="demo").to_json()
        assert '"wall_time"' not in text
        assert '"seed"' not in text
        assert text.endswith("\n")

    def test_unit_tally(self):
        report = Report(command="demo")
        tally = UnitTally()
        tally.update(Phase.one(), "a")
        tally.update(Phase.sign(True), "b")
        check = tally.record(report, "ones", 1e-8)
        assert check.exact and not check.passed
        assert check.residual == pytest.approx(2.0)
        assert check.witness == "b"


class TestSuites:
    def test_registry(self):
        names = [s.name for s in list_suites()]
        assert names[0] == "holonomy-invariance"
        assert {"discrete-torsion", "inner-local-system", "connection-identity"} <= set(names)
        assert all(s.title for s in list_suites())

    @pytest.mark.parametrize("name", QUICK_SUITES)
    def test_quick_runs_pass(self, name):
        report = run_suite(name, seed=0, quick=True)
        assert report.passed, report.failures
        assert report.command == f"selftest {name}"
        assert report.seed == 0

    def test_discrete_torsion_values(self):
        report = run_suite("discrete-torsion")
        assert report.values["F((1,0),(0,1))"] == "phase(1/2)"
        assert report.values["F((1,0),(1,0))"] == "phase(0)"
        assert report.check("F matches the torsion ratio").exact

    def test_quadrature_order(self):
        report = run_suite("quadrature", quick=True)
        assert float(report.values["error ratio"]) > 15.0

    def test_runs_are_reproducible(self):
        first = run_suite("holonomy-invariance", seed=7, quick=True)
        second = run_suite("holonomy-invariance", seed=7, quick=True)
        assert first.to_json() == second.to_json()

    def test_unknown_suite(self):
        with pytest.raises(KeyError):
            run_suite("no-such-suite")

    def test_run_all_prefixes_names(self):
        report = run_all(quick=True, names=["quadrature", "discrete-torsion"])
        assert report.check("quadrature: constant integrands").passed
        assert "discrete-torsion: F((1,0),(0,1))" in report.values

    @pytest.mark.slow
    def test_full_selftest(self):
        report = run_all(seed=0)
        assert report.passed, [c.name for c in report.failures]
