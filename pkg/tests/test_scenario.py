"""Tests for scenario validation and loading."""

import hashlib
from fractions import Fraction

import pytest

from gerbe_holonomy.deligne import FlatNData, GerbeData, LineData
from gerbe_holonomy.exceptions import InputError, ScenarioError
from gerbe_holonomy.groupoids import CoverGroupoid
from gerbe_holonomy.loops import same_loop
from gerbe_holonomy.phases import Phase
from gerbe_holonomy.scenario import load_scenario, parse_scenario

SAMPLES = ["discrete_torsion", "perturbed", "torus_reflection", "shift_circle", "chart_cover", "cyclic_three"]


def point_scenario(**sections):
    document = {"groupoid": {"group": "Z/2xZ/2", "points": ["pt"]}}
    document.update(sections)
    return document


def error_path(write_scenario, document):
    with pytest.raises(ScenarioError) as info:
        load_scenario(write_scenario(document))
    return info.value.path


class TestSamples:
    @pytest.mark.parametrize("name", SAMPLES)
    def test_loads(self, scenario_path, name):
        scenario = load_scenario(scenario_path(name))
        assert scenario.cochains
        assert len(scenario.digest) == 64

    def test_digest_is_the_file_hash(self, scenario_path):
        path = scenario_path("discrete_torsion")
        scenario = load_scenario(path)
        assert scenario.digest == hashlib.sha256(path.read_bytes()).hexdigest()
        assert scenario.seed == 0

    def test_cochain_kinds(self, scenario_path):
        assert isinstance(load_scenario(scenario_path("discrete_torsion")).cochain("eps"), GerbeData)
        assert isinstance(load_scenario(scenario_path("shift_circle")).cochain(kind=LineData), LineData)
        assert isinstance(load_scenario(scenario_path("cyclic_three")).cochain("omega"), FlatNData)
        assert isinstance(load_scenario(scenario_path("chart_cover")).groupoid, CoverGroupoid)

    def test_after_chains_loop_arrows(self, scenario_path):
        scenario = load_scenario(scenario_path("discrete_torsion"))
        assert same_loop(scenario.loop_arrow("mu").source, scenario.loop_arrow("lam").target)


class TestLookups:
    def test_unknown_names(self, scenario_path):
        scenario = load_scenario(scenario_path("discrete_torsion"))
        with pytest.raises(ScenarioError) as info:
            scenario.cochain("missing")
        assert info.value.path == "cochains.missing"
        with pytest.raises(ScenarioError) as info:
            scenario.loop_arrow("kappa")
        assert info.value.path == "loop_arrows.kappa"

    def test_wrong_kind(self, scenario_path):
        scenario = load_scenario(scenario_path("discrete_torsion"))
        with pytest.raises(ScenarioError):
            scenario.cochain("eps", LineData)

    def test_ambiguous_cochain(self, write_scenario):
        document = point_scenario(cochains={"a": {"kind": "line"}, "b": {"kind": "line"}})
        scenario = load_scenario(write_scenario(document))
        with pytest.raises(ScenarioError) as info:
            scenario.cochain(kind=LineData)
        assert info.value.path == "cochains"
        assert isinstance(scenario.cochain("b", LineData), LineData)


class TestValues:
    def test_phases_stay_exact(self, write_scenario):
        document = point_scenario(cochains={
            "h": {"kind": "line", "function": [{"key": ["(1,0)"], "value": {"turns": "1/3"}}]},
        })
        line = load_scenario(write_scenario(document)).cochain("h", LineData)
        g = line.groupoid.group.index("(1,0)")
        assert line.h.value((g,), 0) == Phase(Fraction(1, 3))
        assert line.h.exact

    def test_per_point_tables(self, write_scenario):
        document = {
            "groupoid": {"group": "Z/2", "points": ["a", "b"], "permutations": {"1": ["b", "a"]}},
            "cochains": {"h": {"kind": "line", "function": [{"key": [1], "value": [{"turns": "1/2"}, 1]}]}},
        }
        line = load_scenario(write_scenario(document)).cochain("h")
        assert line.h.value((1,), 0) == Phase.sign(True)
        assert line.h.value((1,), 1) == Phase.one()


class TestErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError) as info:
            load_scenario(tmp_path / "absent.json")
        assert not isinstance(info.value, ScenarioError)

    def test_malformed_json(self, write_scenario):
        assert error_path(write_scenario, "{not json") == "$"

    def test_undecodable_bytes(self):
        with pytest.raises(ScenarioError) as info:
            parse_scenario(b"\x80{}")
        assert info.value.path == "$"

    def test_space_must_be_given_once(self, write_scenario):
        assert error_path(write_scenario, {"groupoid": {"group": "Z/2", "points": ["a"], "torus": 1}}) == "groupoid"

    def test_schema_location(self, write_scenario):
        document = point_scenario(settings={"quadrature_n": 7})
        assert error_path(write_scenario, document) == "settings.quadrature_n"

    def test_unknown_element_in_a_key(self, write_scenario):
        document = point_scenario(cochains={"h": {"kind": "line", "function": [{"key": ["(2,0)"], "value": 1}]}})
        assert error_path(write_scenario, document) == "cochains.h.function[0]"

    def test_duplicate_keys(self, write_scenario):
        entry = {"key": ["(1,0)"], "value": 1}
        document = point_scenario(cochains={"h": {"kind": "line", "function": [entry, entry]}})
        assert error_path(write_scenario, document) == "cochains.h.function[1]"

    def test_unknown_loop(self, write_scenario):
        document = point_scenario(loop_arrows={"x": {"loop": "nope", "labels": []}})
        assert error_path(write_scenario, document) == "loop_arrows.x.loop"

    def test_loop_arrow_needs_one_source(self, write_scenario):
        document = point_scenario(loop_arrows={"x": {"loop": "a", "after": "b", "labels": []}})
        assert error_path(write_scenario, document) == "loop_arrows.x"

    def test_non_periodic_expression(self, write_scenario):
        document = {
            "groupoid": {"group": "1", "torus": 1},
            "cochains": {"line": {"kind": "line", "A": [{"key": [], "coefficients": {"1": "x1"}}]}},
        }
        assert error_path(write_scenario, document) == "cochains.line.A[0].coefficients.1"

    def test_tables_need_a_finite_space(self, write_scenario):
        document = {
            "groupoid": {"group": "1", "torus": 1},
            "cochains": {"f": {"kind": "line", "function": [{"key": [0], "value": [1, 1]}]}},
        }
        assert error_path(write_scenario, document) == "cochains.f.function[0]"

    def test_torsion_belongs_to_gerbes(self, write_scenario):
        document = point_scenario(cochains={"h": {"kind": "line", "torsion": [1]}})
        assert error_path(write_scenario, document) == "cochains.h"

    def test_generators_must_generate(self, write_scenario):
        document = {"groupoid": {"group": "Z/2xZ/2", "torus": 1, "maps": {"(1,0)": {"matrix": [[-1]]}}}}
        assert error_path(write_scenario, document) == "groupoid"
