"""Shared fixtures: named groups, standard groupoids, torsion cocycles and a seeded generator."""

import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from gerbe_holonomy.cohomology import TorsionCocycle
from gerbe_holonomy.groupoids import point_quotient, reflection_torus
from gerbe_holonomy.groups import parse_group

REPO_ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = REPO_ROOT / "scenarios"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def klein():
    return parse_group("Z/2xZ/2")


@pytest.fixture
def klein_point(klein):
    return point_quotient(klein)


@pytest.fixture
def reflection_circle():
    return reflection_torus(1)


@pytest.fixture
def reflection_plane():
    return reflection_torus(2)


@pytest.fixture
def sign_cocycle(klein):
    """e((a1, a2), (b1, b2)) = (-1)^(a1 b2) on Z/2 x Z/2."""

    def turns(g, h):
        a = klein.label_of(g).strip("()").split(",")
        b = klein.label_of(h).strip("()").split(",")
        return Fraction(int(a[0]) * int(b[1]), 2)

    return TorsionCocycle.from_function(klein, turns)


@pytest.fixture
def scenario_path():
    def lookup(name: str) -> Path:
        return SCENARIOS / f"{name}.json"

    return lookup


@pytest.fixture
def write_scenario(tmp_path):
    """Write a scenario document to a temporary file and return its path."""

    def write(document, name: str = "scenario.json") -> Path:
        path = tmp_path / name
        text = document if isinstance(document, str) else json.dumps(document)
        path.write_text(text, encoding="utf-8")
        return path

    return write
