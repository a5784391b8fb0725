"""Tests for segmented loops, loop arrows, refinement, tangents and families."""

from fractions import Fraction

import numpy as np
import pytest

from gerbe_holonomy.exceptions import (
    BadPartition,
    DuplicateBreakpoint,
    EndpointMismatch,
    NotComposable,
    OutsideChart,
    PartitionMismatch,
)
from gerbe_holonomy.loops import (
    Partition,
    build_loop,
    compose_loop_arrows,
    constant_loop,
    identity_arrow,
    inverse_loop_arrow,
    loop_arrow,
    loop_tangent,
    parametric,
    push_tangent,
    refine_arrow,
    refine_loop,
    same_loop,
    twisted_loop,
)
from gerbe_holonomy.scenario import load_scenario


@pytest.fixture
def torus(scenario_path):
    return load_scenario(scenario_path("torus_reflection"))


@pytest.fixture
def half_twist(reflection_circle):
    """psi(t) = t/2 - 1/4 on T^1, closed by the reflection."""
    return twisted_loop(reflection_circle, ["t/2 - 1/4"], "1")


class TestPartition:
    def test_uniform(self):
        partition = Partition.uniform(4)
        assert partition.size == 4
        assert partition.interval(1) == (Fraction(1, 4), Fraction(1, 2))
        assert str(partition) == "{0, 1/4, 1/2, 3/4, 1}"

    @pytest.mark.parametrize("points", [(0, Fraction(1, 2)), (Fraction(1, 4), 1), (0, "1/2", "1/2", 1), (0,)])
    def test_malformed(self, points):
        with pytest.raises(BadPartition):
            Partition(points)

    def test_empty_uniform(self):
        with pytest.raises(BadPartition):
            Partition.uniform(0)


class TestBuildLoop:
    def test_twisted_loop_closes(self, half_twist):
        assert half_twist.size == 1
        assert half_twist.labels == (1,)
        assert half_twist.start_object(0) == (Fraction(-1, 4),)
        assert half_twist.end_object(0) == (Fraction(1, 4),)

    def test_wrong_connecting_arrow(self, reflection_circle):
        with pytest.raises(EndpointMismatch) as info:
            twisted_loop(reflection_circle, ["t/2 - 1/4"], "0")
        assert info.value.index == 1
        assert info.value.distance == pytest.approx(0.5)

    def test_counts_must_match(self, reflection_circle):
        with pytest.raises(BadPartition):
            build_loop(reflection_circle, [0, "1/2", 1], [parametric("t")], ["0"])

    def test_points_on_a_finite_space(self, klein_point):
        loop = build_loop(klein_point, [0, "1/2", 1], ["pt", "pt"], ["(1,0)", "(0,1)"])
        assert loop.labels == (klein_point.group.index("(1,0)"), klein_point.group.index("(0,1)"))
        assert "(1,0)" in str(loop)

    def test_cover_segments_stay_in_their_charts(self, scenario_path):
        cover = load_scenario(scenario_path("chart_cover")).groupoid
        path = ["1/2 + cos(2*pi*t + pi)/4", "1/2 + sin(2*pi*t + pi)/4"]
        with pytest.raises(OutsideChart):
            # the upper half of the circle leaves the lower chart
            build_loop(cover, [0, "1/2", 1], [parametric(*path), parametric(*path)], ["U1", "U0"],
                       charts=["U0", "U0"])


class TestLoopArrows:
    def test_target_of_the_reflection(self, half_twist):
        arrow = loop_arrow(half_twist, ["1"])
        assert arrow.target.start_object(0) == (Fraction(1, 4),)
        assert arrow.target.labels == (1,)
        assert not same_loop(arrow.source, arrow.target)

    def test_constant_loop_targets_conjugate(self, klein_point):
        loop = constant_loop(klein_point, "pt", "(1,0)")
        arrow = loop_arrow(loop, ["(0,1)"])
        # abelian: the connecting arrow is unchanged
        assert same_loop(arrow.target, loop)

    def test_label_count(self, half_twist):
        with pytest.raises(BadPartition):
            loop_arrow(half_twist, ["1", "1"])

    def test_composition(self, torus):
        twist, back = torus.loop_arrow("twist"), torus.loop_arrow("back")
        round_trip = compose_loop_arrows(twist, back)
        assert round_trip.labels == (0,)
        assert same_loop(round_trip.target, twist.source)

    def test_composition_needs_matching_loops(self, torus):
        twist = torus.loop_arrow("twist")
        with pytest.raises(NotComposable):
            compose_loop_arrows(twist, twist)

    def test_composition_needs_matching_partitions(self, torus):
        twist = torus.loop_arrow("twist")
        finer = identity_arrow(refine_loop(twist.target, ["1/2"]))
        with pytest.raises(PartitionMismatch):
            compose_loop_arrows(twist, finer)

    def test_inverse(self, scenario_path):
        scenario = load_scenario(scenario_path("discrete_torsion"))
        nu = scenario.loop_arrow("nu")
        undo = compose_loop_arrows(nu, inverse_loop_arrow(nu))
        identity = scenario.groupoid.group.identity
        assert undo.labels == (identity, identity)

    def test_cover_arrow(self, scenario_path):
        scenario = load_scenario(scenario_path("chart_cover"))
        stay = scenario.loop_arrow("stay")
        assert same_loop(stay.target, stay.source)
        assert stay.labels == (0, 1)


class TestRefinement:
    def test_refine_inserts_identities(self, half_twist):
        finer = refine_loop(half_twist, ["1/3"])
        assert finer.partition.points == (0, Fraction(1, 3), 1)
        assert finer.labels == (0, 1)
        assert finer.end_object(0) == (Fraction(-1, 12),)

    @pytest.mark.parametrize("points", [["0"], ["1/3", "1/3"]])
    def test_duplicate_breakpoints(self, half_twist, points):
        with pytest.raises(DuplicateBreakpoint):
            refine_loop(half_twist, points)

    def test_breakpoint_outside(self, half_twist):
        with pytest.raises(BadPartition):
            refine_loop(half_twist, ["3/2"])

    def test_refine_arrow_copies_labels(self, half_twist):
        arrow = refine_arrow(loop_arrow(half_twist, ["1"]), ["1/4", "1/2"])
        assert arrow.labels == (1, 1, 1)
        assert arrow.source.partition.size == 3


class TestTangents:
    def test_scenario_tangent_is_compatible(self, torus):
        xi = torus.tangent("xi")
        assert np.allclose(xi.at(0, 0), [0.0, 1.0])
        pushed = push_tangent(torus.loop_arrow("twist"), xi)
        assert np.allclose(pushed.at(0, 0), [0.0, -1.0])

    def test_incompatible_tangent(self, torus):
        with pytest.raises(EndpointMismatch):
            # xi(1) = (0, 1) pushes to (0, -1), but xi(0) = (0, 0)
            loop_tangent(torus.loop("psi"), [["0", "t"]])

    def test_family_slices_and_tangents(self, torus):
        family = torus.family("wiggle")
        lifted = family.source(0.05)
        assert lifted.start_object(0)[1] == pytest.approx(0.0)
        source_tangent, target_tangent = family.tangents()
        assert np.allclose(source_tangent.at(0, 0.5), [0.0, 1.0])
        assert np.allclose(target_tangent.at(0, 0.5), [0.0, -1.0])
