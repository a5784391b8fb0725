"""Tests for the action and cover groupoids, nerves, fixed sets and inertia."""

from fractions import Fraction

import pytest

from gerbe_holonomy.exceptions import (
    ActionNotCompatible,
    DimensionMismatch,
    InfiniteNerve,
    LevelTooLarge,
    NonInvertibleLinearPart,
    NotComposable,
    OutsideChart,
)
from gerbe_holonomy.forms import AffineMap
from gerbe_holonomy.groupoids import (
    AffineAction,
    Box,
    CoverGroupoid,
    FinitePointSet,
    FlatTorus,
    PermutationAction,
    QuotientArrow,
    enumerate_nerve,
    fixed_set,
    inertia,
    make_action_groupoid,
    point_quotient,
)
from gerbe_holonomy.groups import cyclic_group, parse_group


def shift(dim, amount):
    base = AffineMap.identity(dim)
    return AffineMap(base.matrix, tuple(Fraction(amount) for _ in range(dim)))


class TestActionGroupoid:
    def test_arrow_structure_on_a_point(self, klein_point):
        G = klein_point
        g = G.group.index("(1,0)")
        h = G.group.index("(0,1)")
        a = QuotientArrow(0, g)
        b = QuotientArrow(0, h)
        assert G.source(a) == 0 and G.target(a) == 0
        assert G.compose(a, b).element == G.group.index("(1,1)")
        assert G.compose(a, G.inverse(a)) == G.identity(0)

    def test_reflection_moves_without_reduction(self, reflection_circle):
        G = reflection_circle
        flip = 1 - G.group.identity
        arrow = QuotientArrow((Fraction(1, 4),), flip)
        assert G.target(arrow) == (Fraction(-1, 4),)
        back = QuotientArrow((Fraction(-1, 4),), flip)
        assert G.compose(arrow, back) == G.identity((Fraction(1, 4),))

    def test_compose_checks_endpoints(self, reflection_circle):
        G = reflection_circle
        flip = 1 - G.group.identity
        with pytest.raises(NotComposable):
            G.compose(QuotientArrow((Fraction(1, 4),), flip), QuotientArrow((Fraction(1, 4),), flip))

    def test_object_dimension_is_checked(self, reflection_plane):
        with pytest.raises(DimensionMismatch):
            reflection_plane.object(["1/2"])

    def test_shift_action_is_accepted(self):
        group = cyclic_group(2)
        G = make_action_groupoid(FlatTorus(1), group, AffineAction((AffineMap.identity(1), shift(1, "1/2"))))
        assert G.move((Fraction(1, 3),), 1) == (Fraction(5, 6),)

    def test_action_law_failure_names_the_pair(self):
        group = cyclic_group(2)
        action = AffineAction((AffineMap.identity(1), shift(1, "1/3")))
        with pytest.raises(ActionNotCompatible) as info:
            make_action_groupoid(FlatTorus(1), group, action)
        assert info.value.pair == (1, 1)

    def test_non_invertible_linear_part(self):
        group = cyclic_group(2)
        doubling = AffineMap(((2,),), (Fraction(0),))
        with pytest.raises(NonInvertibleLinearPart) as info:
            make_action_groupoid(FlatTorus(1), group, AffineAction((AffineMap.identity(1), doubling)))
        assert info.value.determinant == 2

    def test_permutation_count_must_match_group(self):
        with pytest.raises(DimensionMismatch):
            make_action_groupoid(FinitePointSet(("a", "b")), cyclic_group(2), PermutationAction(((0, 1),)))

    def test_permutation_law_is_checked(self):
        group = cyclic_group(3)
        # a transposition cannot represent an element of order 3
        action = PermutationAction(((0, 1), (1, 0), (1, 0)))
        with pytest.raises(ActionNotCompatible):
            make_action_groupoid(FinitePointSet(("a", "b")), group, action)


class TestNerve:
    def test_level_sizes(self, klein_point):
        assert len(enumerate_nerve(klein_point, 0)) == 1
        assert len(enumerate_nerve(klein_point, 2)) == 16
        assert klein_point.level_size(3) == 64

    def test_tuples_are_composable(self):
        group = cyclic_group(2)
        G = make_action_groupoid(FinitePointSet(("a", "b")), group, PermutationAction(((0, 1), (1, 0))))
        for nerve_tuple in enumerate_nerve(G, 3):
            assert nerve_tuple.level == 3
            for first, second in zip(nerve_tuple.arrows, nerve_tuple.arrows[1:]):
                assert G.target(first) == G.source(second)

    def test_cap_is_enforced(self, klein_point):
        with pytest.raises(LevelTooLarge) as info:
            enumerate_nerve(klein_point, 3, cap=10)
        assert info.value.size == 64

    def test_torus_nerve_is_infinite(self, reflection_circle):
        with pytest.raises(InfiniteNerve):
            enumerate_nerve(reflection_circle, 1)

    def test_inner_face_multiplies(self, klein_point):
        group = klein_point.group
        g, h = group.index("(1,0)"), group.index("(0,1)")
        key, _ = klein_point.face((g, h), 1)
        assert key == (group.index("(1,1)"),)
        assert klein_point.face((g, h), 0)[0] == (h,)
        assert klein_point.face((g, h), 2)[0] == (g,)


class TestFixedSet:
    def test_reflection_of_the_plane_has_four_points(self, reflection_plane):
        flip = 1 - reflection_plane.group.identity
        components = fixed_set(reflection_plane.action, flip)
        assert [c.dimension for c in components] == [0, 0, 0, 0]
        offsets = {c.offset for c in components}
        half = Fraction(1, 2)
        assert offsets == {(0, 0), (0, half), (half, 0), (half, half)}
        assert all(c.contains(c.offset) for c in components)

    def test_identity_fixes_everything(self, reflection_plane):
        components = fixed_set(reflection_plane.action, reflection_plane.group.identity)
        assert len(components) == 1
        assert components[0].dimension == 2
        assert components[0].contains((0.3, 0.7))

    def test_free_translation_has_no_fixed_points(self):
        group = cyclic_group(2)
        G = make_action_groupoid(FlatTorus(1), group, AffineAction((AffineMap.identity(1), shift(1, "1/2"))))
        assert fixed_set(G.action, 1) == []

    def test_swap_fixes_the_diagonal(self):
        group = cyclic_group(2)
        swap = AffineMap(((0, 1), (1, 0)), (Fraction(0), Fraction(0)))
        G = make_action_groupoid(FlatTorus(2), group, AffineAction((AffineMap.identity(2), swap)))
        (component,) = fixed_set(G.action, 1)
        assert component.dimension == 1
        assert component.contains((0.25, 0.25))
        assert not component.contains((0.25, 0.5))

    def test_enumerated_members_lie_on_the_component(self):
        group = cyclic_group(2)
        swap = AffineMap(((0, 1), (1, 0)), (Fraction(0), Fraction(0)))
        G = make_action_groupoid(FlatTorus(2), group, AffineAction((AffineMap.identity(2), swap)))
        (component,) = fixed_set(G.action, 1)
        members = component.enumerate_points(4)
        assert len(set(members)) == 4
        assert all(x == y for x, y in members)
        assert all(component.contains(p) for p in members)
        assert component.enumerate_points() == [component.offset]

    def test_isolated_points_enumerate_their_offset(self, reflection_plane):
        for component in fixed_set(reflection_plane.action, 1 - reflection_plane.group.identity):
            assert component.enumerate_points(8) == [component.offset]


class TestInertia:
    def test_point_quotient_inertia_is_the_group(self, klein_point):
        inertial = inertia(klein_point)
        objects = inertial.objects()
        assert len(objects) == 4
        for v in objects:
            for arrow in inertial.arrows():
                if arrow.loop == v:
                    # abelian group: conjugation is trivial
                    assert inertial.target(arrow) == v

    def test_reflection_circle_objects(self, reflection_circle):
        assert len(inertia(reflection_circle).objects()) == 3
        assert len(inertia(reflection_circle, resolution=4).objects()) == 6

    def test_composition_and_inverse(self):
        G = point_quotient(parse_group("S3"))
        inertial = inertia(G)
        v = inertial.objects()[3]
        arrows = [a for a in inertial.arrows() if a.loop == v]
        first = arrows[1]
        second = next(a for a in inertial.arrows() if a.loop == inertial.target(first))
        composite = inertial.compose(first, second)
        assert inertial.source(composite) == v
        assert inertial.target(composite) == inertial.target(second)
        assert inertial.compose(first, inertial.inverse(first)) == inertial.unit(v)

    def test_every_object_is_a_loop(self, reflection_plane):
        inertial = inertia(reflection_plane, resolution=2)
        assert all(inertial.is_object(v) for v in inertial.objects())


class TestCoverGroupoid:
    @pytest.fixture
    def strip_cover(self):
        lower = Box((Fraction(0), Fraction(0)), (Fraction(1), Fraction(3, 5)))
        upper = Box((Fraction(0), Fraction(2, 5)), (Fraction(1), Fraction(1)))
        return CoverGroupoid([lower, upper])

    def test_overlap(self, strip_cover):
        box = strip_cover.overlap((0, 1))
        assert box.lower == (0, Fraction(2, 5))
        assert box.upper == (1, Fraction(3, 5))
        assert len(strip_cover.level_keys(2)) == 8

    def test_disjoint_charts_drop_keys(self):
        cover = CoverGroupoid([Box((Fraction(0),), (Fraction(1, 3),)), Box((Fraction(2, 3),), (Fraction(1),))])
        assert cover.level_keys(1) == [(0, 0), (1, 1)]

    def test_objects_must_lie_in_their_chart(self, strip_cover):
        assert strip_cover.object(["1/2", "1/2"], "U1").chart == 1
        with pytest.raises(OutsideChart):
            strip_cover.object(["1/2", "1/5"], "U1")

    def test_transition_arrows(self, strip_cover):
        x = strip_cover.object(["1/2", "1/2"], "U0")
        there = strip_cover.arrow_from(x, 1)
        back = strip_cover.inverse(there)
        assert strip_cover.compose(there, back) == strip_cover.identity(x)
        assert strip_cover.locate([there]) == ((0, 1), x.point)
        with pytest.raises(OutsideChart):
            strip_cover.arrow_from(strip_cover.object(["1/2", "1/10"], "U0"), 1)
