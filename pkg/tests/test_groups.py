"""Tests for finite groups and exact phases."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gerbe_holonomy import phases
from gerbe_holonomy.exceptions import GroupSpecError
from gerbe_holonomy.groups import FiniteGroup, conjugacy_data, cyclic_group, parse_group
from gerbe_holonomy.phases import Phase


class TestPhase:
    def test_turns_are_reduced(self):
        assert Phase(Fraction(5, 4)).turns == Fraction(1, 4)
        assert Phase(Fraction(-1, 3)).turns == Fraction(2, 3)

    def test_products_stay_exact(self):
        value = phases.multiply([Phase.root(1, 3), Phase.root(1, 3), Phase.root(1, 3)])
        assert isinstance(value, Phase)
        assert value.is_one()
        assert phases.distance_from_one(value) == 0.0

    def test_mixed_product_is_promoted(self):
        value = Phase.sign(True) * 2j
        assert isinstance(value, complex)
        assert value == -2j

    def test_quarter_turns_are_exact_complex(self):
        assert complex(Phase.root(1, 4)) == 1j
        assert complex(Phase.sign(True)) == -1

    def test_text_forms(self):
        assert str(Phase.one()) == "1"
        assert str(Phase.sign(True)) == "-1"
        assert phases.format_value(Phase.root(1, 3)) == "phase(1/3)"

    @given(st.fractions(), st.fractions())
    def test_division_inverts_multiplication(self, a, b):
        x, y = Phase(a), Phase(b)
        assert (x * y) / y == x


class TestParseGroup:
    @pytest.mark.parametrize("spec,order", [
        ("1", 1), ("Z/5", 5), ("Z/2xZ/4", 8), ("Z/2×Z/2", 4), ("S3", 6), ("D4", 8), ("Q8", 8),
    ])
    def test_orders(self, spec, order):
        group = parse_group(spec)
        assert group.order == order
        assert group.axiom_violation() is None

    def test_abelian_flags(self):
        assert parse_group("Z/2xZ/4").is_abelian
        assert not parse_group("S3").is_abelian
        assert not parse_group("Q8").is_abelian

    def test_product_labels(self):
        group = parse_group("Z/2xZ/2")
        assert group.element_labels == ("(0,0)", "(0,1)", "(1,0)", "(1,1)")
        assert group.index("(1, 0)") == 2

    def test_explicit_table(self):
        group = parse_group({"label": "C2", "table": [[0, 1], [1, 0]], "elements": ["e", "a"]})
        assert group.index("a") == 1
        assert group.mul(1, 1) == 0

    def test_bad_text(self):
        with pytest.raises(GroupSpecError):
            parse_group("SL(2,Z)")

    def test_bad_table_is_reported(self):
        table = ((0, 1, 2), (1, 0, 2), (2, 2, 0))
        with pytest.raises(GroupSpecError, match="law fails"):
            FiniteGroup(table, 0, "bad").validate()

    def test_unknown_element(self):
        with pytest.raises(GroupSpecError):
            cyclic_group(3).index("7")


class TestConjugacy:
    def test_s3_classes(self):
        data = conjugacy_data(parse_group("S3"))
        assert sorted(len(c) for c in data.classes) == [1, 2, 3]
        assert sorted(c.order for c in data.centralizers) == [2, 3, 6]

    def test_abelian_classes_are_singletons(self):
        data = conjugacy_data(parse_group("Z/2xZ/4"))
        assert len(data.classes) == 8
        assert all(c.order == 8 for c in data.centralizers)

    def test_q8_centre(self):
        group = parse_group("Q8")
        data = conjugacy_data(group)
        minus_one = group.index("-1")
        assert data.classes[data.class_of(minus_one)] == (minus_one,)

    def test_generated_subgroups(self):
        group = parse_group("Z/2xZ/4")
        assert group.subgroup_generated([group.index("(0,1)")]).order == 4
        assert group.subgroup_generated([]).elements == (group.identity,)
        s3 = parse_group("S3")
        assert s3.subgroup_generated(list(s3.elements)[1:]).order == 6
        assert group.exponent == 4
