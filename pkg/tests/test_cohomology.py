"""Tests for the Smith normal form, H^2(G, C*) and discrete torsion cocycles."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gerbe_holonomy.cohomology import (
    TorsionCocycle,
    abelian_multiplier,
    bicharacter_table,
    brute_force_h2_order,
    cyclic_three_cocycle,
    h1_finite_group,
    h2_finite_group,
    normalize_cocycle,
)
from gerbe_holonomy.exceptions import GroupSpecError, GroupTooLarge
from gerbe_holonomy.groups import parse_group
from gerbe_holonomy.phases import Phase
from gerbe_holonomy.smith import smith_normal_form


class TestSmithNormalForm:
    def test_small_matrix(self):
        form = smith_normal_form([[2, 4], [6, 8]])
        assert form.diagonal == [2, 4]
        assert form.invariant_factors == [2, 4]

    def test_transforms_reproduce_the_diagonal(self):
        matrix = np.array([[4, 6, 2], [2, 8, 0], [0, 2, 6]])
        form = smith_normal_form(matrix)
        product = form.U @ matrix @ form.V
        expected = np.zeros_like(product)
        for i, d in enumerate(form.diagonal):
            expected[i, i] = d
        assert np.array_equal(product, expected)
        assert np.array_equal(form.V @ form.V_inverse, np.eye(3, dtype=form.V.dtype))

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3), min_size=2, max_size=4))
    def test_divisibility_chain(self, rows):
        form = smith_normal_form(rows)
        nonzero = [d for d in form.diagonal if d]
        assert all(d > 0 for d in nonzero)
        assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))

    def test_rejects_vectors(self):
        with pytest.raises(ValueError):
            smith_normal_form([1, 2, 3])


class TestSchurMultiplier:
    @pytest.mark.parametrize("spec,factors", [
        ("1", []),
        ("Z/6", []),
        ("S3", []),
        ("Q8", []),
        ("D4", [2]),
        ("Z/2xZ/2", [2]),
        ("Z/2xZ/4", [2]),
        ("Z/4xZ/4", [4]),
        ("Z/2xZ/2xZ/2", [2, 2, 2]),
    ])
    def test_invariant_factors(self, spec, factors):
        assert h2_finite_group(parse_group(spec)).invariant_factors == factors

    @pytest.mark.parametrize("orders", [(2, 2), (2, 4), (3, 3), (2, 2, 2), (2, 6)])
    def test_abelian_closed_form(self, orders):
        spec = "x".join(f"Z/{n}" for n in orders)
        assert h2_finite_group(parse_group(spec)).invariant_factors == abelian_multiplier(orders)

    @pytest.mark.parametrize("spec,m", [("Z/2", 2), ("Z/3", 3), ("Z/2xZ/2", 2)])
    def test_agrees_with_enumeration(self, spec, m):
        group = parse_group(spec)
        assert brute_force_h2_order(group, m) == h2_finite_group(group).order

    def test_representatives_generate(self):
        schur = h2_finite_group(parse_group("Z/2xZ/2xZ/2"))
        for index, rep in enumerate(schur.representatives):
            assert rep.is_cocycle
            coordinates = schur.class_of(rep)
            assert coordinates[index] != 0
            assert not schur.is_coboundary(rep)

    def test_class_of_product(self):
        schur = h2_finite_group(parse_group("Z/4xZ/4"))
        twice = schur.cocycle_for([2])
        assert schur.class_of(twice) == (2,)
        assert schur.is_coboundary(schur.cocycle_for([4]))

    def test_coboundary_changes_nothing(self, klein):
        schur = h2_finite_group(klein)
        rep = schur.representatives[0]
        shifted = rep.times_coboundary([Fraction(0), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7)])
        assert shifted.is_cocycle
        assert schur.class_of(shifted) == schur.class_of(rep)

    def test_sign_cocycle_is_the_generator(self, klein, sign_cocycle):
        schur = h2_finite_group(klein)
        assert sign_cocycle.is_cocycle
        assert schur.class_of(sign_cocycle) == (1,)

    def test_wrong_number_of_coordinates(self, klein):
        with pytest.raises(GroupSpecError):
            h2_finite_group(klein).cocycle_for([1, 0])

    def test_order_cap(self):
        with pytest.raises(GroupTooLarge):
            h2_finite_group(parse_group("Z/4xZ/4"), cap=8)

    def test_describe(self):
        assert h2_finite_group(parse_group("Z/2xZ/2xZ/2")).describe() == "Z/2 + Z/2 + Z/2"
        assert h2_finite_group(parse_group("S3")).describe() == "0"


class TestTorsionCocycle:
    def test_normalization_keeps_the_class(self, klein, sign_cocycle):
        shifted = TorsionCocycle.from_function(klein, lambda g, h: sign_cocycle.turns[g][h] + Fraction(1, 3))
        assert not shifted.is_normalized
        normal = normalize_cocycle(shifted)
        assert normal.is_normalized
        assert h2_finite_group(klein).class_of(normal) == (1,)

    def test_defect_finds_a_triple(self, klein):
        broken = TorsionCocycle.from_function(klein, lambda g, h: Fraction(1, 3) if (g, h) == (1, 2) else 0)
        value, triple = broken.defect()
        assert value != 0
        assert triple is not None

    def test_commutator_phase(self, sign_cocycle, klein):
        table, failure = bicharacter_table(sign_cocycle)
        assert failure is None
        g, k = klein.index("(1,0)"), klein.index("(0,1)")
        assert table[g][k] == Phase(Fraction(1, 2))
        assert table[g][g].is_one()

    def test_bicharacter_needs_abelian(self):
        with pytest.raises(GroupSpecError):
            bicharacter_table(TorsionCocycle.trivial(parse_group("S3")))


class TestOtherDegrees:
    def test_characters(self):
        data = h1_finite_group(parse_group("Z/2xZ/4"))
        assert data.invariant_factors == [2, 4]
        assert len(data.characters) == 2

    def test_cyclic_three_cocycle_is_closed(self):
        n = 3
        table = cyclic_three_cocycle(n)

        def w(a, b, c):
            return table.get((a, b, c), Phase.one())

        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for d in range(n):
                        value = (w(b, c, d) / w((a + b) % n, c, d) * w(a, (b + c) % n, d)
                                 / w(a, b, (c + d) % n) * w(a, b, c))
                        assert value.is_one()
