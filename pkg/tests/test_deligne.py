"""Tests for Deligne cochains, coboundaries and cocycle verification."""

import pytest

from gerbe_holonomy.deligne import (
    CochainFunction,
    FormCochain,
    GerbeData,
    LineData,
    cech_delta,
    gauge_coboundary,
    gerbe_coboundary,
    total_coboundary,
    verify_cocycle,
)
from gerbe_holonomy.exceptions import ArityMismatch, LevelUnsupported, PossibleZero
from gerbe_holonomy.expressions import parse_expr
from gerbe_holonomy.groupoids import QuotientArrow
from gerbe_holonomy.phases import Phase
from gerbe_holonomy.sectors import torsion_gerbe


def circle_function(groupoid, text, level=0, key=()):
    return CochainFunction(groupoid, level, {key: parse_expr(text, groupoid.dim)})


def circle_form(groupoid, text, level, key):
    return FormCochain(groupoid, level, 1, {key: {(1,): parse_expr(text, groupoid.dim)}})


class TestCochainFunction:
    def test_absent_keys_are_one(self, klein_point):
        sigma = CochainFunction(klein_point, 1)
        assert sigma.value((2,), 0) == Phase.one()
        assert sigma.exact

    def test_evaluation_on_arrows(self, klein_point, sign_cocycle):
        h = sign_cocycle.as_cochain(klein_point)
        g = klein_point.group.index("(1,0)")
        k = klein_point.group.index("(0,1)")
        assert h(QuotientArrow(0, g), QuotientArrow(0, k)) == Phase.sign(True)
        assert h(QuotientArrow(0, k), QuotientArrow(0, g)) == Phase.one()
        with pytest.raises(ArityMismatch):
            h(QuotientArrow(0, g))

    def test_product_with_inverse_is_trivial(self, klein_point, sign_cocycle):
        h = sign_cocycle.as_cochain(klein_point)
        assert h.product(h.inverse()).entries == {}

    def test_delta_of_a_character_vanishes(self, klein_point):
        # a homomorphism Z/2 x Z/2 -> {+-1} is a 1-cocycle
        group = klein_point.group
        signs = {(g,): Phase.sign(group.label_of(g).startswith("(1")) for g in group.elements}
        assert cech_delta(CochainFunction(klein_point, 1, signs)).entries == {}

    def test_level_mismatch_is_rejected(self, klein_point, sign_cocycle):
        with pytest.raises(LevelUnsupported):
            LineData(sign_cocycle.as_cochain(klein_point))


class TestVerifyCocycle:
    def test_torsion_gerbe_passes_exactly(self, klein_point, sign_cocycle):
        report = verify_cocycle(torsion_gerbe(sign_cocycle, klein_point))
        assert report.passed
        check = report.check("2-cocycle h")
        assert check.exact
        assert check.residual == 0.0
        assert check.samples == 64
        assert report.values["kind"] == "GerbeData"

    def test_perturbed_entry_is_caught(self, klein_point, sign_cocycle):
        gerbe = torsion_gerbe(sign_cocycle, klein_point)
        key = (klein_point.group.index("(1,0)"), klein_point.group.index("(0,1)"))
        broken = GerbeData(gerbe.h.perturbed(key, Phase.root(1, 3)))
        report = verify_cocycle(broken)
        assert not report.passed
        check = report.check("2-cocycle h")
        assert check.residual > 0.5
        assert check.witness is not None

    def test_gauge_coboundary_is_a_cocycle(self, reflection_circle):
        f = circle_function(reflection_circle, "exp(2*pi*i*sin(2*pi*x1))")
        line = gauge_coboundary(f)
        report = verify_cocycle(line, points=40, paths=6, seed=5)
        assert report.passed, report.failures
        assert [c.name for c in report.checks] == ["1-cocycle b", "1-cocycle a (pointwise)", "1-cocycle a"]

    def test_gauge_function_must_be_certified(self, reflection_circle):
        with pytest.raises(PossibleZero):
            gauge_coboundary(circle_function(reflection_circle, "sin(2*pi*x1)"))

    def test_connection_that_is_not_invariant_fails(self, reflection_circle):
        h = CochainFunction(reflection_circle, 1)
        A = circle_form(reflection_circle, "2*pi*i*cos(2*pi*x1)", 0, ())
        report = verify_cocycle(LineData(h, A), points=40, paths=6, seed=5)
        assert report.check("1-cocycle b").passed
        assert not report.check("1-cocycle a (pointwise)").passed
        assert not report.check("1-cocycle a").passed

    def test_invariant_connection_passes(self, reflection_circle):
        h = CochainFunction(reflection_circle, 1)
        A = circle_form(reflection_circle, "2*pi*i*sin(2*pi*x1)", 0, ())
        assert verify_cocycle(LineData(h, A), points=40, paths=6, seed=5).passed

    def test_gerbe_bounded_by_line_data(self, klein_point):
        group = klein_point.group
        f = CochainFunction(klein_point, 1, {(g,): Phase.root(g, 5) for g in group.elements})
        gerbe = gerbe_coboundary(f)
        assert isinstance(gerbe, GerbeData)
        report = verify_cocycle(gerbe)
        assert report.passed
        assert report.check("2-cocycle h").exact


class TestTotalCoboundary:
    def test_square_is_zero_on_a_torus(self, reflection_circle):
        A = circle_form(reflection_circle, "x1*cos(2*pi*x1)", 0, ())
        image = total_coboundary(total_coboundary(LineData(CochainFunction(reflection_circle, 1), A)))
        assert image.function.entries == {}
        assert all(form.is_zero() for form in image.forms)

    def test_degrees_line_up(self, reflection_plane):
        B = FormCochain(reflection_plane, 0, 2, {(): {(1, 2): parse_expr("2*pi*i", 2)}})
        gerbe = GerbeData(CochainFunction(reflection_plane, 2), B=B)
        image = total_coboundary(gerbe)
        assert image.degree == 3
        assert [omega.degree for omega in image.forms] == [1, 2]
        # constant B is invariant under x -> -x, so delta B vanishes
        assert image.forms[1].is_zero()
