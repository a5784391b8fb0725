"""Tests for the expression language, differential forms and Simpson quadrature."""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from gerbe_holonomy.exceptions import DimensionMismatch, ExprSyntaxError, PossibleZero, QuadratureDiverged, UnknownSymbol
from gerbe_holonomy.expressions import (
    certify_nonvanishing,
    compile_expr,
    coordinate,
    diff_expr,
    evaluate,
    is_periodic,
    parse_expr,
)
from gerbe_holonomy.forms import AffineMap, PForm, dlog, eval_form, exterior_d, pullback_form
from gerbe_holonomy.quadrature import adaptive_simpson, simpson, simpson_rule, simpson_with_estimate

x1, x2 = coordinate(1), coordinate(2)


class TestParser:
    def test_precedence(self):
        assert parse_expr("1 + 2*x1^2 - x2/4", 2) == 1 + 2 * x1**2 - x2 / 4

    def test_unary_minus_and_negative_exponent(self):
        assert parse_expr("-x1^(-2)", 1) == -x1**-2

    def test_functions_and_constants(self):
        expr = parse_expr("exp(2*pi*i*x1) + sin(x1)*cos(x1) + log(2)", 1)
        assert expr == sympy.exp(2 * sympy.pi * sympy.I * x1) + sympy.sin(x1) * sympy.cos(x1) + sympy.log(2)

    def test_decimals_are_exact(self):
        assert parse_expr("0.25") == sympy.Rational(1, 4)

    def test_coordinate_above_dimension(self):
        with pytest.raises(UnknownSymbol) as info:
            parse_expr("x1 + x3", 2)
        assert info.value.name == "x3"
        assert info.value.offset == 5

    def test_syntax_error_offset(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("1 + * 2")
        assert info.value.offset == 4

    def test_unbalanced_parenthesis(self):
        with pytest.raises(ExprSyntaxError, match="end of input"):
            parse_expr("sin(x1", 1)

    def test_fractional_exponent_is_rejected(self):
        with pytest.raises(ExprSyntaxError, match="integer"):
            parse_expr("x1^1.5", 1)

    def test_bad_character(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("x1 $ 2", 1)


class TestEvaluation:
    def test_exact_derivative(self):
        expr = parse_expr("sin(x1)*x2", 2)
        assert diff_expr(expr, 1) == sympy.cos(x1) * x2
        assert diff_expr(expr, 2) == sympy.sin(x1)

    def test_vectorised_evaluation(self):
        function = compile_expr(parse_expr("x1*x2 + t", 2), 2)
        points = np.array([[1.0, 2.0], [3.0, 4.0]])
        assert np.allclose(function(points, t=0.5), [2.5, 12.5])

    def test_point_evaluation(self):
        assert evaluate(parse_expr("exp(pi*i*x1)", 1), [1]) == pytest.approx(-1)

    def test_periodicity(self):
        assert is_periodic(parse_expr("cos(2*pi*x1)*sin(4*pi*x2)", 2), 2)
        assert not is_periodic(parse_expr("x1", 1), 1)


class TestNonvanishing:
    def test_certified(self):
        assert certify_nonvanishing(parse_expr("exp(x1)", 1), [(0, 1)])
        assert certify_nonvanishing(parse_expr("2 + cos(2*pi*x1)", 1), [(0, 1)])
        assert certify_nonvanishing(parse_expr("x1", 1), [(1, 2)])

    def test_not_certified(self):
        assert not certify_nonvanishing(parse_expr("x1", 1), [(0, 1)])
        assert not certify_nonvanishing(parse_expr("sin(2*pi*x1)", 1), [(0, 1)])

    def test_logs_need_a_certified_argument(self):
        assert parse_expr("log(x1)", 1, box=[(1, 2)]) == sympy.log(x1)
        with pytest.raises(PossibleZero):
            parse_expr("log(x1)", 1, box=[(0, 1)])


class TestForms:
    def test_d_squared_is_zero(self):
        f = parse_expr("sin(x1)*x2^2 + exp(x2)", 2)
        once = exterior_d(PForm.function(f, 2))
        assert exterior_d(once).is_zero()

    def test_d_of_one_form(self):
        form = PForm(1, 2, {(1,): -x2, (2,): x1})
        assert exterior_d(form) == PForm(2, 2, {(1, 2): 2})

    def test_top_degree(self):
        assert exterior_d(PForm(2, 2, {(1, 2): x1})).degree == 3
        assert exterior_d(PForm(2, 2, {(1, 2): x1})).is_zero()

    def test_alternating_pairing(self):
        area = PForm(2, 2, {(1, 2): 1})
        assert eval_form(area, (0, 0), [(1, 0), (0, 1)]) == 1
        assert eval_form(area, (0, 0), [(0, 1), (1, 0)]) == -1

    def test_batch_agrees_with_pointwise(self):
        form = PForm(1, 2, {(1,): x2, (2,): x1**2})
        points = np.array([[0.1, 0.2], [0.3, 0.7]])
        vectors = np.array([[1.0, 2.0], [-1.0, 0.5]])
        batch = form.evaluate_batch(points, [vectors])
        single = [eval_form(form, p, [v]) for p, v in zip(points, vectors)]
        assert np.allclose(batch, single)

    def test_dlog(self):
        form = dlog(parse_expr("exp(2*pi*i*x1)", 1), 1)
        assert form == PForm(1, 1, {(1,): 2 * sympy.pi * sympy.I})

    def test_pullback_along_reflection(self):
        flip = AffineMap(((-1, 0), (0, -1)), (Fraction(0), Fraction(0)))
        one = PForm(1, 2, {(1,): x1})
        assert pullback_form(one, flip) == PForm(1, 2, {(1,): x1})
        two = PForm(2, 2, {(1, 2): sympy.cos(x1)})
        assert pullback_form(two, flip) == two

    def test_pullback_commutes_with_d(self):
        shear = AffineMap(((1, 1), (0, 1)), (Fraction(1, 2), Fraction(0)))
        form = PForm(1, 2, {(1,): sympy.sin(x2), (2,): x1 * x2})
        assert exterior_d(pullback_form(form, shear)) == pullback_form(exterior_d(form), shear)

    def test_composition_order(self):
        shift = AffineMap(((1,),), (Fraction(1, 4),))
        flip = AffineMap(((-1,),), (Fraction(0),))
        assert shift.then(flip).apply((Fraction(1, 2),)) == (Fraction(-3, 4),)
        assert flip.then(shift).apply((Fraction(1, 2),)) == (Fraction(-1, 4),)

    def test_mismatched_dimensions(self):
        with pytest.raises(DimensionMismatch):
            PForm(1, 1, {(1,): 1}) + PForm(1, 2, {(1,): 1})


class TestSimpson:
    def test_exact_on_cubics(self):
        assert simpson(lambda t: t**3 - 2 * t, 0, 1, n=2) == pytest.approx(0.25 - 1)

    def test_interval_scaling(self):
        assert simpson(np.cos, 0, np.pi / 2, n=64) == pytest.approx(1, abs=1e-8)

    def test_weights_sum_to_one(self):
        _, weights = simpson_rule(16)
        assert weights.sum() == pytest.approx(1)

    def test_odd_subintervals(self):
        with pytest.raises(ValueError):
            simpson_rule(3)

    def test_divergence(self):
        with pytest.raises(QuadratureDiverged):
            simpson(lambda t: 1 / t, 0, 1)

    def test_error_estimate_shrinks(self):
        _, coarse = simpson_with_estimate(np.exp, 0, 1, n=8)
        _, fine = simpson_with_estimate(np.exp, 0, 1, n=16)
        assert fine < coarse / 8

    def test_adaptive_reaches_the_target(self):
        value = adaptive_simpson(lambda t: np.cos(40 * t), 0, 1, target=1e-10)
        assert value == pytest.approx(np.sin(40) / 40, abs=1e-9)

    def test_adaptive_accepts_easy_integrands_at_once(self):
        assert adaptive_simpson(lambda t: t**2, 0, 1) == pytest.approx(1 / 3, abs=1e-12)

    def test_adaptive_gives_up_on_a_jump(self):
        with pytest.raises(QuadratureDiverged):
            adaptive_simpson(lambda t: np.sign(t - 1 / 3), 0, 1, max_n=1024)
