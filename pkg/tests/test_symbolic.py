"""Exact rational-function layer: arithmetic, calculus, Laurent data."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from slekit.symbolic import (
    LaurentPoly,
    MultiRat,
    evaluate,
    inject_variables,
    laurent_coefficients,
    normalize,
    partial_derivative,
    residue,
    to_string,
)

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=8)
nonzero = rationals.filter(bool)


def poly2(coeffs):
    """Dense degree-2 polynomial in x1, x2 from six coefficients."""
    x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
    c = [MultiRat.const(v, 2) for v in coeffs]
    return c[0] + c[1] * x1 + c[2] * x2 + c[3] * x1 * x2 \
        + c[4] * x1 ** 2 + c[5] * x2 ** 2


coeff_lists = st.lists(rationals, min_size=6, max_size=6)


class TestMultiRatArithmetic:
    def test_binomial_square(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        assert (x1 + x2) ** 2 == x1 ** 2 + 2 * x1 * x2 + x2 ** 2

    def test_cancellation(self):
        x1 = MultiRat.var(1, 1)
        assert x1 / x1 == 1
        assert (x1 ** 2 - 1) / (x1 - 1) == x1 + 1

    def test_scalar_coercion_both_sides(self):
        x = MultiRat.var(1, 1)
        assert 1 - x == -(x - 1)
        assert 2 * x == x + x
        assert (3 / x) * x == 3
        assert x + Fraction(1, 2) == (2 * x + 1) / 2

    def test_zero_and_bool(self):
        x = MultiRat.var(1, 1)
        assert not (x - x)
        assert (x - x).is_zero
        assert x
        assert MultiRat.zero(3).is_zero

    def test_hash_consistent_with_eq(self):
        x = MultiRat.var(1, 1)
        assert hash((x + 1) ** 2) == hash(x ** 2 + 2 * x + 1)

    def test_pow_requires_int(self):
        x = MultiRat.var(1, 1)
        assert x ** -2 == 1 / x ** 2

    def test_normalize_is_identity_on_canonical_values(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        f = (x1 ** 2 - x2 ** 2) / (x1 - x2)
        assert normalize(f) == f
        assert normalize(f) == x1 + x2


class TestEvaluate:
    def test_exact_point(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        f = (x1 + x2) / (x1 - x2)
        assert evaluate(f, [Fraction(1, 2), Fraction(1, 3)]) == Fraction(5)

    def test_pole_raises(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        with pytest.raises(ZeroDivisionError):
            evaluate(1 / (x1 - x2), [Fraction(1), Fraction(1)])

    def test_arity_mismatch_raises(self):
        with pytest.raises(ValueError):
            evaluate(MultiRat.var(1, 2), [Fraction(1)])

    @given(coeff_lists, rationals, rationals)
    @settings(max_examples=30, deadline=None)
    def test_matches_direct_substitution(self, coeffs, a, b):
        f = poly2(coeffs)
        expect = coeffs[0] + coeffs[1] * a + coeffs[2] * b \
            + coeffs[3] * a * b + coeffs[4] * a ** 2 + coeffs[5] * b ** 2
        assert evaluate(f, [a, b]) == expect


class TestDerivatives:
    @given(coeff_lists, coeff_lists)
    @settings(max_examples=25, deadline=None)
    def test_product_rule(self, ca, cb):
        f, g = poly2(ca), poly2(cb)
        for var in (1, 2):
            lhs = partial_derivative(f * g, var)
            rhs = partial_derivative(f, var) * g \
                + f * partial_derivative(g, var)
            assert lhs == rhs

    @given(coeff_lists, coeff_lists)
    @settings(max_examples=25, deadline=None)
    def test_quotient_rule(self, ca, cb):
        f, g = poly2(ca), poly2(cb) + MultiRat.const(1, 2)
        if g.is_zero:
            return
        lhs = partial_derivative(f / g, 1)
        rhs = (partial_derivative(f, 1) * g
               - f * partial_derivative(g, 1)) / g ** 2
        assert lhs == rhs

    def test_mixed_partials_commute(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        f = x1 ** 3 / (x2 - 2) + x2 / x1
        assert partial_derivative(partial_derivative(f, 1), 2) \
            == partial_derivative(partial_derivative(f, 2), 1)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            partial_derivative(MultiRat.var(1, 1), 2)


class TestLaurent:
    def test_geometric_series(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        coeffs = laurent_coefficients(1 / (x1 - x2), 2, -1, 2)
        assert [to_string(c) for c in coeffs] \
            == ["0", "1/x1", "1/x1^2", "1/x1^3"]

    def test_terminating_expansion(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        f = (x1 + x2) ** 2 / x2 ** 2
        c = laurent_coefficients(f, 2, -3, 1)
        x = MultiRat.var(1, 1)
        assert c == [MultiRat.zero(1), x ** 2, 2 * x,
                     MultiRat.one(1), MultiRat.zero(1)]

    @given(coeff_lists, nonzero, nonzero)
    @settings(max_examples=20, deadline=None)
    def test_window_reconstructs_polynomial(self, coeffs, a, t):
        f = poly2(coeffs)
        window = laurent_coefficients(f, 2, 0, 2)
        total = sum((evaluate(c, [a]) * t ** k
                     for k, c in enumerate(window)), Fraction(0))
        assert total == evaluate(f, [a, t])

    def test_residue_of_derivative_vanishes(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        f = (x1 + 3) / (x2 ** 2 * (x1 - x2))
        assert residue(partial_derivative(f, 2), 2).is_zero

    def test_residue_reads_simple_pole(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        f = x1 ** 2 / x2 + 5 / x2 ** 2 + x2
        assert residue(f, 2) == MultiRat.var(1, 1) ** 2

    def test_bad_window_raises(self):
        x = MultiRat.var(1, 1)
        with pytest.raises(ValueError):
            laurent_coefficients(x, 1, 2, 1)


class TestInjectVariables:
    def test_relabel_evaluates_consistently(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        f = x1 / (x1 + x2)
        g = inject_variables(f, [3, 1], 3)
        pt = [Fraction(5), Fraction(7), Fraction(2)]
        assert evaluate(g, pt) == evaluate(f, [pt[2], pt[0]])

    def test_duplicate_positions_raise(self):
        f = MultiRat.var(1, 2) + MultiRat.var(2, 2)
        with pytest.raises(ValueError):
            inject_variables(f, [1, 1], 3)

    def test_position_out_of_range(self):
        with pytest.raises(ValueError):
            inject_variables(MultiRat.var(1, 1), [4], 3)


laurent_dicts = st.dictionaries(st.integers(-4, 4), rationals,
                                min_size=0, max_size=5)


class TestLaurentPoly:
    def test_monomial_and_coefficient(self):
        f = LaurentPoly.monomial(-3, Fraction(2, 7))
        assert f.coefficient(-3) == Fraction(2, 7)
        assert f.coefficient(0) == 0

    def test_arithmetic(self):
        f = LaurentPoly({1: Fraction(2), -1: Fraction(3)})
        g = LaurentPoly.monomial(-1)
        assert f * g == LaurentPoly({0: Fraction(2), -2: Fraction(3)})
        assert f - f == LaurentPoly()

    def test_derivative_and_residue(self):
        f = LaurentPoly({2: Fraction(1), -1: Fraction(5), -3: Fraction(7)})
        assert f.residue() == Fraction(5)
        assert f.derivative() == LaurentPoly({1: Fraction(2),
                                              -2: Fraction(-5),
                                              -4: Fraction(-21)})

    @given(laurent_dicts, laurent_dicts)
    @settings(max_examples=40, deadline=None)
    def test_product_rule(self, da, db):
        f, g = LaurentPoly(da), LaurentPoly(db)
        lhs = (f * g).derivative()
        rhs = f.derivative() * g + f * g.derivative()
        assert lhs == rhs

    @given(laurent_dicts)
    @settings(max_examples=40, deadline=None)
    def test_derivative_has_no_residue(self, d):
        assert LaurentPoly(d).derivative().residue() == 0


class TestToString:
    def test_canonical_forms(self):
        x1, x2 = MultiRat.var(1, 2), MultiRat.var(2, 2)
        assert to_string(1 / MultiRat.var(1, 1) ** 2) == "1/x1^2"
        assert to_string(MultiRat.const(Fraction(-5, 4), 1)
                         / MultiRat.var(1, 1) ** 4) == "(-5/4)/x1^4"
        assert to_string((x1 + x2) * (x1 - x2)) == "x1^2 - x2^2"

    def test_string_roundtrip_equality(self):
        x = MultiRat.var(1, 1)
        assert to_string((x + 1) ** 2) == to_string(x ** 2 + 2 * x + 1)
