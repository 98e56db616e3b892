"""Tests for Z[q] coefficients and the truncated polynomial types."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhl.exactpoly import (
    ContextMismatchError,
    EvalContext,
    PairContext,
    PairTruncPoly,
    QCoeff,
    SignedTruncPoly,
    TruncPoly,
    determinant,
    fraction_free_rank,
    poly_arith,
    poly_eval_rational,
    qcoeff_arith,
    varpi,
)

SMALL = EvalContext(2, 4)

qcoeffs = st.lists(st.integers(-3, 3), max_size=3).map(
    lambda cs: QCoeff(tuple(cs))
)


def _polys(kind: type[TruncPoly] | type[SignedTruncPoly]) -> st.SearchStrategy:
    nvars = kind.nvars_for(SMALL)
    exps = st.tuples(*[st.integers(0, 2) for _ in range(nvars)])
    return st.dictionaries(exps, qcoeffs, max_size=4).map(
        lambda terms: kind(SMALL, terms)
    )


plain_polys = _polys(TruncPoly)
signed_polys = _polys(SignedTruncPoly)


class TestQCoeff:
    def test_trailing_zeros_stripped(self) -> None:
        assert QCoeff((1, 0, 0)) == QCoeff.ONE
        assert QCoeff((0, 0)) == QCoeff.ZERO
        assert QCoeff.ZERO.degree == -1
        assert not QCoeff.ZERO

    def test_arithmetic(self) -> None:
        one_plus_q = QCoeff((1, 1))
        assert one_plus_q * one_plus_q == QCoeff((1, 2, 1))
        assert one_plus_q**3 == QCoeff((1, 3, 3, 1))
        assert one_plus_q - QCoeff.Q == QCoeff.ONE
        assert 2 * QCoeff.Q == QCoeff((0, 2))
        assert 1 - QCoeff.Q == QCoeff((1, -1))
        assert qcoeff_arith(QCoeff.Q, QCoeff.Q, "mul") == QCoeff.q_power(2)

    def test_unknown_operation_rejected(self) -> None:
        with pytest.raises(ValueError, match="unknown"):
            qcoeff_arith(QCoeff.ONE, QCoeff.ONE, "div")  # type: ignore[arg-type]

    def test_q_power(self) -> None:
        assert QCoeff.q_power(2, 3) == QCoeff((0, 0, 3))
        with pytest.raises(ValueError):
            QCoeff.q_power(-1)

    def test_shift_and_evaluate(self) -> None:
        assert QCoeff((1, 2)).shift(2) == QCoeff((0, 0, 1, 2))
        assert QCoeff((1, 1)).evaluate(2) == 3
        assert QCoeff((1, -2, 3)).evaluate(Fraction(1, 2)) == Fraction(3, 4)

    def test_exact_division(self) -> None:
        assert QCoeff((1, 2, 1)).exact_div(QCoeff((1, 1))) == QCoeff((1, 1))
        assert QCoeff((0, 6)).exact_div(3) == QCoeff((0, 2))
        with pytest.raises(ArithmeticError):
            QCoeff((1, 0, 1)).exact_div(QCoeff((1, 1)))
        with pytest.raises(ZeroDivisionError):
            QCoeff.ONE.exact_div(0)

    def test_str(self) -> None:
        assert str(QCoeff((1, -2, 3))) == "1 - 2q + 3q^2"
        assert str(QCoeff((0, -1))) == "-q"
        assert str(QCoeff.ZERO) == "0"

    @given(qcoeffs, qcoeffs, qcoeffs)
    def test_ring_axioms(self, a: QCoeff, b: QCoeff, c: QCoeff) -> None:
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a


class TestContexts:
    def test_positive_parameters(self) -> None:
        with pytest.raises(ValueError, match="m must be"):
            EvalContext(0, 3)
        with pytest.raises(ValueError, match="D must be"):
            EvalContext(2, 0)
        with pytest.raises(ValueError, match="my must be"):
            PairContext(1, 0, 2)

    def test_pair_sub_contexts(self) -> None:
        pair = PairContext(2, 3, 4)
        assert pair.x_context == EvalContext(2, 4)
        assert pair.y_context == EvalContext(3, 4)


class TestTruncPoly:
    def test_truncation_drops_high_degree(self) -> None:
        ctx = EvalContext(2, 2)
        assert not TruncPoly(ctx, {(3, 0): 1})
        x1 = TruncPoly.variable(EvalContext(1, 2), 1)
        assert not x1**3
        assert x1**2 == TruncPoly.monomial(EvalContext(1, 2), (2,))

    def test_zero_coefficients_dropped(self) -> None:
        poly = TruncPoly(SMALL, {(1, 0): 0, (0, 1): QCoeff.ZERO})
        assert len(poly) == 0
        assert poly == TruncPoly.zero(SMALL)

    def test_bad_exponents_rejected(self) -> None:
        with pytest.raises(ValueError, match="length"):
            TruncPoly(SMALL, {(1,): 1})
        with pytest.raises(ValueError, match="negative"):
            TruncPoly(SMALL, {(1, -1): 1})

    def test_context_mismatch(self) -> None:
        f = TruncPoly.one(EvalContext(2, 3))
        g = TruncPoly.one(EvalContext(2, 4))
        with pytest.raises(ContextMismatchError):
            _ = f + g
        with pytest.raises(ContextMismatchError):
            _ = f * g

    def test_square_of_sum(self) -> None:
        x1 = TruncPoly.variable(SMALL, 1)
        x2 = TruncPoly.variable(SMALL, 2)
        square = (x1 + x2) ** 2
        assert square.coefficient((1, 1)) == QCoeff.constant(2)
        assert square.coefficient((2, 0)) == QCoeff.ONE
        assert square.degree() == 2

    def test_variable_out_of_range(self) -> None:
        with pytest.raises(ValueError):
            TruncPoly.variable(SMALL, 3)

    def test_scale_and_specialize(self) -> None:
        x1 = TruncPoly.variable(SMALL, 1)
        f = x1.scale(QCoeff((1, 1)))
        assert f.specialize_q(1) == x1.scale(2)
        assert f.specialize_q(-1) == TruncPoly.zero(SMALL)
        assert 3 * x1 == x1 * 3

    def test_homogeneous_component(self) -> None:
        x1 = TruncPoly.variable(SMALL, 1)
        f = TruncPoly.one(SMALL) + x1 + x1**2
        assert f.homogeneous_component(2) == x1**2
        assert f.homogeneous_component(0) == TruncPoly.one(SMALL)

    def test_retruncate(self) -> None:
        x1 = TruncPoly.variable(SMALL, 1)
        f = x1 + x1**3
        assert f.retruncate(2) == TruncPoly.variable(EvalContext(2, 2), 1)
        with pytest.raises(ValueError, match="cannot raise"):
            f.retruncate(5)

    def test_canonical_json(self) -> None:
        ctx = EvalContext(2, 2)
        f = TruncPoly(ctx, {(0, 1): 1, (1, 0): QCoeff.Q})
        assert f.to_json() == (
            '{"context":{"m":2,"D":2},"terms":['
            '{"exp":[1,0],"coeff":[0,1]},{"exp":[0,1],"coeff":[1]}]}'
        )

    def test_json_errors(self) -> None:
        with pytest.raises(ValueError, match="invalid polynomial JSON"):
            TruncPoly.from_json("{not json")
        with pytest.raises(ValueError, match="must be an object"):
            TruncPoly.from_json("[1]")
        with pytest.raises(ValueError, match="malformed"):
            TruncPoly.from_json('{"terms": []}')

    @pytest.mark.parametrize(
        ("exp", "coeff"),
        [("[1.7]", "[2]"), ("[1]", "[2.9]"), ("[true]", "[1]"), ("[1]", '["2"]')],
    )
    def test_json_rejects_non_integers(self, exp: str, coeff: str) -> None:
        term = f'{{"exp":{exp},"coeff":{coeff}}}'
        payload = f'{{"context":{{"m":1,"D":2}},"terms":[{term}]}}'
        with pytest.raises(ValueError, match="malformed polynomial payload"):
            TruncPoly.from_json(payload)

    def test_constructors_do_not_truncate(self) -> None:
        with pytest.raises(ValueError, match="integers"):
            QCoeff((1.5,))
        with pytest.raises(ValueError, match="integers"):
            TruncPoly(SMALL, {(1.0, 0): 1})

    def test_str(self) -> None:
        ctx = EvalContext(2, 3)
        f = TruncPoly.variable(ctx, 1) + TruncPoly.monomial(ctx, (0, 2), QCoeff.Q)
        assert str(f) == "x1 + (q)*x2^2"
        assert str(TruncPoly.zero(ctx)) == "0"
        assert str(TruncPoly.constant(ctx, 3)) == "(3)"

    def test_evaluate(self) -> None:
        f = TruncPoly.variable(SMALL, 1) + TruncPoly.variable(SMALL, 2, QCoeff.Q)
        assert poly_eval_rational(f, [2, 3], Fraction(1, 2)) == Fraction(7, 2)
        with pytest.raises(ValueError):
            f.evaluate([1], 0)

    def test_poly_arith(self) -> None:
        x1 = TruncPoly.variable(SMALL, 1)
        assert poly_arith(x1, x1, "add") == x1.scale(2)
        assert poly_arith(x1, x1, "sub") == TruncPoly.zero(SMALL)
        assert poly_arith(x1, x1, "mul") == x1**2
        assert poly_arith(x1, QCoeff.Q, "scale") == x1.scale(QCoeff.Q)
        with pytest.raises(TypeError):
            poly_arith(x1, x1, "scale")

    @given(plain_polys, plain_polys, plain_polys)
    @settings(max_examples=50)
    def test_ring_axioms(self, f: TruncPoly, g: TruncPoly, h: TruncPoly) -> None:
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f * g == g * f

    @given(plain_polys)
    @settings(max_examples=50)
    def test_json_round_trip(self, f: TruncPoly) -> None:
        assert TruncPoly.from_json(f.to_json()) == f


class TestSignedTruncPoly:
    def test_slots(self) -> None:
        ctx = EvalContext(2, 2)
        assert SignedTruncPoly.variable(ctx, -1).terms == {(1, 0, 0, 0): QCoeff.ONE}
        assert SignedTruncPoly.variable(ctx, 2).terms == {(0, 0, 0, 1): QCoeff.ONE}
        with pytest.raises(ValueError):
            SignedTruncPoly.variable(ctx, 3)

    def test_word_monomial(self) -> None:
        ctx = EvalContext(2, 3)
        word = SignedTruncPoly.word_monomial(ctx, [-1, 1, -1])
        assert word == SignedTruncPoly.monomial(ctx, (2, 1, 0, 0))
        assert str(word) == "x-1^2*x1"

    def test_varpi_marks_negatives_with_q(self) -> None:
        ctx = EvalContext(2, 2)
        word = SignedTruncPoly.word_monomial(ctx, [-1, 1])
        assert varpi(word) == TruncPoly.monomial(ctx, (2, 0), QCoeff.Q)

    @given(signed_polys, signed_polys)
    @settings(max_examples=50)
    def test_varpi_is_a_ring_homomorphism(
        self, f: SignedTruncPoly, g: SignedTruncPoly
    ) -> None:
        assert varpi(f * g) == varpi(f) * varpi(g)
        assert varpi(f + g) == varpi(f) + varpi(g)


class TestPairTruncPoly:
    def test_tensor(self) -> None:
        pair = PairContext(1, 1, 2)
        x = TruncPoly.variable(pair.x_context, 1)
        y = TruncPoly.variable(pair.y_context, 1, QCoeff.Q)
        assert PairTruncPoly.tensor(x, y, pair).terms == {(1, 1): QCoeff.Q}
        assert str(PairTruncPoly.tensor(x, y, pair)) == "(q)*x1*y1"

    def test_tensor_context_checked(self) -> None:
        pair = PairContext(1, 1, 2)
        wrong = TruncPoly.one(EvalContext(2, 2))
        with pytest.raises(ContextMismatchError):
            PairTruncPoly.tensor(wrong, wrong, pair)

    def test_from_concatenated(self) -> None:
        pair = PairContext(1, 2, 3)
        h = TruncPoly.variable(EvalContext(3, 3), 2)
        assert PairTruncPoly.from_concatenated(h, pair).terms == {
            (0, 1, 0): QCoeff.ONE
        }
        with pytest.raises(ContextMismatchError):
            PairTruncPoly.from_concatenated(h, PairContext(1, 1, 3))


class TestMatrices:
    def test_determinant(self) -> None:
        assert determinant([[1, 2], [3, 4]], 1) == -2
        assert determinant([[2, 0, 1], [1, 3, 2], [1, 1, 2]], 1) == 6
        assert determinant([], 1) == 1
        with pytest.raises(ValueError, match="non-square"):
            determinant([[1, 2]], 1)

    @given(
        st.lists(qcoeffs, min_size=9, max_size=9),
        st.sampled_from([(0, 1), (0, 2), (1, 2)]),
    )
    @settings(max_examples=50)
    def test_determinant_alternates(
        self, entries: list[QCoeff], swap: tuple[int, int]
    ) -> None:
        matrix = [entries[0:3], entries[3:6], entries[6:9]]
        det = determinant(matrix, QCoeff.ONE)
        i, j = swap
        rows = list(matrix)
        rows[i], rows[j] = rows[j], rows[i]
        assert determinant(rows, QCoeff.ONE) == -det
        cols = [list(row) for row in matrix]
        for row in cols:
            row[i], row[j] = row[j], row[i]
        assert determinant(cols, QCoeff.ONE) == -det

    def test_determinant_of_polynomials(self) -> None:
        x1 = TruncPoly.variable(SMALL, 1)
        one = TruncPoly.one(SMALL)
        assert determinant([[x1, one], [one, x1]], one) == x1**2 - one

    def test_fraction_free_rank(self) -> None:
        q = QCoeff.Q
        assert fraction_free_rank([[1, 2], [2, 4]]) == 1
        assert fraction_free_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 3
        assert fraction_free_rank([[1, q], [q, q * q]]) == 1
        assert fraction_free_rank([[1, q], [1, 1]]) == 2
        assert fraction_free_rank([[0, 0], [0, 1]]) == 1
        assert fraction_free_rank([]) == 0
        with pytest.raises(ValueError, match="ragged"):
            fraction_free_rank([[1, 2], [1]])
