"""Tests for permutations, signed orders, posets and enriched P-partitions."""

from __future__ import annotations

import itertools

import pytest

from qhl.exactpoly import EvalContext, QCoeff, SignedTruncPoly, TruncPoly, varpi
from qhl.posets import (
    EnrichedMap,
    LabelledWeightedPoset,
    Permutation,
    TotalSignedOrder,
    all_permutations,
    chain_poset,
    des,
    enriched_to_tableau,
    enumerate_enriched,
    example_weighted_poset,
    format_poset,
    gamma_pm,
    gamma_q,
    gamma_q_product,
    is_enriched,
    parse_poset,
    peak,
    rsk,
    shuffle_shifted,
    skew_labels,
    skew_poset,
    std,
    tableau_to_enriched,
)
from qhl.tableaux import MarkedTableau, SkewShape, descent_set


class TestPermutation:
    def test_parse_forms(self) -> None:
        expected = Permutation((2, 3, 1))
        assert Permutation.parse("2 3 1") == expected
        assert Permutation.parse("2,3,1") == expected
        assert Permutation.parse("231") == expected
        assert Permutation.parse("") == Permutation(())

    def test_invalid(self) -> None:
        with pytest.raises(ValueError, match="not a permutation"):
            Permutation.parse("1 1")
        with pytest.raises(ValueError, match="invalid permutation"):
            Permutation.parse("1 a")

    def test_inverse_and_compose(self) -> None:
        p = Permutation.parse("231")
        assert p.inverse() == Permutation.parse("312")
        assert p.compose(p.inverse()) == Permutation.identity(3)
        assert p.compose(Permutation.parse("213")) == Permutation.parse("321")
        with pytest.raises(ValueError):
            p.compose(Permutation.identity(2))

    def test_call_and_str(self) -> None:
        p = Permutation.parse("231")
        assert [p(i) for i in (1, 2, 3)] == [2, 3, 1]
        assert str(p) == "2 3 1"

    def test_all_permutations(self) -> None:
        perms = all_permutations(3)
        assert len(perms) == 6
        assert perms[0] == Permutation.identity(3)
        assert all_permutations(0) == [Permutation(())]


class TestStatistics:
    def test_descents_and_peaks(self) -> None:
        assert des(Permutation.parse("213")) == {1}
        assert des(Permutation.parse("321")) == {1, 2}
        assert peak(Permutation.parse("132")) == {2}
        assert peak(Permutation.parse("213")) == frozenset()
        assert peak(Permutation.parse("13254")) == {2, 4}

    def test_std(self) -> None:
        assert std([5, 2, 9]) == Permutation.parse("213")
        assert std([]) == Permutation(())
        with pytest.raises(ValueError, match="distinct"):
            std([1, 1])

    def test_shuffle_shifted(self) -> None:
        one = Permutation.identity(1)
        assert shuffle_shifted(one, one) == [
            Permutation.parse("12"),
            Permutation.parse("21"),
        ]
        assert len(shuffle_shifted(Permutation.parse("21"), one)) == 3
        assert shuffle_shifted(Permutation(()), one) == [one]

    def test_rsk_example(self) -> None:
        insertion, recording = rsk(Permutation.parse("312"))
        assert insertion.shape == SkewShape.parse("2,1")
        assert insertion.entries == (1, 2, 3)
        assert recording.entries == (1, 3, 2)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_rsk_is_descent_preserving_bijection(self, n: int) -> None:
        pairs = set()
        for p in all_permutations(n):
            insertion, recording = rsk(p)
            assert descent_set(recording) == des(p)
            assert descent_set(insertion) == des(p.inverse())
            pairs.add((insertion, recording))
        assert len(pairs) == len(all_permutations(n))


class TestTotalSignedOrder:
    def test_named_orders(self) -> None:
        assert TotalSignedOrder.default(2).sequence == (-1, 1, -2, 2)
        assert TotalSignedOrder.named("reversed", 2).sequence == (1, -1, 2, -2)
        assert TotalSignedOrder.named("positives-first", 2).sequence == (1, 2, -1, -2)

    def test_random_is_seeded(self) -> None:
        first = TotalSignedOrder.named("random", 3, seed=7)
        assert first == TotalSignedOrder.random(3, 7)
        assert first.name == "random-7"
        assert sorted(first.sequence) == [-3, -2, -1, 1, 2, 3]

    def test_errors(self) -> None:
        with pytest.raises(ValueError, match="unknown order"):
            TotalSignedOrder.named("sideways", 2)
        with pytest.raises(ValueError, match="not a ranking"):
            TotalSignedOrder("broken", (1, 2))
        with pytest.raises(ValueError, match="outside"):
            TotalSignedOrder.default(1).key(2)

    def test_values(self) -> None:
        order = TotalSignedOrder.default(3)
        assert order.m == 3
        assert order.values(1) == (-1, 1)
        assert order.key(-2) == 2


class TestPosets:
    def test_transitive_closure(self) -> None:
        poset = LabelledWeightedPoset(3, frozenset({(1, 2), (2, 3)}))
        assert poset.less(1, 3)
        assert not poset.less(3, 1)
        assert poset.covers == ((1, 2), (2, 3))
        assert poset.weights == (1, 1, 1)

    def test_rejects_cycles_and_bad_weights(self) -> None:
        with pytest.raises(ValueError, match="cycle"):
            LabelledWeightedPoset(2, frozenset({(1, 2), (2, 1)}))
        with pytest.raises(ValueError, match="outside"):
            LabelledWeightedPoset(2, frozenset({(1, 3)}))
        with pytest.raises(ValueError, match="positive integers"):
            LabelledWeightedPoset(2, weights=(1, 0))

    def test_chain_poset(self) -> None:
        poset = chain_poset(Permutation.parse("21"))
        assert poset.relations == {(2, 1)}
        assert poset.linear_extension == (2, 1)

    def test_skew_poset_small(self) -> None:
        shape = SkewShape.parse("2,1")
        assert skew_labels(shape) == ((2, 1), (1, 1), (1, 2))
        assert skew_poset(shape).relations == {(2, 1), (2, 3)}

    def test_skew_poset_of_eleven_box_shape(self) -> None:
        poset = skew_poset(SkewShape.parse("6,4,2,1,1/2,1"))
        assert poset.n == 11
        assert poset.less(5, 6)
        assert poset.less(8, 9)
        assert poset.less(3, 4)
        assert poset.less(5, 4)

    def test_weighted_example(self) -> None:
        poset = example_weighted_poset()
        assert poset.covers == ((1, 2), (1, 4), (3, 2), (5, 1), (5, 3))
        assert poset.less(5, 2)
        assert poset.linear_extension == (5, 1, 3, 2, 4)
        assert poset.weight(2) == 5

    def test_text_round_trip(self, weighted_poset_file: str) -> None:
        with open(weighted_poset_file) as fh:
            parsed = parse_poset(fh.read())
        assert parsed == example_weighted_poset()
        assert parse_poset(format_poset(parsed)) == parsed
        assert format_poset(parsed).splitlines()[:3] == ["5", "1 < 2", "1 < 4"]

    @pytest.mark.parametrize("text", ["", "x", "2\n1 < 3", "2\nfoo bar", "2\nw 3 1"])
    def test_parse_errors(self, text: str) -> None:
        with pytest.raises(ValueError):
            parse_poset(text)


class TestEnriched:
    def test_chain_descent(self) -> None:
        maps = enumerate_enriched(chain_poset(Permutation.parse("21")), None, 1)
        assert {f.values for f in maps} == {(-1, -1), (1, -1)}

    def test_is_enriched(self) -> None:
        poset = chain_poset(Permutation.parse("21"))
        assert is_enriched(poset, EnrichedMap((1, -1)))
        assert not is_enriched(poset, EnrichedMap((1, 1)))
        assert not is_enriched(poset, EnrichedMap((1,)))
        with pytest.raises(ValueError):
            EnrichedMap((0, 1))

    def test_enriched_maps_ignore_weights(self) -> None:
        poset = example_weighted_poset()
        unweighted = poset.with_weights((1, 1, 1, 1, 1))
        assert enumerate_enriched(poset, None, 2) == enumerate_enriched(
            unweighted, None, 2
        )

    def test_every_enumerated_map_is_enriched(self) -> None:
        poset = example_weighted_poset()
        order = TotalSignedOrder.reversed_sign_blocks(2)
        maps = enumerate_enriched(poset, order, 2)
        assert maps
        assert all(is_enriched(poset, f, order) for f in maps)

    @pytest.mark.parametrize(
        "order_name", ["default", "reversed", "positives-first", "random"]
    )
    @pytest.mark.parametrize(
        "poset",
        [
            LabelledWeightedPoset(3),
            chain_poset(Permutation.parse("231")),
            skew_poset(SkewShape.parse("2,2/1")),
            example_weighted_poset(),
        ],
        ids=["antichain", "chain", "skew", "weighted"],
    )
    def test_enumeration_matches_brute_force(
        self, poset: LabelledWeightedPoset, order_name: str
    ) -> None:
        order = TotalSignedOrder.named(order_name, 2, seed=3)
        brute = {
            values
            for values in itertools.product(order.sequence, repeat=poset.n)
            if is_enriched(poset, EnrichedMap(values), order)
        }
        enumerated = [f.values for f in enumerate_enriched(poset, order, 2)]
        assert len(enumerated) == len(set(enumerated))
        assert set(enumerated) == brute

    def test_order_must_cover_alphabet(self) -> None:
        with pytest.raises(ValueError, match="covers"):
            enumerate_enriched(
                chain_poset(Permutation.identity(1)), TotalSignedOrder.default(1), 2
            )


class TestGeneratingFunctions:
    def test_gamma_q_of_descent_chain(self) -> None:
        ctx = EvalContext(1, 2)
        gamma = gamma_q(chain_poset(Permutation.parse("21")), ctx)
        assert gamma == TruncPoly.monomial(ctx, (2,), QCoeff((0, 1, 1)))

    def test_gamma_pm_of_descent_chain(self) -> None:
        ctx = EvalContext(1, 2)
        gamma = gamma_pm(chain_poset(Permutation.parse("21")), ctx)
        expected = SignedTruncPoly.word_monomial(
            ctx, [-1, -1]
        ) + SignedTruncPoly.word_monomial(ctx, [-1, 1])
        assert gamma == expected

    def test_weights_are_exponents(self) -> None:
        poset = chain_poset(Permutation.identity(2)).with_weights((2, 3))
        ctx = EvalContext(1, 5)
        assert gamma_q(poset, ctx) == TruncPoly.monomial(ctx, (5,), QCoeff((1, 1)))
        assert not gamma_q(poset, EvalContext(1, 4))

    def test_varpi_of_gamma_pm_is_gamma_q(self) -> None:
        poset = example_weighted_poset().with_weights((1, 1, 1, 1, 1))
        ctx = EvalContext(2, 5)
        assert varpi(gamma_pm(poset, ctx)) == gamma_q(poset, ctx)

    def test_weighted_negatives_carry_a_single_q(self) -> None:
        # varpi raises q to the weight; gamma_q counts each negative node once
        poset = example_weighted_poset()
        ctx = EvalContext(2, 12)
        assert varpi(gamma_pm(poset, ctx)) != gamma_q(poset, ctx)

    def test_gamma_q_product_single_node(self) -> None:
        product = gamma_q_product(Permutation.identity(1), 1, 1, 2)
        assert product.terms == {(1, 1): QCoeff((1, 1))}


class TestTableauCorrespondence:
    def test_round_trip(self) -> None:
        shape = SkewShape.parse("2,1")
        t = MarkedTableau(shape, (-1, 1, 2))
        f = tableau_to_enriched(t)
        assert f.values == (2, -1, 1)
        assert is_enriched(skew_poset(shape), f)
        assert enriched_to_tableau(shape, f) == t

    def test_size_mismatch(self) -> None:
        with pytest.raises(ValueError, match="size"):
            enriched_to_tableau(SkewShape.parse("2"), EnrichedMap((1,)))
