"""Symmetric functions, Hall-Littlewood generators and the signed series H_n.

Everything is expressed with t = -q, so ``hl_qn(n)`` is q_n(X; -q) and
``hl_s_skew`` is S_{λ/μ}(X; -q).
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from qhl.exactpoly import (
    EvalContext,
    ExponentVector,
    PairContext,
    PairTruncPoly,
    QCoeff,
    SignedTruncPoly,
    TruncPoly,
    determinant,
    signed_slot,
    varpi,
)
from qhl.posets import (
    Permutation,
    TotalSignedOrder,
    enriched_to_tableau,
    enumerate_enriched,
    gamma_pm,
    gamma_q,
    gamma_q_product,
    skew_poset,
)
from qhl.quasisym import (
    SubsetDescent,
    gessel_fundamental,
    l_q_closed,
    theta_q,
    theta_q_apply,
)
from qhl.report import Comparison
from qhl.tableaux import (
    Partition,
    SkewShape,
    descent_set,
    enumerate_marked,
    enumerate_ssyt,
    enumerate_syt,
    partitions_of,
    weight_monomial,
)

logger = logging.getLogger(__name__)

BasisKind = Literal["e", "h", "p", "m"]


# --- Classical bases ---


def _from_exponents(ctx: EvalContext, exps: Sequence[Sequence[int]]) -> TruncPoly:
    return TruncPoly(ctx, {tuple(e): 1 for e in exps})


def _counts(indices: Sequence[int], m: int) -> list[int]:
    exp = [0] * m
    for i in indices:
        exp[i] += 1
    return exp


def elementary(k: int, ctx: EvalContext) -> TruncPoly:
    if k < 0:
        return TruncPoly.zero(ctx)
    return _from_exponents(
        ctx,
        [_counts(c, ctx.m) for c in itertools.combinations(range(ctx.m), k)],
    )


def complete(k: int, ctx: EvalContext) -> TruncPoly:
    if k < 0:
        return TruncPoly.zero(ctx)
    return _from_exponents(
        ctx,
        [
            _counts(c, ctx.m)
            for c in itertools.combinations_with_replacement(range(ctx.m), k)
        ],
    )


def power_sum(k: int, ctx: EvalContext) -> TruncPoly:
    if k < 1:
        raise ValueError(f"power sums are indexed by k >= 1, got p{k}")
    return _from_exponents(
        ctx, [[k if i == j else 0 for j in range(ctx.m)] for i in range(ctx.m)]
    )


def monomial_symmetric(shape: Partition, ctx: EvalContext) -> TruncPoly:
    if len(shape) > ctx.m:
        return TruncPoly.zero(ctx)
    padded = shape.parts + (0,) * (ctx.m - len(shape))
    return _from_exponents(ctx, sorted(set(itertools.permutations(padded))))


def basis_element(
    kind: BasisKind, index: int | Partition, ctx: EvalContext
) -> TruncPoly:
    """e_k, h_k, p_k for an integer index; m_λ for a partition index."""
    if kind == "m":
        if not isinstance(index, Partition):
            raise ValueError("monomial symmetric functions are indexed by a partition")
        return monomial_symmetric(index, ctx)
    if not isinstance(index, int):
        raise ValueError(f"{kind} is indexed by an integer, got {index}")
    if index < 0:
        raise ValueError(f"basis index must be >= 0, got {index}")
    builders = {"e": elementary, "h": complete, "p": power_sum}
    try:
        return builders[kind](index, ctx)
    except KeyError:
        raise ValueError(f"unknown basis '{kind}', expected e, h, p or m") from None


def schur(shape: SkewShape, ctx: EvalContext) -> TruncPoly:
    """s_{λ/μ} as the sum of semistandard weights."""
    return sum(
        (weight_monomial(t, ctx) for t in enumerate_ssyt(shape, ctx.m)),
        TruncPoly.zero(ctx),
    )


# --- Hall-Littlewood generators ---


@lru_cache(maxsize=None)
def hl_qn(n: int, ctx: EvalContext) -> TruncPoly:
    """q_n(X; -q) = sum_k q^k e_k h_{n-k}; 1 for n = 0 and 0 for n < 0."""
    if n < 0:
        return TruncPoly.zero(ctx)
    total = TruncPoly.zero(ctx)
    for k in range(n + 1):
        total = total + (elementary(k, ctx) * complete(n - k, ctx)).scale(
            QCoeff.q_power(k)
        )
    return total


def hl_qn_rational(n: int, xs: Sequence[Fraction | int], t: Fraction | int) -> Fraction:
    """(1 - t) sum_i x_i^n prod_{j != i} (x_i - t x_j) / (x_i - x_j), at a point."""
    point = [Fraction(x) for x in xs]
    if len(set(point)) != len(point):
        raise ValueError(f"evaluation points must be pairwise distinct: {xs}")
    if n < 0:
        return Fraction(0)
    if n == 0:
        return Fraction(1)
    t = Fraction(t)
    total = Fraction(0)
    for i, xi in enumerate(point):
        term = xi**n
        for j, xj in enumerate(point):
            if j != i:
                term *= (xi - t * xj) / (xi - xj)
        total += term
    return (1 - t) * total


def hl_qn_ratcheck(
    n: int, xs: Sequence[Fraction | int], t: Fraction | int
) -> tuple[Fraction, Fraction]:
    """The rational formula and the e/h sum, both evaluated at xs with q = -t."""
    ctx = EvalContext(len(xs), max(n, 1))
    expected = hl_qn_rational(n, xs, t)
    return expected, hl_qn(n, ctx).evaluate(xs, -Fraction(t))


def qn_series(order: int, ctx: EvalContext) -> list[TruncPoly]:
    """Coefficients of u^0..u^order in prod_i (1 + q x_i u) / (1 - x_i u)."""
    if order > ctx.D:
        raise ValueError(f"series order {order} exceeds the degree cap {ctx.D}")
    series = [TruncPoly.one(ctx)] + [TruncPoly.zero(ctx)] * order
    one_plus_q = QCoeff((1, 1))
    for i in range(1, ctx.m + 1):
        x = TruncPoly.variable(ctx, i)
        # (1 + q x u) / (1 - x u) = 1 + sum_{k>=1} (1 + q) x^k u^k
        factor = [TruncPoly.one(ctx)] + [
            (x**k).scale(one_plus_q) for k in range(1, order + 1)
        ]
        series = [
            sum(
                (series[a] * factor[k - a] for a in range(k + 1)),
                TruncPoly.zero(ctx),
            )
            for k in range(order + 1)
        ]
    return series


def hl_qn_genfun_check(order: int, ctx: EvalContext) -> list[Comparison]:
    series = qn_series(order, ctx)
    return [
        Comparison(f"qn-genfun/n={n}", series[n], hl_qn(n, ctx))
        for n in range(order + 1)
    ]


def hl_s_skew(shape: SkewShape, ctx: EvalContext) -> TruncPoly:
    """S_{λ/μ}(X; -q) = det(q_{λ_i - μ_j - i + j})."""
    k = len(shape.outer)
    lam, mu = shape.outer, shape.inner
    matrix = [
        [hl_qn(lam.part(i) - mu.part(j) - i + j, ctx) for j in range(1, k + 1)]
        for i in range(1, k + 1)
    ]
    return determinant(matrix, TruncPoly.one(ctx))


# --- Signed alphabet ---


@dataclass(frozen=True)
class RelationR:
    """i R j iff i ≼ j, except i = j negative."""

    order: TotalSignedOrder

    def holds(self, i: int, j: int) -> bool:
        return self.order.key(i) <= self.order.key(j) and not (i == j and i < 0)

    def _triples(self) -> Iterator[tuple[int, int, int]]:
        values = self.order.sequence
        return itertools.product(values, repeat=3)

    def is_transitive(self) -> bool:
        return all(
            self.holds(a, c)
            for a, b, c in self._triples()
            if self.holds(a, b) and self.holds(b, c)
        )

    def complement_is_transitive(self) -> bool:
        return all(
            not self.holds(a, c)
            for a, b, c in self._triples()
            if not self.holds(a, b) and not self.holds(b, c)
        )

    def is_semitransitive(self) -> bool:
        """a R b R c implies a R d or d R c, for every d."""
        values = self.order.sequence
        return all(
            self.holds(a, d) or self.holds(d, c)
            for a, b, c in self._triples()
            if self.holds(a, b) and self.holds(b, c)
            for d in values
        )


def h_signed(n: int, relation: RelationR, ctx: EvalContext) -> SignedTruncPoly:
    """Sum of x_{i_1} ... x_{i_n} over chains i_1 R i_2 R ... R i_n."""
    if n < 0:
        return SignedTruncPoly.zero(ctx)
    if n == 0:
        return SignedTruncPoly.one(ctx)
    if relation.order.m < ctx.m:
        raise ValueError(
            f"order '{relation.order.name}' covers ±1..±{relation.order.m}, "
            f"need ±1..±{ctx.m}"
        )
    values = relation.order.values(ctx.m)
    chains = {v: SignedTruncPoly.variable(ctx, v) for v in values}
    for _ in range(n - 1):
        chains = {
            v: sum(
                (chains[u] for u in values if relation.holds(u, v)),
                SignedTruncPoly.zero(ctx),
            )
            * SignedTruncPoly.variable(ctx, v)
            for v in values
        }
    return sum(chains.values(), SignedTruncPoly.zero(ctx))


def h_signed_subset_form(n: int, ctx: EvalContext) -> SignedTruncPoly:
    """Sum over a size-k set of negatives and a size-(n-k) multiset of positives."""
    if n < 0:
        return SignedTruncPoly.zero(ctx)
    terms: dict[ExponentVector, QCoeff] = {}
    for k in range(n + 1):
        for negatives in itertools.combinations(range(1, ctx.m + 1), k):
            for positives in itertools.combinations_with_replacement(
                range(1, ctx.m + 1), n - k
            ):
                exp = [0] * (2 * ctx.m)
                for u in negatives:
                    exp[signed_slot(-u)] += 1
                for v in positives:
                    exp[signed_slot(v)] += 1
                terms[tuple(exp)] = QCoeff.ONE
    return SignedTruncPoly(ctx, terms)


# --- Identity checks ---


def det_h_identity(
    shape: SkewShape, relation: RelationR, ctx: EvalContext
) -> Comparison:
    """Γ^± of the skew poset against det(H_{λ_i - μ_j - i + j})."""
    k = len(shape.outer)
    lam, mu = shape.outer, shape.inner
    matrix = [
        [
            h_signed(lam.part(i) - mu.part(j) - i + j, relation, ctx)
            for j in range(1, k + 1)
        ]
        for i in range(1, k + 1)
    ]
    return Comparison(
        f"det-h/{relation.order.name}/{shape}",
        gamma_pm(skew_poset(shape), ctx, relation.order),
        determinant(matrix, SignedTruncPoly.one(ctx)),
    )


def order_free_check(
    n: int, relation: RelationR, ctx: EvalContext
) -> Comparison:
    return Comparison(
        f"order-free/{relation.order.name}/n={n}",
        h_signed(n, relation, ctx),
        h_signed_subset_form(n, ctx),
    )


def varpi_h_check(n: int, ctx: EvalContext) -> Comparison:
    """ϖ(H_n) = q_n(X; -q)."""
    relation = RelationR(TotalSignedOrder.default(ctx.m))
    return Comparison(
        f"varpi-h/n={n}", varpi(h_signed(n, relation, ctx)), hl_qn(n, ctx)
    )


def theta_pn_check(n: int, ctx: EvalContext) -> Comparison:
    """Θ_q(p_n) = (1 - (-q)^n) p_n."""
    factor = QCoeff.ONE - QCoeff.q_power(n, (-1) ** n)
    p = power_sum(n, ctx)
    return Comparison(f"theta-p/n={n}", theta_q_apply(p, n, ctx), p.scale(factor))


def theta_h_check(n: int, ctx: EvalContext) -> Comparison:
    return Comparison(
        f"theta-h/n={n}", theta_q_apply(complete(n, ctx), n, ctx), hl_qn(n, ctx)
    )


def theta_schur_check(shape: SkewShape, ctx: EvalContext) -> Comparison:
    return Comparison(
        f"theta-s/{shape}", theta_q(schur(shape, ctx)), hl_s_skew(shape, ctx)
    )


def syt_expansion(
    shape: SkewShape, ctx: EvalContext, qval: int | None = None
) -> TruncPoly:
    """sum over T in SYT(λ/μ) of L^(q)_{n,Des T}, optionally at q = qval."""
    total = TruncPoly.zero(ctx)
    for t in enumerate_syt(shape):
        total = total + l_q_closed(SubsetDescent(shape.size, descent_set(t)), ctx)
    return total if qval is None else total.specialize_q(qval)


def thm_sg_check(shape: SkewShape, ctx: EvalContext) -> Comparison:
    """Γ^(q) of the skew poset equals S_{λ/μ}(X; -q)."""
    return Comparison(
        f"thm-sg/{shape}", gamma_q(skew_poset(shape), ctx), hl_s_skew(shape, ctx)
    )


def thm_sl_check(shape: SkewShape, ctx: EvalContext) -> Comparison:
    """S_{λ/μ}(X; -q) equals the SYT sum of q-fundamentals."""
    return Comparison(
        f"thm-sl/{shape}", hl_s_skew(shape, ctx), syt_expansion(shape, ctx)
    )


def gessel_check(shape: SkewShape, ctx: EvalContext) -> list[Comparison]:
    """The q = 0 slice: Schur functions against the Gessel expansion."""
    s = schur(shape, ctx)
    gessel = TruncPoly.zero(ctx)
    for t in enumerate_syt(shape):
        gessel = gessel + gessel_fundamental(
            SubsetDescent(shape.size, descent_set(t)), ctx
        )
    return [
        Comparison(f"gessel/{shape}/fundamental", s, gessel),
        Comparison(f"gessel/{shape}/q=0", s, syt_expansion(shape, ctx, qval=0)),
        Comparison(f"gessel/{shape}/det", s, hl_s_skew(shape, ctx).specialize_q(0)),
    ]


def stembridge_check(shape: SkewShape, ctx: EvalContext) -> Comparison:
    """The q = 1 slice: S_{λ/μ}(X; -1) as a sum of peak functions."""
    return Comparison(
        f"stembridge/{shape}",
        hl_s_skew(shape, ctx).specialize_q(1),
        syt_expansion(shape, ctx, qval=1),
    )


def marked_correspondence_check(shape: SkewShape, ctx: EvalContext) -> list[Comparison]:
    """Enriched maps of the skew poset are the marked tableaux, weight by weight."""
    maps = enumerate_enriched(skew_poset(shape), None, ctx.m)
    marked = enumerate_marked(shape, ctx.m)
    marked_sum = sum(
        (weight_monomial(t, ctx) for t in marked), TruncPoly.zero(ctx)
    )
    return [
        Comparison(
            f"marked/{shape}/tableaux",
            sorted(enriched_to_tableau(shape, f).entries for f in maps),
            sorted(t.entries for t in marked),
        ),
        Comparison(
            f"marked/{shape}/weights", gamma_q(skew_poset(shape), ctx), marked_sum
        ),
    ]


def cauchy_check(n: int, mx: int, my: int, degree: int) -> Comparison:
    """q_n(XY; -q) = sum over λ ⊢ n of s_λ(X) S_λ(Y; -q)."""
    pair = PairContext(mx, my, degree)
    right = PairTruncPoly.zero(pair)
    for lam in partitions_of(n):
        shape = SkewShape(lam)
        right = right + PairTruncPoly.tensor(
            schur(shape, pair.x_context), hl_s_skew(shape, pair.y_context), pair
        )
    return Comparison(
        f"cauchy/n={n}", gamma_q_product(Permutation.identity(n), mx, my, degree), right
    )
