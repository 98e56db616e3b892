"""Quasisymmetric functions: monomial basis, q-fundamental functions and Θ_q.

``L^(q)_{n,I}`` is computed in closed form as a sum over weakly increasing
index sequences i_1 <= ... <= i_n with i_{j-1} < i_{j+1} at every peak j of I,
each weighted by q^#{j in I : i_j = i_{j+1}} (1 + q)^#{distinct indices}.
The peaks of I are the peaks of any permutation with descent set I:
{j in I : j - 1 not in I, 2 <= j <= n - 1}.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections import defaultdict
from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Any

from qhl.exactpoly import (
    EvalContext,
    ExponentVector,
    PairContext,
    PairTruncPoly,
    QCoeff,
    TruncPoly,
    fraction_free_rank,
)
from qhl.posets import (
    Permutation,
    all_permutations,
    chain_poset,
    des,
    gamma_q,
    gamma_q_product,
    peak,
    shuffle_shifted,
    std,
)
from qhl.report import Comparison

logger = logging.getLogger(__name__)


# --- Index sets ---


@dataclass(frozen=True)
class SubsetDescent:
    """A descent set I ⊆ [n-1]."""

    n: int
    I: frozenset[int] = frozenset()  # noqa: E741

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        subset = frozenset(self.I)
        if any(not 1 <= i <= self.n - 1 for i in subset):
            raise ValueError(f"{sorted(subset)} is not a subset of [1, {self.n - 1}]")
        object.__setattr__(self, "I", subset)

    @classmethod
    def parse(cls, n: int, text: str) -> SubsetDescent:
        """Parse ``"1,3"``; the empty string is the empty set."""
        text = text.strip()
        try:
            elements = frozenset(int(v) for v in text.split(",") if text)
        except ValueError as err:
            raise ValueError(f"invalid descent set '{text}': {err}") from err
        return cls(n, elements)

    @classmethod
    def of(cls, p: Permutation) -> SubsetDescent:
        return cls(p.n, des(p))

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(sorted(self.I))

    @property
    def peaks(self) -> frozenset[int]:
        return frozenset(
            j for j in self.I if j - 1 not in self.I and 2 <= j <= self.n - 1
        )

    @property
    def is_peak_admissible(self) -> bool:
        """I ∪ {0} has no two consecutive elements."""
        return 1 not in self.I and not any(j + 1 in self.I for j in self.I)

    def to_composition(self) -> Composition:
        cuts = (0, *self.elements, self.n)
        if not self.n:
            return Composition(())
        return Composition(tuple(b - a for a, b in zip(cuts, cuts[1:])))

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.elements) + "}"


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        if any(p < 1 for p in self.parts):
            raise ValueError(f"composition parts must be positive: {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def to_descent(self) -> SubsetDescent:
        sums = tuple(itertools.accumulate(self.parts))
        return SubsetDescent(self.n, frozenset(sums[:-1]))

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def subsets_of(n: int) -> list[SubsetDescent]:
    """All I ⊆ [n-1], ordered by size then lexicographically."""
    ground = range(1, n)
    return [
        SubsetDescent(n, frozenset(c))
        for k in range(max(n, 1))
        for c in itertools.combinations(ground, k)
    ]


def compositions_of(n: int) -> list[Composition]:
    return [s.to_composition() for s in subsets_of(n)]


@dataclass(frozen=True)
class QSymExpansion:
    """Coefficients of a degree-n quasisymmetric function in a basis.

    ``basis`` is ``"L0"`` for Gessel's fundamental functions or ``"Lq"`` for
    the q-fundamental functions. Reading L0 coefficients against the Lq basis
    is exactly Θ_q.
    """

    n: int
    coeffs: Mapping[SubsetDescent, QCoeff] = field(default_factory=dict)
    basis: str = "L0"

    def __post_init__(self) -> None:
        if self.basis not in FUNDAMENTAL_BASES:
            raise ValueError(
                f"Invalid basis '{self.basis}'. "
                f"Must be one of: {', '.join(FUNDAMENTAL_BASES)}"
            )
        stray = [idx for idx in self.coeffs if idx.n != self.n]
        if stray:
            raise ValueError(
                f"descent sets {[str(idx) for idx in stray]} do not have n={self.n}"
            )

    def coefficient(self, idx: SubsetDescent) -> QCoeff:
        return self.coeffs.get(idx, QCoeff.ZERO)

    def to_dict(self) -> dict[str, Any]:
        ordered = sorted(self.coeffs.items(), key=lambda item: item[0].elements)
        return {
            "n": self.n,
            "basis": self.basis,
            "coeffs": [
                {"I": list(idx.elements), "coeff": list(coeff.coeffs)}
                for idx, coeff in ordered
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSymExpansion):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self) -> int:
        return hash(self.to_json())


# --- Bases ---


def monomial_qsym(alpha: Composition, ctx: EvalContext) -> TruncPoly:
    """M_alpha: sum over i_1 < ... < i_p of x_{i_1}^alpha_1 ... x_{i_p}^alpha_p."""
    terms: dict[ExponentVector, QCoeff] = {}
    for positions in itertools.combinations(range(ctx.m), len(alpha.parts)):
        exp = [0] * ctx.m
        for pos, part in zip(positions, alpha.parts, strict=True):
            exp[pos] = part
        terms[tuple(exp)] = QCoeff.ONE
    return TruncPoly(ctx, terms)


def _increasing_sequences(n: int, m: int) -> Iterator[tuple[int, ...]]:
    return itertools.combinations_with_replacement(range(1, m + 1), n)


@lru_cache(maxsize=None)
def l_q_closed(idx: SubsetDescent, ctx: EvalContext) -> TruncPoly:
    """L^(q)_{n,I} by its closed sum formula."""
    n = idx.n
    peaks = idx.peaks
    descents = idx.I
    terms: dict[ExponentVector, QCoeff] = {}
    one_plus_q = QCoeff((1, 1))
    for seq in _increasing_sequences(n, ctx.m):
        # seq is 0-indexed: seq[j - 1] is i_j
        if any(seq[j - 2] >= seq[j] for j in peaks):
            continue
        ties = sum(1 for j in descents if seq[j - 1] == seq[j])
        exp = [0] * ctx.m
        for v in seq:
            exp[v - 1] += 1
        distinct = sum(1 for e in exp if e)
        coeff = QCoeff.q_power(ties) * one_plus_q**distinct
        key = tuple(exp)
        prev = terms.get(key)
        terms[key] = coeff if prev is None else prev + coeff
    return TruncPoly(ctx, terms)


@lru_cache(maxsize=None)
def gessel_fundamental(idx: SubsetDescent, ctx: EvalContext) -> TruncPoly:
    """L^(0)_{n,I}: weakly increasing sequences, strict exactly at positions in I."""
    terms: dict[ExponentVector, QCoeff] = defaultdict(lambda: QCoeff.ZERO)
    for seq in _increasing_sequences(idx.n, ctx.m):
        if any(seq[j - 1] == seq[j] for j in idx.I):
            continue
        exp = [0] * ctx.m
        for v in seq:
            exp[v - 1] += 1
        terms[tuple(exp)] = terms[tuple(exp)] + QCoeff.ONE
    return TruncPoly(ctx, terms)


# Maps a QSymExpansion basis tag to its basis elements. Add an entry here
# to expand against another fundamental-type basis.
FUNDAMENTAL_BASES: dict[str, Callable[[SubsetDescent, EvalContext], TruncPoly]] = {
    "L0": gessel_fundamental,
    "Lq": l_q_closed,
}


def l_q_of(p: Permutation, ctx: EvalContext) -> TruncPoly:
    return l_q_closed(SubsetDescent.of(p), ctx)


# --- Monomial expansion and quasisymmetry ---


def _packed(exp: ExponentVector) -> tuple[int, ...]:
    return tuple(e for e in exp if e)


def _expand_monomial_unchecked(f: TruncPoly) -> dict[Composition, QCoeff]:
    coeffs: dict[Composition, QCoeff] = {}
    for exp, coeff in f.terms.items():
        parts = _packed(exp)
        if exp[: len(parts)] == parts:
            coeffs[Composition(parts)] = coeff
    return coeffs


def _build_monomial(
    coeffs: Mapping[Composition, QCoeff], ctx: EvalContext
) -> TruncPoly:
    total = TruncPoly.zero(ctx)
    for alpha, coeff in coeffs.items():
        total = total + monomial_qsym(alpha, ctx).scale(coeff)
    return total


def is_quasisymmetric(f: TruncPoly) -> bool:
    """Every coefficient equals that of its front-packed monomial."""
    return f == _build_monomial(_expand_monomial_unchecked(f), f.context)


def expand_monomial(f: TruncPoly) -> dict[Composition, QCoeff]:
    coeffs = _expand_monomial_unchecked(f)
    if f != _build_monomial(coeffs, f.context):
        raise ValueError("input is not quasisymmetric")
    return coeffs


def expand_fundamental_q0(f: TruncPoly, n: int) -> QSymExpansion:
    """Coefficients c_I with f = sum_I c_I L^(0)_{n,I}.

    Uses c_I = sum over J ⊆ I of (-1)^|I - J| a_J, where a_J is the monomial
    coefficient of the composition with partial sums J.
    """
    ctx = f.context
    if ctx.m < n:
        raise ValueError(
            f"degree-{n} expansion needs m >= {n} variables, context has {ctx.m}"
        )
    if ctx.D < n:
        raise ValueError(f"degree-{n} expansion needs D >= {n}, context has {ctx.D}")
    if f != f.homogeneous_component(n):
        raise ValueError(f"input is not homogeneous of degree {n}")
    monomial = {
        alpha.to_descent().I: coeff for alpha, coeff in expand_monomial(f).items()
    }
    coeffs: dict[SubsetDescent, QCoeff] = {}
    for idx in subsets_of(n):
        total = QCoeff.ZERO
        for k in range(len(idx.I) + 1):
            sign = -1 if (len(idx.I) - k) % 2 else 1
            for sub in itertools.combinations(idx.elements, k):
                a = monomial.get(frozenset(sub))
                if a:
                    total = total + a * sign
        if total:
            coeffs[idx] = total
    return QSymExpansion(n, coeffs)


def build_from_expansion(expansion: QSymExpansion, ctx: EvalContext) -> TruncPoly:
    """sum_I c_I B_{n,I} where B is the basis named by ``expansion.basis``."""
    basis = FUNDAMENTAL_BASES[expansion.basis]
    total = TruncPoly.zero(ctx)
    for idx, coeff in expansion.coeffs.items():
        total = total + basis(idx, ctx).scale(coeff)
    return total


# --- The homomorphism Θ_q ---


def theta_q_apply(
    f: TruncPoly, n: int, ctx: EvalContext | None = None
) -> TruncPoly:
    """Θ_q on a homogeneous degree-n quasisymmetric function."""
    expansion = expand_fundamental_q0(f, n)
    return build_from_expansion(replace(expansion, basis="Lq"), ctx or f.context)


def theta_q(f: TruncPoly) -> TruncPoly:
    """Θ_q on any quasisymmetric input, applied degree by degree."""
    total = f.homogeneous_component(0)
    degrees = sorted({sum(exp) for exp in f.terms} - {0})
    for n in degrees:
        total = total + theta_q_apply(f.homogeneous_component(n), n)
    return total


# --- Identity checks ---


def l_q_consistency(p: Permutation, ctx: EvalContext) -> Comparison:
    """Γ^(q) of the chain of p against the closed formula for Des(p)."""
    return Comparison(
        f"lq/{p}",
        gamma_q(chain_poset(p), ctx),
        l_q_closed(SubsetDescent.of(p), ctx),
    )


def descent_class_consistency(n: int, ctx: EvalContext) -> list[Comparison]:
    """Γ^(q) of chains is constant on each descent class of S_n."""
    return _class_consistency(
        all_permutations(n),
        lambda p: SubsetDescent.of(p),
        lambda p: gamma_q(chain_poset(p), ctx),
        "des-class",
    )


def peak_dependence_check(n: int, ctx: EvalContext) -> list[Comparison]:
    """At q = 1, L_{n,Des(p)} depends only on Peak(p)."""
    return _class_consistency(
        all_permutations(n),
        lambda p: tuple(sorted(peak(p))),
        lambda p: l_q_of(p, ctx).specialize_q(1),
        "peak-class",
    )


def _class_consistency(
    perms: Iterable[Permutation],
    key: Callable[[Permutation], Hashable],
    value: Callable[[Permutation], TruncPoly],
    label: str,
) -> list[Comparison]:
    representatives: dict[Any, tuple[Permutation, TruncPoly]] = {}
    comparisons = []
    for p in perms:
        k = key(p)
        current = value(p)
        if k not in representatives:
            representatives[k] = (p, current)
            continue
        first, expected = representatives[k]
        comparisons.append(Comparison(f"{label}/{first}~{p}", current, expected))
    return comparisons


def product_rule_check(
    p: Permutation, s: Permutation, ctx: EvalContext
) -> Comparison:
    """L_p L_s = sum over the shifted shuffles of p and s."""
    left = gamma_q(chain_poset(p), ctx) * gamma_q(chain_poset(s), ctx)
    right = TruncPoly.zero(ctx)
    for tau in shuffle_shifted(p, s):
        right = right + l_q_of(tau, ctx)
    return Comparison(f"product/{p}|{s}", left, right)


def coproduct_check(p: Permutation, mx: int, my: int, degree: int) -> Comparison:
    """L_p on x_1 < ... < x_mx < y_1 < ... < y_my splits over prefixes of p."""
    pair = PairContext(mx, my, degree)
    whole = gamma_q(chain_poset(p), EvalContext(mx + my, degree))
    left = PairTruncPoly.from_concatenated(whole, pair)
    right = PairTruncPoly.zero(pair)
    for i in range(p.n + 1):
        prefix, suffix = std(p.values[:i]), std(p.values[i:])
        right = right + PairTruncPoly.tensor(
            l_q_of(prefix, pair.x_context), l_q_of(suffix, pair.y_context), pair
        )
    return Comparison(f"coproduct/{p}", left, right)


def product_alphabet_check(p: Permutation, mx: int, my: int, degree: int) -> Comparison:
    """L^(q)_p(XY) = sum over t ∘ s = p of L^(0)_s(X) L^(q)_t(Y)."""
    pair = PairContext(mx, my, degree)
    left = gamma_q_product(p, mx, my, degree)
    right = PairTruncPoly.zero(pair)
    for s in all_permutations(p.n):
        t = p.compose(s.inverse())
        right = right + PairTruncPoly.tensor(
            gessel_fundamental(SubsetDescent.of(s), pair.x_context),
            l_q_of(t, pair.y_context),
            pair,
        )
    return Comparison(f"product-alphabet/{p}", left, right)


def theta_multiplicative_check(
    first: SubsetDescent, second: SubsetDescent, ctx: EvalContext
) -> Comparison:
    """Θ_q(L0_I L0_J) = L^(q)_I L^(q)_J."""
    product = gessel_fundamental(first, ctx) * gessel_fundamental(second, ctx)
    return Comparison(
        f"theta-mult/{first.n}{first}x{second.n}{second}",
        theta_q(product),
        l_q_closed(first, ctx) * l_q_closed(second, ctx),
    )


def _family_matrix(n: int, qval: int | None = None) -> list[list[QCoeff]]:
    ctx = EvalContext(max(n, 1), max(n, 1))
    columns = compositions_of(n)
    rows = []
    for idx in subsets_of(n):
        f = l_q_closed(idx, ctx)
        if qval is not None:
            f = f.specialize_q(qval)
        coeffs = expand_monomial(f)
        rows.append([coeffs.get(alpha, QCoeff.ZERO) for alpha in columns])
    return rows


def rank_check_generic(n: int) -> Comparison:
    """Rank of {L^(q)_{n,I}} over Q(q) equals 2^(n-1)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rank = fraction_free_rank(_family_matrix(n))
    logger.debug("generic rank for n=%d: %d", n, rank)
    return Comparison(f"rank-generic/n={n}", rank, 2 ** (n - 1))


def rank_check_peak(n: int) -> list[Comparison]:
    """At q = 1 the peak-admissible subfamily is independent and spans the family."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rows = _family_matrix(n, qval=1)
    admissible = [
        row
        for idx, row in zip(subsets_of(n), rows, strict=True)
        if idx.is_peak_admissible
    ]
    full_rank = fraction_free_rank(rows)
    sub_rank = fraction_free_rank(admissible)
    logger.debug(
        "peak ranks for n=%d: family %d, admissible %d of %d",
        n,
        full_rank,
        sub_rank,
        len(admissible),
    )
    return [
        Comparison(f"rank-peak/n={n}/independent", sub_rank, len(admissible)),
        Comparison(f"rank-peak/n={n}/spans", full_rank, sub_rank),
    ]
