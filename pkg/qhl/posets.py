"""Permutations, labelled weighted posets and enriched P-partitions.

An enriched map f on a labelled poset must satisfy, for every covering pair
i <_P j::

    i < j  ->  f(i) < f(j), or f(i) = f(j) > 0
    i > j  ->  f(i) < f(j), or f(i) = f(j) < 0

with ``<`` taken in a total order on the signed integers. Conditions on
covering pairs imply the conditions on all comparable pairs.
"""

from __future__ import annotations

import bisect
import itertools
import logging
import random
from collections.abc import Callable, Hashable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import TypeVar

from qhl.exactpoly import (
    EvalContext,
    ExponentVector,
    PairContext,
    PairTruncPoly,
    QCoeff,
    SignedTruncPoly,
    TruncPoly,
    signed_slot,
)
from qhl.tableaux import (
    Box,
    MarkedTableau,
    Partition,
    SkewShape,
    StandardTableau,
    signed_rank,
)

logger = logging.getLogger(__name__)

V = TypeVar("V", bound=Hashable)


# --- Permutations ---


@dataclass(frozen=True)
class Permutation:
    values: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        values = tuple(self.values)
        if sorted(values) != list(range(1, len(values) + 1)):
            raise ValueError(f"{values} is not a permutation of 1..{len(values)}")
        object.__setattr__(self, "values", values)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Parse a one-line word: ``"2 3 1"``, ``"2,3,1"`` or ``"231"``."""
        text = text.strip()
        if not text:
            return cls(())
        try:
            if any(sep in text for sep in " ,"):
                values = tuple(int(v) for v in text.replace(",", " ").split())
            else:
                values = tuple(int(c) for c in text)
        except ValueError as err:
            raise ValueError(f"invalid permutation '{text}': {err}") from err
        return cls(values)

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __call__(self, i: int) -> int:
        return self.values[i - 1]

    def inverse(self) -> Permutation:
        out = [0] * self.n
        for position, value in enumerate(self.values, start=1):
            out[value - 1] = position
        return Permutation(tuple(out))

    def compose(self, other: Permutation) -> Permutation:
        """``self ∘ other``: i -> self(other(i))."""
        if self.n != other.n:
            raise ValueError(f"cannot compose permutations of {self.n} and {other.n}")
        return Permutation(tuple(self(v) for v in other.values))

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.values)


def all_permutations(n: int) -> list[Permutation]:
    """S_n in lexicographic order."""
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def des(p: Permutation) -> frozenset[int]:
    v = p.values
    return frozenset(i for i in range(1, p.n) if v[i - 1] > v[i])


def peak(p: Permutation) -> frozenset[int]:
    v = p.values
    return frozenset(
        i for i in range(2, p.n) if v[i - 2] < v[i - 1] > v[i]
    )


def std(word: Sequence[int]) -> Permutation:
    """The permutation order-isomorphic to a word of distinct integers."""
    if len(set(word)) != len(word):
        raise ValueError(f"std needs distinct entries, got {tuple(word)}")
    ranks = {value: r for r, value in enumerate(sorted(word), start=1)}
    return Permutation(tuple(ranks[v] for v in word))


def shuffle_shifted(p: Permutation, s: Permutation) -> list[Permutation]:
    """Interleavings of p with s shifted up by p.n, in lexicographic order."""
    left = p.values
    right = tuple(p.n + v for v in s.values)
    size = len(left) + len(right)
    out = []
    for slots in itertools.combinations(range(size), len(left)):
        word = []
        li = ri = 0
        chosen = set(slots)
        for pos in range(size):
            if pos in chosen:
                word.append(left[li])
                li += 1
            else:
                word.append(right[ri])
                ri += 1
        out.append(Permutation(tuple(word)))
    return sorted(out, key=lambda perm: perm.values)


def rsk(p: Permutation) -> tuple[StandardTableau, StandardTableau]:
    """Row insertion tableau P and recording tableau Q."""
    rows: list[list[int]] = []
    record: list[list[int]] = []
    for step, value in enumerate(p.values, start=1):
        row = 0
        while True:
            if row == len(rows):
                rows.append([value])
                record.append([step])
                break
            current = rows[row]
            pos = bisect.bisect_right(current, value)
            if pos == len(current):
                current.append(value)
                record[row].append(step)
                break
            value, current[pos] = current[pos], value
            row += 1
    shape = SkewShape(Partition(tuple(len(r) for r in rows)))
    insertion = StandardTableau(shape, tuple(v for r in rows for v in r))
    recording = StandardTableau(shape, tuple(v for r in record for v in r))
    return insertion, recording


# --- Total orders on the signed integers ---


@dataclass(frozen=True)
class TotalSignedOrder:
    """A total order on {±1, ..., ±m}, listed from smallest to largest."""

    name: str
    sequence: tuple[int, ...]

    def __post_init__(self) -> None:
        m = len(self.sequence) // 2
        expected = set(range(-m, 0)) | set(range(1, m + 1))
        if len(self.sequence) % 2 or set(self.sequence) != expected:
            raise ValueError(f"order '{self.name}' is not a ranking of ±1..±{m}")

    @classmethod
    def default(cls, m: int) -> TotalSignedOrder:
        """-1 < 1 < -2 < 2 < ..."""
        return cls("default", tuple(v for k in range(1, m + 1) for v in (-k, k)))

    @classmethod
    def reversed_sign_blocks(cls, m: int) -> TotalSignedOrder:
        """1 < -1 < 2 < -2 < ..."""
        return cls(
            "reversed-sign-blocks", tuple(v for k in range(1, m + 1) for v in (k, -k))
        )

    @classmethod
    def positives_first(cls, m: int) -> TotalSignedOrder:
        """1 < 2 < ... < m < -1 < -2 < ... < -m"""
        return cls(
            "positives-first",
            tuple(range(1, m + 1)) + tuple(range(-1, -m - 1, -1)),
        )

    @classmethod
    def random(cls, m: int, seed: int) -> TotalSignedOrder:
        values = list(cls.default(m).sequence)
        random.Random(seed).shuffle(values)
        return cls(f"random-{seed}", tuple(values))

    @classmethod
    def named(cls, name: str, m: int, seed: int = 0) -> TotalSignedOrder:
        """Look up an order by CLI name: default, reversed, positives-first, random."""
        builders: dict[str, Callable[[], TotalSignedOrder]] = {
            "default": lambda: cls.default(m),
            "reversed": lambda: cls.reversed_sign_blocks(m),
            "positives-first": lambda: cls.positives_first(m),
            "random": lambda: cls.random(m, seed),
        }
        try:
            return builders[name]()
        except KeyError:
            raise ValueError(
                f"unknown order '{name}', expected one of {sorted(builders)}"
            ) from None

    @property
    def m(self) -> int:
        return len(self.sequence) // 2

    @cached_property
    def _ranks(self) -> dict[int, int]:
        return {v: r for r, v in enumerate(self.sequence)}

    def key(self, value: int) -> int:
        try:
            return self._ranks[value]
        except KeyError:
            raise ValueError(
                f"value {value} outside ±1..±{self.m} of order '{self.name}'"
            ) from None

    def values(self, max_abs: int | None = None) -> tuple[int, ...]:
        if max_abs is None:
            return self.sequence
        return tuple(v for v in self.sequence if abs(v) <= max_abs)


def standard_orders(m: int, seed: int) -> list[TotalSignedOrder]:
    """The orders exercised by the order-free suites."""
    return [
        TotalSignedOrder.default(m),
        TotalSignedOrder.reversed_sign_blocks(m),
        TotalSignedOrder.random(m, seed),
    ]


# --- Labelled weighted posets ---


def _transitive_closure(n: int, pairs: Iterable[tuple[int, int]]) -> frozenset:
    reach = [[False] * (n + 1) for _ in range(n + 1)]
    for i, j in pairs:
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"relation {i} < {j} outside 1..{n}")
        reach[i][j] = True
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(1, n + 1):
                    if row_k[j]:
                        row_i[j] = True
    return frozenset(
        (i, j) for i in range(1, n + 1) for j in range(1, n + 1) if reach[i][j]
    )


@dataclass(frozen=True)
class LabelledWeightedPoset:
    """A partial order on 1..n, stored transitively closed, with weights ε."""

    n: int
    relations: frozenset[tuple[int, int]] = frozenset()
    weights: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"poset size must be >= 0, got {self.n}")
        closed = _transitive_closure(self.n, self.relations)
        if any(i == j for i, j in closed):
            raise ValueError("relations contain a cycle")
        object.__setattr__(self, "relations", closed)
        weights = tuple(self.weights) or (1,) * self.n
        if len(weights) != self.n or any(w < 1 for w in weights):
            raise ValueError(f"weights {weights} must be {self.n} positive integers")
        object.__setattr__(self, "weights", weights)

    def less(self, i: int, j: int) -> bool:
        return (i, j) in self.relations

    def weight(self, i: int) -> int:
        return self.weights[i - 1]

    def with_weights(self, weights: Sequence[int]) -> LabelledWeightedPoset:
        return LabelledWeightedPoset(self.n, self.relations, tuple(weights))

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        rel = self.relations
        return tuple(
            sorted(
                (i, j)
                for i, j in rel
                if not any(
                    (i, k) in rel and (k, j) in rel for k in range(1, self.n + 1)
                )
            )
        )

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        """The lexicographically smallest linear extension."""
        remaining = set(range(1, self.n + 1))
        order = []
        while remaining:
            node = min(
                v
                for v in remaining
                if not any((u, v) in self.relations for u in remaining)
            )
            order.append(node)
            remaining.discard(node)
        return tuple(order)


def chain_poset(p: Permutation) -> LabelledWeightedPoset:
    """p_1 < p_2 < ... < p_n, weights 1."""
    v = p.values
    return LabelledWeightedPoset(p.n, frozenset(zip(v, v[1:])))


def skew_labels(shape: SkewShape) -> tuple[Box, ...]:
    """Box of each label 1..n: left to right, bottom row first."""
    return tuple(sorted(shape.boxes, key=lambda box: (-box[0], box[1])))


def skew_poset(shape: SkewShape) -> LabelledWeightedPoset:
    """i < j iff box i lies weakly northwest of box j."""
    label = {box: i for i, box in enumerate(skew_labels(shape), start=1)}
    covers = set()
    for (row, col), i in label.items():
        left = label.get((row, col - 1))
        if left is not None:
            covers.add((left, i))
        above = label.get((row - 1, col))
        if above is not None:
            covers.add((above, i))
    return LabelledWeightedPoset(shape.size, frozenset(covers))


def example_weighted_poset() -> LabelledWeightedPoset:
    """Five nodes, covers 3<2, 1<2, 1<4, 5<3, 5<1, weights 1,5,2,2,2."""
    return LabelledWeightedPoset(
        5, frozenset({(3, 2), (1, 2), (1, 4), (5, 3), (5, 1)}), (1, 5, 2, 2, 2)
    )


def parse_poset(text: str) -> LabelledWeightedPoset:
    """Read ``n``, then ``i < j`` covering lines, then optional ``w i k`` lines."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty poset description")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first poset line must be n, got '{lines[0]}'") from None
    pairs = set()
    weights = [1] * n
    for line in lines[1:]:
        tokens = line.split()
        try:
            if len(tokens) == 3 and tokens[1] == "<":
                pairs.add((int(tokens[0]), int(tokens[2])))
            elif len(tokens) == 3 and tokens[0] == "w":
                node, weight = int(tokens[1]), int(tokens[2])
                if not 1 <= node <= n:
                    raise ValueError(f"weight for node {node} outside 1..{n}")
                weights[node - 1] = weight
            else:
                raise ValueError(f"unrecognised poset line '{line}'")
        except ValueError as err:
            raise ValueError(f"invalid poset line '{line}': {err}") from err
    return LabelledWeightedPoset(n, frozenset(pairs), tuple(weights))


def format_poset(poset: LabelledWeightedPoset) -> str:
    lines = [str(poset.n)]
    lines.extend(f"{i} < {j}" for i, j in poset.covers)
    lines.extend(
        f"w {i} {w}" for i, w in enumerate(poset.weights, start=1) if w != 1
    )
    return "\n".join(lines)


# --- Enriched P-partitions ---


@dataclass(frozen=True)
class EnrichedMap:
    """f(1), ..., f(n) as a tuple of non-zero signed integers."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if any(v == 0 for v in self.values):
            raise ValueError("enriched maps take non-zero values")

    def __call__(self, i: int) -> int:
        return self.values[i - 1]


def _enriched_words(
    poset: LabelledWeightedPoset,
    alphabet: Sequence[V],
    key: Callable[[V], int | tuple[int, ...]],
    is_negative: Callable[[V], bool],
) -> Iterator[tuple[V, ...]]:
    """Backtrack along the linear extension, checking covers into each node."""
    order = poset.linear_extension
    lower_covers: dict[int, list[int]] = {v: [] for v in order}
    for i, j in poset.covers:
        lower_covers[j].append(i)
    keyed = [(value, key(value), is_negative(value)) for value in alphabet]
    assignment: dict[int, tuple[V, int | tuple[int, ...], bool]] = {}

    def fits(node: int, value_key: int | tuple[int, ...], value: V) -> bool:
        for lower in lower_covers[node]:
            lower_value, lower_key, lower_neg = assignment[lower]
            if lower_key < value_key:
                continue
            if lower_value != value:
                return False
            # equal values: sign must match the label direction
            if (lower < node) == lower_neg:
                return False
        return True

    def extend(pos: int) -> Iterator[tuple[V, ...]]:
        if pos == len(order):
            yield tuple(assignment[i][0] for i in range(1, poset.n + 1))
            return
        node = order[pos]
        for value, value_key, negative in keyed:
            if fits(node, value_key, value):
                assignment[node] = (value, value_key, negative)
                yield from extend(pos + 1)
        assignment.pop(node, None)

    yield from extend(0)


def _resolve_order(order: TotalSignedOrder | None, max_abs: int) -> TotalSignedOrder:
    if max_abs < 1:
        raise ValueError(f"max_abs must be >= 1, got {max_abs}")
    if order is None:
        return TotalSignedOrder.default(max_abs)
    if order.m < max_abs:
        raise ValueError(
            f"order '{order.name}' covers ±1..±{order.m}, need ±1..±{max_abs}"
        )
    return order


def enumerate_enriched(
    poset: LabelledWeightedPoset,
    order: TotalSignedOrder | None,
    max_abs: int,
) -> list[EnrichedMap]:
    order = _resolve_order(order, max_abs)
    words = _enriched_words(
        poset, order.values(max_abs), order.key, lambda v: v < 0
    )
    return [EnrichedMap(w) for w in words]


def is_enriched(
    poset: LabelledWeightedPoset, f: EnrichedMap, order: TotalSignedOrder | None = None
) -> bool:
    """Check the enriched conditions on every comparable pair (not just covers)."""
    if len(f.values) != poset.n:
        return False
    order = _resolve_order(order, max((abs(v) for v in f.values), default=1))
    for i, j in poset.relations:
        a, b = f(i), f(j)
        if order.key(a) < order.key(b):
            continue
        if a != b or (i < j) == (a < 0):
            return False
    return True


def gamma_q(
    poset: LabelledWeightedPoset,
    ctx: EvalContext,
    order: TotalSignedOrder | None = None,
) -> TruncPoly:
    """Sum over enriched maps of prod q^[f(i)<0] x_|f(i)|^ε(i)."""
    order = _resolve_order(order, ctx.m)
    terms: dict[ExponentVector, QCoeff] = {}
    for word in _enriched_words(
        poset, order.values(ctx.m), order.key, lambda v: v < 0
    ):
        exp = [0] * ctx.m
        negatives = 0
        for node, value in enumerate(word, start=1):
            exp[abs(value) - 1] += poset.weight(node)
            negatives += value < 0
        _accumulate(terms, tuple(exp), QCoeff.q_power(negatives))
    return TruncPoly(ctx, terms)


def gamma_pm(
    poset: LabelledWeightedPoset,
    ctx: EvalContext,
    order: TotalSignedOrder | None = None,
) -> SignedTruncPoly:
    """Sum over enriched maps of prod x_f(i)^ε(i) over the signed alphabet."""
    order = _resolve_order(order, ctx.m)
    terms: dict[ExponentVector, QCoeff] = {}
    for word in _enriched_words(
        poset, order.values(ctx.m), order.key, lambda v: v < 0
    ):
        exp = [0] * (2 * ctx.m)
        for node, value in enumerate(word, start=1):
            exp[signed_slot(value)] += poset.weight(node)
        _accumulate(terms, tuple(exp), QCoeff.ONE)
    return SignedTruncPoly(ctx, terms)


def gamma_q_product(p: Permutation, mx: int, my: int, degree: int) -> PairTruncPoly:
    """Γ^(q) of the chain of p over the product alphabet XY.

    Values are pairs (i, j) in [mx] x {±1..±my} ordered lexicographically, with
    j in the default signed order; a pair is negative iff j < 0.
    """
    ctx = PairContext(mx, my, degree)
    alphabet = [
        (i, j) for i in range(1, mx + 1) for j in TotalSignedOrder.default(my).sequence
    ]

    def key(pair: tuple[int, int]) -> tuple[int, int]:
        return pair[0], signed_rank(pair[1])

    terms: dict[ExponentVector, QCoeff] = {}
    for word in _enriched_words(chain_poset(p), alphabet, key, lambda v: v[1] < 0):
        exp = [0] * (mx + my)
        negatives = 0
        for i, j in word:
            exp[i - 1] += 1
            exp[mx + abs(j) - 1] += 1
            negatives += j < 0
        _accumulate(terms, tuple(exp), QCoeff.q_power(negatives))
    return PairTruncPoly(ctx, terms)


def _accumulate(
    terms: dict[ExponentVector, QCoeff], exp: ExponentVector, coeff: QCoeff
) -> None:
    prev = terms.get(exp)
    terms[exp] = coeff if prev is None else prev + coeff


# --- Skew posets and marked tableaux ---


def enriched_to_tableau(shape: SkewShape, f: EnrichedMap) -> MarkedTableau:
    """Write f(label) into the box carrying that label."""
    if len(f.values) != shape.size:
        raise ValueError(f"map of size {len(f.values)} for a shape of {shape.size}")
    by_box = dict(zip(skew_labels(shape), f.values, strict=True))
    return MarkedTableau(shape, tuple(by_box[box] for box in shape.boxes))


def tableau_to_enriched(t: MarkedTableau) -> EnrichedMap:
    return EnrichedMap(tuple(t.cells[box] for box in skew_labels(t.shape)))
