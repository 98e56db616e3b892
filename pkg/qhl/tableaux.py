"""Partitions, skew shapes and the standard / semistandard / marked tableau families.

Boxes are addressed as ``(row, col)`` with row 1 at the top (English convention).
Signed entries compare in the order -1 < 1 < -2 < 2 < ...
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

from qhl.exactpoly import EvalContext, QCoeff, TruncPoly

logger = logging.getLogger(__name__)

Box = tuple[int, int]


def signed_rank(value: int) -> int:
    """Position of a non-zero integer in -1 < 1 < -2 < 2 < ..."""
    if value == 0:
        raise ValueError("signed entries must be non-zero")
    return 2 * abs(value) - (1 if value < 0 else 0)


# --- Partitions and shapes ---


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> Partition:
        """Parse ``"6,4,2"``; the empty string is the empty partition."""
        text = text.strip()
        if not text:
            return cls(())
        try:
            return cls(tuple(int(p) for p in text.split(",")))
        except ValueError as err:
            raise ValueError(f"invalid partition '{text}': {err}") from err

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """The i-th part (1-based), 0 beyond the length."""
        return self.parts[i - 1] if i <= len(self.parts) else 0

    def contains(self, other: Partition) -> bool:
        return len(other) <= len(self) and all(
            b <= a for a, b in zip(self.parts, other.parts)
        )

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order ((n) first)."""
    if n == 0:
        yield Partition(())
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first, *rest.parts))


@dataclass(frozen=True)
class SkewShape:
    outer: Partition
    inner: Partition = Partition(())

    def __post_init__(self) -> None:
        if not self.outer.contains(self.inner):
            raise ValueError(f"inner partition {self.inner} not inside {self.outer}")

    @classmethod
    def parse(cls, text: str) -> SkewShape:
        """Parse ``"6,4,2,1,1/2,1"``; ``"2/"`` and ``"2"`` are straight shapes."""
        outer, _, inner = text.partition("/")
        return cls(Partition.parse(outer), Partition.parse(inner))

    @property
    def size(self) -> int:
        return self.outer.size - self.inner.size

    @property
    def is_straight(self) -> bool:
        return not self.inner.parts

    @cached_property
    def boxes(self) -> tuple[Box, ...]:
        """Boxes in reading order: top row first, left to right."""
        return tuple(
            (row, col)
            for row in range(1, len(self.outer) + 1)
            for col in range(self.inner.part(row) + 1, self.outer.part(row) + 1)
        )

    def __contains__(self, box: object) -> bool:
        if not isinstance(box, tuple) or len(box) != 2:
            return False
        row, col = box
        return (
            1 <= row <= len(self.outer)
            and self.inner.part(row) < col <= self.outer.part(row)
        )

    def __str__(self) -> str:
        return f"{self.outer}/{self.inner}"


def enumerate_skew_shapes(max_outer_size: int) -> list[SkewShape]:
    """All λ/μ with |λ| <= max_outer_size, μ ⊆ λ and at least one box."""
    if max_outer_size < 1:
        raise ValueError(f"max_outer_size must be >= 1, got {max_outer_size}")
    shapes = []
    for size in range(1, max_outer_size + 1):
        for outer in partitions_of(size):
            for inner_size in range(size):
                for inner in partitions_of(inner_size):
                    if outer.contains(inner):
                        shapes.append(SkewShape(outer, inner))
    return shapes


# --- Tableaux ---


@dataclass(frozen=True)
class _Tableau:
    """A filling of ``shape.boxes`` (reading order) by integers."""

    shape: SkewShape
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        if len(self.entries) != self.shape.size:
            raise ValueError(
                f"{len(self.entries)} entries for a shape with {self.shape.size} boxes"
            )
        self._validate()

    def _validate(self) -> None:
        raise NotImplementedError

    @cached_property
    def cells(self) -> dict[Box, int]:
        return dict(zip(self.shape.boxes, self.entries, strict=True))

    def entry(self, row: int, col: int) -> int:
        return self.cells[(row, col)]

    def _neighbour_pairs(self) -> Iterator[tuple[int, int, bool]]:
        """Yield (earlier, later, same_row) for each pair of adjacent boxes."""
        cells = self.cells
        for (row, col), value in cells.items():
            right = cells.get((row, col + 1))
            if right is not None:
                yield value, right, True
            below = cells.get((row + 1, col))
            if below is not None:
                yield value, below, False

    def __str__(self) -> str:
        return format_tableau(self)


class StandardTableau(_Tableau):
    def _validate(self) -> None:
        if sorted(self.entries) != list(range(1, self.shape.size + 1)):
            raise ValueError(f"entries {self.entries} are not a permutation of 1..n")
        for a, b, _ in self._neighbour_pairs():
            if a >= b:
                raise ValueError(f"standard tableau not increasing at {a}, {b}")


class SemistandardTableau(_Tableau):
    def _validate(self) -> None:
        if any(v < 1 for v in self.entries):
            raise ValueError("semistandard entries must be positive")
        for a, b, same_row in self._neighbour_pairs():
            if a > b or (not same_row and a == b):
                raise ValueError(f"semistandard conditions fail at {a}, {b}")


class MarkedTableau(_Tableau):
    def _validate(self) -> None:
        for a, b, same_row in self._neighbour_pairs():
            rank_a, rank_b = signed_rank(a), signed_rank(b)
            if rank_a > rank_b:
                raise ValueError(f"marked entries decrease at {a}, {b}")
            # weak increase makes equal entries contiguous: adjacency suffices
            if a == b and (a < 0) == same_row:
                where = "row" if same_row else "column"
                raise ValueError(f"{where} repeats the entry {a}")


# --- Enumeration ---


def _fill(
    shape: SkewShape,
    candidates: Sequence[int],
    allowed: Callable[[int, int | None, int | None, set[int]], bool],
) -> Iterator[tuple[int, ...]]:
    """Backtrack over ``shape.boxes`` in reading order.

    ``allowed(value, left, above, used)`` decides whether a box may take ``value``
    given its filled left and upper neighbours (``None`` when absent).
    """
    boxes = shape.boxes
    index = {box: i for i, box in enumerate(boxes)}
    left_of = [index.get((r, c - 1)) for r, c in boxes]
    above_of = [index.get((r - 1, c)) for r, c in boxes]
    filling: list[int] = []
    used: set[int] = set()

    def extend(pos: int) -> Iterator[tuple[int, ...]]:
        if pos == len(boxes):
            yield tuple(filling)
            return
        li, ai = left_of[pos], above_of[pos]
        left = filling[li] if li is not None else None
        above = filling[ai] if ai is not None else None
        for value in candidates:
            if allowed(value, left, above, used):
                filling.append(value)
                used.add(value)
                yield from extend(pos + 1)
                used.discard(value)
                filling.pop()

    yield from extend(0)


def enumerate_syt(shape: SkewShape) -> list[StandardTableau]:
    n = shape.size

    def allowed(value: int, left: int | None, above: int | None, used: set) -> bool:
        return (
            value not in used
            and (left is None or left < value)
            and (above is None or above < value)
        )

    return [
        StandardTableau(shape, f)
        for f in _fill(shape, range(1, n + 1), allowed)
    ]


def enumerate_ssyt(shape: SkewShape, max_entry: int) -> list[SemistandardTableau]:
    if max_entry < 1:
        raise ValueError(f"max_entry must be >= 1, got {max_entry}")

    def allowed(value: int, left: int | None, above: int | None, _used: set) -> bool:
        return (left is None or left <= value) and (above is None or above < value)

    return [
        SemistandardTableau(shape, f)
        for f in _fill(shape, range(1, max_entry + 1), allowed)
    ]


def marked_alphabet(max_abs: int) -> list[int]:
    """-1, 1, -2, 2, ..., -max_abs, max_abs."""
    return [v for k in range(1, max_abs + 1) for v in (-k, k)]


def enumerate_marked(shape: SkewShape, max_abs: int) -> list[MarkedTableau]:
    if max_abs < 1:
        raise ValueError(f"max_abs must be >= 1, got {max_abs}")

    def allowed(value: int, left: int | None, above: int | None, _used: set) -> bool:
        rank = signed_rank(value)
        if left is not None:
            left_rank = signed_rank(left)
            if left_rank > rank or (left == value and value < 0):
                return False
        if above is not None:
            above_rank = signed_rank(above)
            if above_rank > rank or (above == value and value > 0):
                return False
        return True

    return [
        MarkedTableau(shape, f)
        for f in _fill(shape, marked_alphabet(max_abs), allowed)
    ]


# --- Statistics ---


def descent_set(t: StandardTableau) -> frozenset[int]:
    """{i : i lies in a strictly higher row than i + 1}."""
    row_of = {value: row for (row, _), value in t.cells.items()}
    return frozenset(
        i for i in range(1, t.shape.size) if row_of[i] < row_of[i + 1]
    )


def neg(t: MarkedTableau) -> int:
    return sum(1 for v in t.entries if v < 0)


def weight_monomial(
    t: MarkedTableau | SemistandardTableau, ctx: EvalContext
) -> TruncPoly:
    """prod x_|v| over the entries, times q^neg(t) for marked tableaux."""
    exp = [0] * ctx.m
    for value in t.entries:
        if abs(value) > ctx.m:
            raise ValueError(f"entry {value} exceeds the {ctx.m} available variables")
        exp[abs(value) - 1] += 1
    coeff = QCoeff.q_power(neg(t)) if isinstance(t, MarkedTableau) else QCoeff.ONE
    return TruncPoly.monomial(ctx, exp, coeff)


def standardize(t: MarkedTableau | SemistandardTableau) -> StandardTableau:
    """Relabel by 1..n keeping the signed order of distinct entries.

    Equal negative entries are numbered top to bottom, equal positive entries
    left to right.
    """

    def key(item: tuple[Box, int]) -> tuple[int, int, int]:
        (row, col), value = item
        if value < 0:
            return signed_rank(value), row, col
        return signed_rank(value), col, row

    order = sorted(t.cells.items(), key=key)
    label = {box: i for i, (box, _) in enumerate(order, start=1)}
    return StandardTableau(t.shape, tuple(label[box] for box in t.shape.boxes))


# --- Text fixtures ---


def format_tableau(t: _Tableau) -> str:
    """One row per line, inner boxes as '.', entries space-separated."""
    lines = []
    for row in range(1, len(t.shape.outer) + 1):
        cells = ["."] * t.shape.inner.part(row)
        cells.extend(
            str(t.entry(row, col))
            for col in range(t.shape.inner.part(row) + 1, t.shape.outer.part(row) + 1)
        )
        lines.append(" ".join(cells))
    return "\n".join(lines)


def parse_tableau(
    text: str, kind: type[_Tableau] = StandardTableau
) -> _Tableau:
    """Inverse of ``format_tableau``; the shape is read off the layout."""
    rows = [line.split() for line in text.strip().splitlines() if line.strip()]
    outer = Partition(tuple(len(r) for r in rows))
    leading = [r.count(".") for r in rows]
    while leading and not leading[-1]:
        leading.pop()
    inner = Partition(tuple(leading))
    entries: list[int] = []
    for r in rows:
        dots = r.count(".")
        if r[:dots] != ["."] * dots:
            raise ValueError(f"inner boxes must lead their row: {' '.join(r)}")
        try:
            entries.extend(int(v) for v in r[dots:])
        except ValueError as err:
            raise ValueError(f"invalid tableau entry: {err}") from err
    return kind(SkewShape(outer, inner), tuple(entries))
