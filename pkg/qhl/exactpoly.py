"""Exact arithmetic over Z[q] and truncated sparse polynomials over it.

Three alphabets share one sparse representation:

  - ``TruncPoly``        plain alphabet x_1..x_m
  - ``SignedTruncPoly``  signed alphabet, slots ordered x_-1, x_1, x_-2, x_2, ...
  - ``PairTruncPoly``    two alphabets, x_1..x_mx followed by y_1..y_my

Every polynomial carries its evaluation context; monomials of total degree
above the context's cap ``D`` are dropped on construction, so truncation is a
ring homomorphism and all operands of one computation must share a context.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Any, ClassVar, Literal, Self, TypeVar

logger = logging.getLogger(__name__)

ExponentVector = tuple[int, ...]


class ContextMismatchError(ValueError):
    """Raised when polynomials from different evaluation contexts are combined."""


def _integers(values: Iterable[Any], what: str) -> tuple[int, ...]:
    """Exact integers only; floats, bools and strings are refused, not truncated."""
    items = tuple(values)
    if any(isinstance(v, bool) or not isinstance(v, int) for v in items):
        raise ValueError(f"{what} must be integers, got {list(items)}")
    return items


# --- Coefficient ring Z[q] ---


@dataclass(frozen=True, slots=True)
class QCoeff:
    """Polynomial in the formal parameter q; ``coeffs[i]`` is the coefficient of q^i.

    Trailing zeros are stripped on construction, so the zero element is ``()``.
    """

    coeffs: tuple[int, ...] = ()

    ZERO: ClassVar[QCoeff]
    ONE: ClassVar[QCoeff]
    Q: ClassVar[QCoeff]

    def __post_init__(self) -> None:
        coeffs = _integers(self.coeffs, "Z[q] coefficients")
        end = len(coeffs)
        while end and coeffs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", coeffs[:end])

    @classmethod
    def constant(cls, value: int) -> QCoeff:
        return cls((value,))

    @classmethod
    def q_power(cls, k: int, value: int = 1) -> QCoeff:
        """Return ``value * q**k``."""
        if k < 0:
            raise ValueError(f"negative power of q: {k}")
        return cls((0,) * k + (value,))

    @property
    def degree(self) -> int:
        """Degree in q; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: QCoeff | int) -> QCoeff:
        if not isinstance(other, QCoeff | int):
            return NotImplemented
        other = _as_qcoeff(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return QCoeff(tuple(x + y for x, y in zip(a, b)) + a[len(b) :])

    __radd__ = __add__

    def __neg__(self) -> QCoeff:
        return QCoeff(tuple(-c for c in self.coeffs))

    def __sub__(self, other: QCoeff | int) -> QCoeff:
        return self + (-_as_qcoeff(other))

    def __rsub__(self, other: QCoeff | int) -> QCoeff:
        return _as_qcoeff(other) + (-self)

    def __mul__(self, other: QCoeff | int) -> QCoeff:
        if isinstance(other, int):
            return QCoeff(tuple(c * other for c in self.coeffs))
        if not isinstance(other, QCoeff):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QCoeff.ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QCoeff(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> QCoeff:
        if exponent < 0:
            raise ValueError("QCoeff powers must be non-negative")
        result = QCoeff.ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def shift(self, k: int) -> QCoeff:
        """Multiply by q**k."""
        if not self.coeffs or k == 0:
            return self
        return QCoeff((0,) * k + self.coeffs)

    def evaluate(self, value: int | Fraction) -> int | Fraction:
        """Evaluate at q = value (Horner)."""
        result: int | Fraction = 0
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    def exact_div(self, other: QCoeff | int) -> QCoeff:
        """Divide in Z[q]; raises ArithmeticError unless the quotient is exact."""
        divisor = _as_qcoeff(other)
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.coeffs:
            return QCoeff.ZERO
        shift_top = self.degree - divisor.degree
        if shift_top < 0:
            raise ArithmeticError(f"{self} is not divisible by {divisor}")
        remainder = list(self.coeffs)
        lead = divisor.coeffs[-1]
        quotient = [0] * (shift_top + 1)
        for shift in range(shift_top, -1, -1):
            top = remainder[shift + divisor.degree]
            if top == 0:
                continue
            factor, rest = divmod(top, lead)
            if rest:
                raise ArithmeticError(f"{self} is not divisible by {divisor}")
            quotient[shift] = factor
            for i, c in enumerate(divisor.coeffs):
                remainder[shift + i] -= factor * c
        if any(remainder):
            raise ArithmeticError(f"{self} is not divisible by {divisor}")
        return QCoeff(tuple(quotient))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for power, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if power == 0:
                body = str(abs(c))
            else:
                q = "q" if power == 1 else f"q^{power}"
                body = q if abs(c) == 1 else f"{abs(c)}{q}"
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


QCoeff.ZERO = QCoeff(())
QCoeff.ONE = QCoeff((1,))
QCoeff.Q = QCoeff((0, 1))


def _as_qcoeff(value: QCoeff | int) -> QCoeff:
    if isinstance(value, QCoeff):
        return value
    if isinstance(value, int):
        return QCoeff((value,))
    raise TypeError(f"cannot use {type(value).__name__} as a Z[q] coefficient")


def qcoeff_arith(a: QCoeff, b: QCoeff, kind: Literal["add", "sub", "mul"]) -> QCoeff:
    """Exact ring arithmetic in Z[q]."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown QCoeff operation '{kind}'")


# --- Evaluation contexts ---


def _check_positive(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True, slots=True)
class EvalContext:
    """m visible variables per alphabet, monomials of total degree > D dropped."""

    m: int
    D: int

    def __post_init__(self) -> None:
        _check_positive("m", self.m)
        _check_positive("D", self.D)


@dataclass(frozen=True, slots=True)
class PairContext:
    """Two alphabets X (mx variables) and Y (my variables) sharing the cap D."""

    mx: int
    my: int
    D: int

    def __post_init__(self) -> None:
        _check_positive("mx", self.mx)
        _check_positive("my", self.my)
        _check_positive("D", self.D)

    @property
    def x_context(self) -> EvalContext:
        return EvalContext(self.mx, self.D)

    @property
    def y_context(self) -> EvalContext:
        return EvalContext(self.my, self.D)


# --- Sparse truncated polynomials ---


def graded_lex_key(exp: ExponentVector) -> tuple[int, tuple[int, ...]]:
    """Canonical term order: total degree ascending, then lexicographic (x_1 first)."""
    return sum(exp), tuple(-e for e in exp)


P = TypeVar("P", bound="_SparsePoly")


class _SparsePoly:
    """Sparse map from exponent vectors to non-zero ``QCoeff``, truncated at ``D``.

    Instances are immutable; every operation returns a new polynomial.
    """

    __slots__ = ("context", "_terms")

    context: Any
    _terms: dict[ExponentVector, QCoeff]

    def __init__(
        self,
        context: Any,
        terms: Mapping[Sequence[int], QCoeff | int] | None = None,
    ) -> None:
        nvars = self.nvars_for(context)
        cleaned: dict[ExponentVector, QCoeff] = {}
        for raw_exp, raw_coeff in (terms or {}).items():
            exp = _integers(raw_exp, "exponents")
            if len(exp) != nvars:
                raise ValueError(
                    f"exponent vector {exp} has length {len(exp)}, expected {nvars}"
                )
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            coeff = _as_qcoeff(raw_coeff)
            if not coeff or sum(exp) > context.D:
                continue
            prev = cleaned.get(exp)
            cleaned[exp] = coeff if prev is None else prev + coeff
        self.context = context
        self._terms = {e: c for e, c in cleaned.items() if c}

    # Subclass hooks

    @classmethod
    def nvars_for(cls, context: Any) -> int:
        raise NotImplementedError

    @classmethod
    def _context_to_dict(cls, context: Any) -> dict[str, int]:
        raise NotImplementedError

    @classmethod
    def _context_from_dict(cls, data: Mapping[str, int]) -> Any:
        raise NotImplementedError

    # Constructors

    @classmethod
    def _from_clean(cls, context: Any, terms: dict[ExponentVector, QCoeff]) -> Self:
        poly = cls.__new__(cls)
        poly.context = context
        poly._terms = terms
        return poly

    @classmethod
    def zero(cls, context: Any) -> Self:
        return cls._from_clean(context, {})

    @classmethod
    def constant(cls, context: Any, value: QCoeff | int = 1) -> Self:
        return cls(context, {(0,) * cls.nvars_for(context): value})

    @classmethod
    def one(cls, context: Any) -> Self:
        return cls.constant(context, 1)

    @classmethod
    def monomial(
        cls, context: Any, exp: Sequence[int], coeff: QCoeff | int = 1
    ) -> Self:
        return cls(context, {tuple(exp): coeff})

    # Accessors

    @property
    def nvars(self) -> int:
        return self.nvars_for(self.context)

    @property
    def terms(self) -> Mapping[ExponentVector, QCoeff]:
        return MappingProxyType(self._terms)

    def coefficient(self, exp: Sequence[int]) -> QCoeff:
        return self._terms.get(tuple(exp), QCoeff.ZERO)

    def sorted_terms(self) -> list[tuple[ExponentVector, QCoeff]]:
        return sorted(self._terms.items(), key=lambda item: graded_lex_key(item[0]))

    def degree(self) -> int:
        """Largest total degree of a stored term; -1 for zero."""
        return max((sum(e) for e in self._terms), default=-1)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.context == other.context and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((type(self), self.context, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.context!r}, {len(self._terms)} terms)"

    # Arithmetic

    def _check_same(self, other: _SparsePoly) -> None:
        if type(other) is not type(self) or other.context != self.context:
            raise ContextMismatchError(
                f"cannot combine {type(self).__name__} over {self.context} "
                f"with {type(other).__name__} over {other.context}"
            )

    def __add__(self, other: Self) -> Self:
        if not isinstance(other, _SparsePoly):
            return NotImplemented
        self._check_same(other)
        out = dict(self._terms)
        for exp, coeff in other._terms.items():
            total = out.get(exp, QCoeff.ZERO) + coeff
            if total:
                out[exp] = total
            else:
                out.pop(exp, None)
        return self._from_clean(self.context, out)

    def __neg__(self) -> Self:
        return self._from_clean(self.context, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Self) -> Self:
        if not isinstance(other, _SparsePoly):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: QCoeff | int) -> Self:
        factor = _as_qcoeff(factor)
        out = {}
        for exp, coeff in self._terms.items():
            product = coeff * factor
            if product:
                out[exp] = product
        return self._from_clean(self.context, out)

    def __mul__(self, other: Self | QCoeff | int) -> Self:
        if isinstance(other, QCoeff | int):
            return self.scale(other)
        if not isinstance(other, _SparsePoly):
            return NotImplemented
        self._check_same(other)
        cap = self.context.D
        right = [(exp, sum(exp), coeff) for exp, coeff in other._terms.items()]
        out: dict[ExponentVector, QCoeff] = {}
        for exp_a, coeff_a in self._terms.items():
            deg_a = sum(exp_a)
            for exp_b, deg_b, coeff_b in right:
                if deg_a + deg_b > cap:
                    continue
                exp = tuple(a + b for a, b in zip(exp_a, exp_b, strict=True))
                product = coeff_a * coeff_b
                prev = out.get(exp)
                out[exp] = product if prev is None else prev + product
        return self._from_clean(self.context, {e: c for e, c in out.items() if c})

    def __rmul__(self, other: QCoeff | int) -> Self:
        if isinstance(other, QCoeff | int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> Self:
        if exponent < 0:
            raise ValueError("polynomial powers must be non-negative")
        result = self.one(self.context)
        for _ in range(exponent):
            result = result * self
        return result

    # Derived polynomials

    def homogeneous_component(self, n: int) -> Self:
        return self._from_clean(
            self.context, {e: c for e, c in self._terms.items() if sum(e) == n}
        )

    def specialize_q(self, value: int) -> Self:
        """Substitute an integer for q; the result has constant coefficients."""
        return type(self)(
            self.context,
            {e: QCoeff.constant(c.evaluate(value)) for e, c in self._terms.items()},
        )

    def retruncate(self, degree: int) -> Self:
        """Re-express in the same alphabet with the smaller cap ``degree``."""
        if degree > self.context.D:
            raise ValueError(
                f"cannot raise the truncation cap from {self.context.D} to {degree}"
            )
        data = self._context_to_dict(self.context)
        data["D"] = degree
        context = self._context_from_dict(data)
        return self._from_clean(
            context, {e: c for e, c in self._terms.items() if sum(e) <= degree}
        )

    # Serialization

    def to_dict(self) -> dict[str, Any]:
        return {
            "context": self._context_to_dict(self.context),
            "terms": [
                {"exp": list(exp), "coeff": list(coeff.coeffs)}
                for exp, coeff in self.sorted_terms()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Self:
        try:
            context = cls._context_from_dict(data["context"])
            terms = {
                _integers(term["exp"], "exponents"): QCoeff(
                    _integers(term["coeff"], "coefficients")
                )
                for term in data["terms"]
            }
        except (KeyError, TypeError, ValueError) as err:
            raise ValueError(f"malformed polynomial payload: {err}") from err
        return cls(context, terms)

    @classmethod
    def from_json(cls, text: str) -> Self:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ValueError(f"invalid polynomial JSON: {err}") from err
        if not isinstance(data, dict):
            raise ValueError("polynomial JSON must be an object")
        return cls.from_dict(data)

    # Display

    def _variable_names(self) -> list[str]:
        raise NotImplementedError

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = self._variable_names()
        chunks = []
        for exp, coeff in self.sorted_terms():
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(names, exp, strict=True)
                if e
            ]
            monomial = "*".join(factors)
            if not monomial:
                chunks.append(f"({coeff})")
            elif coeff == QCoeff.ONE:
                chunks.append(monomial)
            else:
                chunks.append(f"({coeff})*{monomial}")
        return " + ".join(chunks)


class TruncPoly(_SparsePoly):
    """Truncated polynomial in x_1..x_m over Z[q]."""

    __slots__ = ()

    @classmethod
    def nvars_for(cls, context: EvalContext) -> int:
        return context.m

    @classmethod
    def _context_to_dict(cls, context: EvalContext) -> dict[str, int]:
        return {"m": context.m, "D": context.D}

    @classmethod
    def _context_from_dict(cls, data: Mapping[str, int]) -> EvalContext:
        return EvalContext(data["m"], data["D"])

    def _variable_names(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.context.m + 1)]

    @classmethod
    def variable(
        cls, context: EvalContext, index: int, coeff: QCoeff | int = 1
    ) -> TruncPoly:
        """The polynomial ``coeff * x_index`` (1-based)."""
        if not 1 <= index <= context.m:
            raise ValueError(f"variable x{index} outside 1..{context.m}")
        exp = [0] * context.m
        exp[index - 1] = 1
        return cls(context, {tuple(exp): coeff})

    def evaluate(
        self, xs: Sequence[int | Fraction], qval: int | Fraction
    ) -> Fraction:
        if len(xs) != self.context.m:
            raise ValueError(f"expected {self.context.m} values, got {len(xs)}")
        point = [Fraction(x) for x in xs]
        q = Fraction(qval)
        total = Fraction(0)
        for exp, coeff in self._terms.items():
            value = Fraction(coeff.evaluate(q))
            for x, e in zip(point, exp, strict=True):
                if e:
                    value *= x**e
            total += value
        return total


def signed_slot(value: int) -> int:
    """Slot of x_value in a signed exponent vector (x_-1, x_1, x_-2, x_2, ...)."""
    if value == 0:
        raise ValueError("signed variables are indexed by non-zero integers")
    return 2 * (abs(value) - 1) + (0 if value < 0 else 1)


class SignedTruncPoly(_SparsePoly):
    """Truncated polynomial in x_-m..x_-1, x_1..x_m over Z[q]."""

    __slots__ = ()

    @classmethod
    def nvars_for(cls, context: EvalContext) -> int:
        return 2 * context.m

    @classmethod
    def _context_to_dict(cls, context: EvalContext) -> dict[str, int]:
        return {"m": context.m, "D": context.D}

    @classmethod
    def _context_from_dict(cls, data: Mapping[str, int]) -> EvalContext:
        return EvalContext(data["m"], data["D"])

    def _variable_names(self) -> list[str]:
        names = []
        for i in range(1, self.context.m + 1):
            names.extend((f"x{-i}", f"x{i}"))
        return names

    @classmethod
    def variable(cls, context: EvalContext, value: int) -> SignedTruncPoly:
        if not 1 <= abs(value) <= context.m:
            raise ValueError(f"signed variable x{value} outside +-1..+-{context.m}")
        exp = [0] * (2 * context.m)
        exp[signed_slot(value)] = 1
        return cls(context, {tuple(exp): 1})

    @classmethod
    def word_monomial(
        cls, context: EvalContext, values: Iterable[int]
    ) -> SignedTruncPoly:
        """The monomial x_{v1} x_{v2} ... for a word of signed values."""
        exp = [0] * (2 * context.m)
        for value in values:
            if not 1 <= abs(value) <= context.m:
                raise ValueError(
                    f"signed variable x{value} outside +-1..+-{context.m}"
                )
            exp[signed_slot(value)] += 1
        return cls(context, {tuple(exp): 1})


class PairTruncPoly(_SparsePoly):
    """Truncated polynomial in x_1..x_mx, y_1..y_my over Z[q]."""

    __slots__ = ()

    @classmethod
    def nvars_for(cls, context: PairContext) -> int:
        return context.mx + context.my

    @classmethod
    def _context_to_dict(cls, context: PairContext) -> dict[str, int]:
        return {"mx": context.mx, "my": context.my, "D": context.D}

    @classmethod
    def _context_from_dict(cls, data: Mapping[str, int]) -> PairContext:
        return PairContext(data["mx"], data["my"], data["D"])

    def _variable_names(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.context.mx + 1)] + [
            f"y{j}" for j in range(1, self.context.my + 1)
        ]

    @classmethod
    def tensor(cls, f: TruncPoly, g: TruncPoly, context: PairContext) -> PairTruncPoly:
        """The product f(X) * g(Y)."""
        if f.context != context.x_context or g.context != context.y_context:
            raise ContextMismatchError(
                f"tensor factors over {f.context} and {g.context} "
                f"do not match {context}"
            )
        cap = context.D
        out: dict[ExponentVector, QCoeff] = {}
        for exp_f, coeff_f in f._terms.items():
            deg_f = sum(exp_f)
            for exp_g, coeff_g in g._terms.items():
                if deg_f + sum(exp_g) > cap:
                    continue
                exp = exp_f + exp_g
                product = coeff_f * coeff_g
                prev = out.get(exp)
                out[exp] = product if prev is None else prev + product
        return cls._from_clean(context, {e: c for e, c in out.items() if c})

    @classmethod
    def from_concatenated(cls, h: TruncPoly, context: PairContext) -> PairTruncPoly:
        """Read h(z_1..z_{mx+my}) as h(x_1..x_mx, y_1..y_my)."""
        if h.context != EvalContext(context.mx + context.my, context.D):
            raise ContextMismatchError(
                f"{h.context} does not concatenate to {context}"
            )
        return cls._from_clean(context, dict(h._terms))


# --- Homomorphisms and evaluation ---


def varpi(f: SignedTruncPoly) -> TruncPoly:
    """Substitute x_-i -> q x_i and x_i -> x_i."""
    m = f.context.m
    out: dict[ExponentVector, QCoeff] = {}
    for exp, coeff in f._terms.items():
        negatives = sum(exp[0::2])
        plain = tuple(exp[2 * k] + exp[2 * k + 1] for k in range(m))
        term = coeff.shift(negatives)
        prev = out.get(plain)
        out[plain] = term if prev is None else prev + term
    return TruncPoly._from_clean(f.context, {e: c for e, c in out.items() if c})


def poly_arith(
    f: P,
    g: P | QCoeff | int,
    kind: Literal["add", "sub", "mul", "scale"],
) -> P:
    """Truncated ring arithmetic; ``scale`` multiplies by a Z[q] coefficient."""
    if kind == "scale":
        if isinstance(g, _SparsePoly):
            raise TypeError("scale expects a QCoeff factor")
        return f.scale(g)
    if not isinstance(g, _SparsePoly):
        raise TypeError(f"'{kind}' expects two polynomials")
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    raise ValueError(f"unknown polynomial operation '{kind}'")


def poly_eval_rational(
    f: TruncPoly, xs: Sequence[int | Fraction], qval: int | Fraction
) -> Fraction:
    return f.evaluate(xs, qval)


# --- Matrices over exact rings ---

R = TypeVar("R")


def determinant(matrix: Sequence[Sequence[R]], one: R) -> R:
    """Laplace expansion along rows, memoising minors by their column set."""
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    if size == 0:
        return one
    zero = one - one  # type: ignore[operator]
    memo: dict[tuple[int, ...], R] = {}

    def minor(cols: tuple[int, ...]) -> R:
        row = size - len(cols)
        if len(cols) == 1:
            return matrix[row][cols[0]]
        cached = memo.get(cols)
        if cached is not None:
            return cached
        total = zero
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if not entry:
                continue
            term = entry * minor(cols[:pos] + cols[pos + 1 :])  # type: ignore[operator]
            total = total - term if pos % 2 else total + term  # type: ignore[operator]
        memo[cols] = total
        return total

    return minor(tuple(range(size)))


def fraction_free_rank(rows: Sequence[Sequence[QCoeff | int]]) -> int:
    """Rank over Q(q) by Bareiss elimination over Z[q] with full pivoting."""
    work = [[_as_qcoeff(entry) for entry in row] for row in rows]
    if not work:
        return 0
    nrows, ncols = len(work), len(work[0])
    if any(len(row) != ncols for row in work):
        raise ValueError("ragged matrix")
    previous = QCoeff.ONE
    rank = 0
    for k in range(min(nrows, ncols)):
        pivot = next(
            (
                (i, j)
                for i in range(k, nrows)
                for j in range(k, ncols)
                if work[i][j]
            ),
            None,
        )
        if pivot is None:
            break
        pi, pj = pivot
        work[k], work[pi] = work[pi], work[k]
        if pj != k:
            for row in work:
                row[k], row[pj] = row[pj], row[k]
        head = work[k][k]
        for i in range(k + 1, nrows):
            lead = work[i][k]
            for j in range(k + 1, ncols):
                work[i][j] = (head * work[i][j] - lead * work[k][j]).exact_div(
                    previous
                )
            work[i][k] = QCoeff.ZERO
        previous = head
        rank += 1
    logger.debug("fraction-free rank of %dx%d matrix: %d", nrows, ncols, rank)
    return rank
