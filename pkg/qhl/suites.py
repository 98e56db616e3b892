"""Verification suites: registry, bounds and the parallel case runner.

Each suite expands its bounds into independent cases. A case is a thunk
returning one or more ``Comparison`` objects whose two sides are computed
through separate code paths (enumeration against algebra).
"""

from __future__ import annotations

import itertools
import logging
import math
import random
import time
from collections.abc import Callable, Iterable, Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction

from qhl.config import Settings
from qhl.exactpoly import (
    EvalContext,
    QCoeff,
    SignedTruncPoly,
    TruncPoly,
    varpi,
)
from qhl.posets import (
    Permutation,
    all_permutations,
    chain_poset,
    des,
    gamma_q,
    rsk,
    skew_poset,
    standard_orders,
)
from qhl.quasisym import (
    coproduct_check,
    descent_class_consistency,
    is_quasisymmetric,
    l_q_consistency,
    peak_dependence_check,
    product_alphabet_check,
    product_rule_check,
    rank_check_generic,
    rank_check_peak,
    subsets_of,
    theta_multiplicative_check,
)
from qhl.report import Comparison, VerificationReport
from qhl.symmetric import (
    RelationR,
    cauchy_check,
    det_h_identity,
    gessel_check,
    hl_qn_genfun_check,
    hl_qn_ratcheck,
    marked_correspondence_check,
    order_free_check,
    stembridge_check,
    theta_h_check,
    theta_pn_check,
    theta_schur_check,
    thm_sg_check,
    thm_sl_check,
    varpi_h_check,
)
from qhl.tableaux import SkewShape, descent_set, enumerate_skew_shapes

logger = logging.getLogger(__name__)

Case = Callable[[], Comparison | list[Comparison]]

# Refusal limits for desk-scale runs.
MAXIMA: Mapping[str, int] = {
    "max_outer": 7,
    "m": 6,
    "D": 8,
    "n": 5,
    "mx": 4,
    "my": 4,
}


class BoundsError(ValueError):
    """A suite bound outside its documented range."""

    def __init__(self, name: str, value: int, maximum: int) -> None:
        self.name = name
        self.value = value
        self.maximum = maximum
        super().__init__(
            f"--{name.replace('_', '-')} {value} is out of range (1..{maximum})"
        )


@dataclass(frozen=True)
class SuiteBounds:
    max_outer: int = 5
    m: int = 4
    D: int = 6
    n: int = 4
    mx: int = 3
    my: int = 3
    seed: int = 0

    def check(self) -> None:
        for name, maximum in MAXIMA.items():
            value = getattr(self, name)
            if not 1 <= value <= maximum:
                raise BoundsError(name, value, maximum)

    @property
    def ctx(self) -> EvalContext:
        return EvalContext(self.m, self.D)


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    build: Callable[[SuiteBounds], Iterable[Case]]
    defaults: Mapping[str, int] = field(default_factory=dict)
    # bounds the suite reads, echoed in its report
    uses: tuple[str, ...] = ()


def _shapes(bounds: SuiteBounds) -> list[SkewShape]:
    return enumerate_skew_shapes(bounds.max_outer)


# --- Suite builders ---


def _thm_sg(bounds: SuiteBounds) -> Iterator[Case]:
    ctx = bounds.ctx
    marked_ctx = EvalContext(min(bounds.m, 3), bounds.D)
    for shape in _shapes(bounds):
        yield lambda shape=shape: thm_sg_check(shape, ctx)
        if shape.outer.size <= 5:
            yield lambda shape=shape: marked_correspondence_check(shape, marked_ctx)
        yield lambda shape=shape: Comparison(
            f"quasisym/skew/{shape}",
            is_quasisymmetric(gamma_q(skew_poset(shape), ctx)),
            True,
        )


def _chain_quasisymmetric(p: Permutation, ctx: EvalContext) -> bool:
    return is_quasisymmetric(gamma_q(chain_poset(p), ctx))


def _thm_sl(bounds: SuiteBounds) -> Iterator[Case]:
    ctx = bounds.ctx
    for shape in _shapes(bounds):
        yield lambda shape=shape: thm_sl_check(shape, ctx)
    for n in range(1, min(bounds.n, bounds.m) + 1):
        for p in all_permutations(n):
            yield lambda p=p: l_q_consistency(p, ctx)
            yield lambda p=p: Comparison(
                f"quasisym/chain/{p}", _chain_quasisymmetric(p, ctx), True
            )
        yield lambda n=n: descent_class_consistency(n, ctx)


def _gessel(bounds: SuiteBounds) -> Iterator[Case]:
    ctx = bounds.ctx
    for shape in _shapes(bounds):
        yield lambda shape=shape: gessel_check(shape, ctx)


def _stembridge(bounds: SuiteBounds) -> Iterator[Case]:
    ctx = bounds.ctx
    for shape in _shapes(bounds):
        yield lambda shape=shape: stembridge_check(shape, ctx)
    for n in range(1, min(bounds.n, bounds.m) + 1):
        yield lambda n=n: peak_dependence_check(n, ctx)


def _theta(bounds: SuiteBounds) -> Iterator[Case]:
    ctx = bounds.ctx
    # degree-n expansions need n <= m and n <= D
    top = min(bounds.m, bounds.D)
    for n in range(1, min(bounds.n, top) + 1):
        yield lambda n=n: theta_h_check(n, ctx)
        yield lambda n=n: theta_pn_check(n, ctx)
    for shape in _shapes(bounds):
        if shape.size <= top:
            yield lambda shape=shape: theta_schur_check(shape, ctx)
    for a, b in itertools.combinations_with_replacement(range(1, top), 2):
        if a + b > top:
            continue
        for first in subsets_of(a):
            for second in subsets_of(b):
                yield lambda f=first, s=second: theta_multiplicative_check(f, s, ctx)


def _cauchy(bounds: SuiteBounds) -> Iterator[Case]:
    for n in range(1, bounds.n + 1):
        yield lambda n=n: cauchy_check(n, bounds.mx, bounds.my, bounds.D)
    for p in all_permutations(bounds.n):
        yield lambda p=p: product_alphabet_check(p, bounds.mx, bounds.my, bounds.D)


def _product(bounds: SuiteBounds) -> Iterator[Case]:
    ctx = bounds.ctx
    for a in range(0, bounds.n + 1):
        for b in range(1, bounds.n - a + 1):
            for p in all_permutations(a):
                for s in all_permutations(b):
                    yield lambda p=p, s=s: product_rule_check(p, s, ctx)


def _coproduct(bounds: SuiteBounds) -> Iterator[Case]:
    for n in range(1, bounds.n + 1):
        for p in all_permutations(n):
            yield lambda p=p: coproduct_check(p, bounds.mx, bounds.my, bounds.D)


def _relations(bounds: SuiteBounds) -> list[RelationR]:
    return [RelationR(order) for order in standard_orders(bounds.m, bounds.seed)]


def _order_free(bounds: SuiteBounds) -> Iterator[Case]:
    ctx = bounds.ctx
    for relation in _relations(bounds):
        name = relation.order.name
        yield lambda r=relation, name=name: [
            Comparison(f"relation/{name}/transitive", r.is_transitive(), True),
            Comparison(
                f"relation/{name}/complement-transitive",
                r.complement_is_transitive(),
                True,
            ),
            Comparison(f"relation/{name}/semitransitive", r.is_semitransitive(), True),
        ]
        for n in range(0, bounds.n + 1):
            yield lambda n=n, r=relation: order_free_check(n, r, ctx)
    for n in range(0, bounds.n + 1):
        yield lambda n=n: varpi_h_check(n, ctx)


def _det_h(bounds: SuiteBounds) -> Iterator[Case]:
    ctx = bounds.ctx
    for relation in _relations(bounds):
        for shape in _shapes(bounds):
            yield lambda shape=shape, r=relation: det_h_identity(shape, r, ctx)


def random_points(rng: random.Random, k: int) -> list[Fraction]:
    """k distinct non-zero rationals with small numerators and denominators."""
    points: list[Fraction] = []
    while len(points) < k:
        x = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if x and x not in points:
            points.append(x)
    return points


def _qn_routes(bounds: SuiteBounds) -> Iterator[Case]:
    ctx = bounds.ctx
    order = min(bounds.n, bounds.D)
    yield lambda: hl_qn_genfun_check(order, ctx)
    rng = random.Random(bounds.seed)
    for point in range(20):
        xs = random_points(rng, 4)
        t = Fraction(rng.randint(-7, 7), rng.randint(1, 4))

        def case(xs: list[Fraction] = xs, t: Fraction = t, point: int = point):
            out = []
            for n in range(0, bounds.n + 1):
                expected, actual = hl_qn_ratcheck(n, xs, t)
                label = f"qn-rational/{point:02d}/n={n}"
                out.append(Comparison(label, expected, actual))
            return out

        yield case


def _ranks(bounds: SuiteBounds) -> Iterator[Case]:
    for n in range(1, bounds.n + 1):
        yield lambda n=n: rank_check_generic(n)
        yield lambda n=n: rank_check_peak(n)


# --- Self test ---


def random_qcoeff(rng: random.Random, max_degree: int = 2) -> QCoeff:
    length = rng.randint(0, max_degree + 1)
    return QCoeff(tuple(rng.randint(-3, 3) for _ in range(length)))


def random_poly(
    rng: random.Random,
    kind: type[TruncPoly] | type[SignedTruncPoly],
    ctx: EvalContext,
    max_terms: int = 4,
) -> TruncPoly | SignedTruncPoly:
    nvars = kind.nvars_for(ctx)
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exp = [0] * nvars
        for _ in range(rng.randint(0, ctx.D)):
            exp[rng.randrange(nvars)] += 1
        terms[tuple(exp)] = random_qcoeff(rng)
    return kind(ctx, terms)


def _selftest(bounds: SuiteBounds) -> Iterator[Case]:
    rng = random.Random(bounds.seed)
    ctx = EvalContext(2, 4)
    for i in range(25):
        a, b, c = (random_qcoeff(rng) for _ in range(3))
        f, g, h = (random_poly(rng, TruncPoly, ctx) for _ in range(3))
        yield lambda i=i, a=a, b=b, c=c, f=f, g=g, h=h: [
            Comparison(f"ring/qcoeff/{i:03d}/assoc", (a * b) * c, a * (b * c)),
            Comparison(f"ring/qcoeff/{i:03d}/distrib", a * (b + c), a * b + a * c),
            Comparison(f"ring/qcoeff/{i:03d}/commute", a * b, b * a),
            Comparison(f"ring/poly/{i:03d}/assoc", (f * g) * h, f * (g * h)),
            Comparison(f"ring/poly/{i:03d}/distrib", f * (g + h), f * g + f * h),
            Comparison(f"ring/poly/{i:03d}/commute", f * g, g * f),
        ]
    for i in range(200):
        f, g = (random_poly(rng, SignedTruncPoly, ctx) for _ in range(2))
        yield lambda i=i, f=f, g=g: [
            Comparison(f"varpi/{i:03d}/product", varpi(f * g), varpi(f) * varpi(g)),
            Comparison(f"varpi/{i:03d}/sum", varpi(f + g), varpi(f) + varpi(g)),
        ]
    for i in range(20):
        f = random_poly(rng, TruncPoly, ctx)
        s = random_poly(rng, SignedTruncPoly, ctx)
        yield lambda i=i, f=f, s=s: [
            Comparison(f"serialize/{i:03d}/plain", TruncPoly.from_json(f.to_json()), f),
            Comparison(
                f"serialize/{i:03d}/signed", SignedTruncPoly.from_json(s.to_json()), s
            ),
            Comparison(
                f"serialize/{i:03d}/bytes",
                TruncPoly.from_json(f.to_json()).to_json(),
                f.to_json(),
            ),
        ]
        g = random_poly(rng, TruncPoly, ctx)
        yield lambda i=i, f=f, g=g: Comparison(
            f"truncation/{i:03d}",
            (f * g).retruncate(2),
            f.retruncate(2) * g.retruncate(2),
        )
    for n in range(1, 6):
        yield lambda n=n: _rsk_check(n)


def _rsk_check(n: int) -> list[Comparison]:
    pairs = set()
    out = []
    for p in all_permutations(n):
        insertion, recording = rsk(p)
        pairs.add((insertion, recording))
        out.append(Comparison(f"rsk/{p}/des-q", descent_set(recording), des(p)))
        out.append(
            Comparison(f"rsk/{p}/des-p", descent_set(insertion), des(p.inverse()))
        )
    out.append(Comparison(f"rsk/S{n}/bijective", len(pairs), math.factorial(n)))
    return out


# Maps suite names to their builders. Add an entry here to register a suite.
SUITES: dict[str, Suite] = {
    suite.name: suite
    for suite in (
        Suite(
            "thm-sg",
            "Γ^(q) of skew posets against the S-function determinant",
            _thm_sg,
            {"max_outer": 5, "m": 4, "D": 5},
            ("max_outer", "m", "D"),
        ),
        Suite(
            "thm-sl",
            "S-function determinant against the SYT sum of q-fundamentals",
            _thm_sl,
            {"max_outer": 6, "m": 4, "D": 6, "n": 4},
            ("max_outer", "m", "D", "n"),
        ),
        Suite(
            "gessel",
            "q = 0 slice: Schur functions and the Gessel expansion",
            _gessel,
            {"max_outer": 5, "m": 4, "D": 5},
            ("max_outer", "m", "D"),
        ),
        Suite(
            "stembridge",
            "q = 1 slice: S(X; -1) as a sum of peak functions",
            _stembridge,
            {"max_outer": 5, "m": 4, "D": 5, "n": 4},
            ("max_outer", "m", "D", "n"),
        ),
        Suite(
            "theta",
            "Θ_q on h_n, p_n, skew Schur functions and products",
            _theta,
            {"max_outer": 5, "m": 5, "D": 5, "n": 5},
            ("max_outer", "m", "D", "n"),
        ),
        Suite(
            "cauchy",
            "Cauchy identity and the product-alphabet factorisation",
            _cauchy,
            {"n": 3, "mx": 3, "my": 3, "D": 6},
            ("n", "mx", "my", "D"),
        ),
        Suite(
            "product",
            "shuffle product of q-fundamentals",
            _product,
            {"n": 4, "m": 4, "D": 4},
            ("n", "m", "D"),
        ),
        Suite(
            "coproduct",
            "coproduct of q-fundamentals by alphabet concatenation",
            _coproduct,
            {"n": 3, "mx": 3, "my": 3, "D": 3},
            ("n", "mx", "my", "D"),
        ),
        Suite(
            "order-free",
            "H_n is independent of the total order; ϖ(H_n) = q_n",
            _order_free,
            {"n": 4, "m": 3, "D": 4},
            ("n", "m", "D"),
        ),
        Suite(
            "det-h",
            "Γ^± of skew posets against det(H)",
            _det_h,
            {"max_outer": 4, "m": 3, "D": 4},
            ("max_outer", "m", "D"),
        ),
        Suite(
            "qn-routes",
            "q_n by e/h sum, generating series and rational evaluation",
            _qn_routes,
            {"n": 5, "m": 4, "D": 5},
            ("n", "m", "D"),
        ),
        Suite(
            "ranks",
            "independence of q-fundamentals and the peak subfamily at q = 1",
            _ranks,
            {"n": 4},
            ("n",),
        ),
    )
}

SELFTEST = Suite("selftest", "ring axioms, ϖ, serialization, RSK", _selftest)

SUITE_NAMES = (*SUITES, "all")


def resolve_bounds(
    suite: Suite, settings: Settings, overrides: Mapping[str, int | None]
) -> SuiteBounds:
    """Built-in defaults, then suite defaults, then explicit settings, then flags."""
    from_settings = {"m": settings.m, "D": settings.degree, "seed": settings.seed}
    values = {key: from_settings[key] for key in ("m", "D", "seed")}
    values.update(suite.defaults)
    explicit = settings.model_fields_set
    for key, setting in (("m", "m"), ("D", "degree"), ("seed", "seed")):
        if setting in explicit:
            values[key] = from_settings[key]
    values.update({k: v for k, v in overrides.items() if v is not None})
    return replace(SuiteBounds(), **values)


def _evaluate(case: Case) -> list[Comparison]:
    result = case()
    return result if isinstance(result, list) else [result]


def run_cases(
    name: str,
    cases: Iterable[Case],
    parameters: dict[str, int | str],
    settings: Settings,
) -> VerificationReport:
    started = time.perf_counter()
    cases = list(cases)
    logger.info(
        "Running suite %s: %d cases, %d threads", name, len(cases), settings.threads
    )
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        comparisons = [c for batch in pool.map(_evaluate, cases) for c in batch]
    results = []
    for comparison in comparisons:
        result = comparison.to_case()
        if result.passed:
            logger.debug("%s passed", result.identifier)
        else:
            logger.warning("%s FAILED", result.identifier)
        results.append(result)
    elapsed = time.perf_counter() - started
    report = VerificationReport(
        suite=name,
        parameters=parameters,
        cases=results,
        elapsed_seconds=round(elapsed, 3) if settings.report_timing else None,
    )
    logger.info(
        "Suite %s finished: %d/%d passed in %.2fs",
        name,
        len(results) - len(report.failures),
        len(results),
        elapsed,
    )
    return report.with_sorted_cases()


def _parameters(suite: Suite, bounds: SuiteBounds) -> dict[str, int | str]:
    values = asdict(bounds)
    parameters: dict[str, int | str] = {key: values[key] for key in suite.uses}
    parameters["seed"] = bounds.seed
    if suite.name in ("order-free", "det-h"):
        parameters["orders"] = ",".join(
            order.name for order in standard_orders(bounds.m, bounds.seed)
        )
    if "m" in suite.uses:
        parameters["truncation"] = f"x_i = 0 for i > {bounds.m}, degree <= {bounds.D}"
    return parameters


def run_suite(
    name: str,
    settings: Settings,
    overrides: Mapping[str, int | None] | None = None,
) -> VerificationReport:
    """Run one registered suite, or every suite for ``all``."""
    overrides = overrides or {}
    if name == "all":
        return _run_all(settings, overrides)
    try:
        suite = SUITES[name]
    except KeyError:
        valid = ", ".join(SUITE_NAMES)
        raise ValueError(f"Invalid suite '{name}'. Must be one of: {valid}") from None
    bounds = resolve_bounds(suite, settings, overrides)
    bounds.check()
    return run_cases(name, suite.build(bounds), _parameters(suite, bounds), settings)


def _run_all(
    settings: Settings, overrides: Mapping[str, int | None]
) -> VerificationReport:
    cases: list[Case] = []
    parameters: dict[str, int | str] = {}
    for suite in SUITES.values():
        bounds = resolve_bounds(suite, settings, overrides)
        bounds.check()
        cases.extend(suite.build(bounds))
        for key, value in _parameters(suite, bounds).items():
            parameters[f"{suite.name}.{key}"] = value
    return run_cases("all", cases, parameters, settings)


def run_selftest(settings: Settings) -> VerificationReport:
    bounds = SuiteBounds(seed=settings.seed)
    return run_cases(
        SELFTEST.name, SELFTEST.build(bounds), {"seed": bounds.seed}, settings
    )

