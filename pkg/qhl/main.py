"""Command-line entry point: ``qhl compute``, ``qhl verify`` and ``qhl selftest``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from pydantic import ValidationError

from qhl import __version__
from qhl.config import Settings
from qhl.exactpoly import EvalContext, SignedTruncPoly, TruncPoly
from qhl.posets import (
    LabelledWeightedPoset,
    Permutation,
    TotalSignedOrder,
    chain_poset,
    gamma_q,
    parse_poset,
    skew_poset,
)
from qhl.quasisym import SubsetDescent, l_q_closed
from qhl.report import VerificationReport
from qhl.suites import SUITE_NAMES, run_selftest, run_suite
from qhl.symmetric import RelationR, h_signed, hl_qn, hl_s_skew, schur
from qhl.tableaux import SkewShape

logger = logging.getLogger(__name__)

COMPUTE_TARGETS = ("qn", "S", "L", "schur", "Hn", "gamma")
ORDER_NAMES = ("default", "reversed", "positives-first", "random")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# --- argparse type converters ---


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _parsed(parse: Callable[[str], object]) -> Callable[[str], object]:
    """Turn a library parser's ValueError into an argparse usage error."""

    def convert(text: str) -> object:
        try:
            return parse(text)
        except ValueError as err:
            raise argparse.ArgumentTypeError(str(err)) from None

    return convert


def _descent_elements(text: str) -> frozenset[int]:
    try:
        return frozenset(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got '{text}'"
        ) from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhl",
        description="Exact q-fundamental and Hall-Littlewood computations.",
    )
    parser.add_argument("--version", action="version", version=f"qhl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="print one polynomial as JSON")
    compute.add_argument("what", choices=COMPUTE_TARGETS)
    compute.add_argument("--n", type=_non_negative_int)
    compute.add_argument("--shape", type=_parsed(SkewShape.parse))
    compute.add_argument("--I", dest="descents", type=_descent_elements)
    compute.add_argument("--perm", type=_parsed(Permutation.parse))
    compute.add_argument("--poset", type=Path, help="poset fixture file")
    compute.add_argument("--order", choices=ORDER_NAMES, default="default")
    compute.add_argument("--m", type=_positive_int)
    compute.add_argument("--D", dest="degree", type=_positive_int)
    compute.add_argument("--at-q", dest="at_q", type=int)
    compute.add_argument("--seed", type=int)
    compute.add_argument("--text", action="store_true", help="human readable output")

    verify = sub.add_parser("verify", help="run an identity suite")
    verify.add_argument("suite", choices=SUITE_NAMES)
    verify.add_argument("--max-outer", dest="max_outer", type=_positive_int)
    verify.add_argument("--m", type=_positive_int)
    verify.add_argument("--D", dest="degree", type=_positive_int)
    verify.add_argument("--n", type=_positive_int)
    verify.add_argument("--mx", type=_positive_int)
    verify.add_argument("--my", type=_positive_int)
    verify.add_argument("--seed", type=_non_negative_int)
    verify.add_argument("--text", action="store_true", help="human readable report")

    selftest = sub.add_parser("selftest", help="run the structural invariants")
    selftest.add_argument("--seed", type=_non_negative_int)
    selftest.add_argument("--text", action="store_true", help="human readable report")
    return parser


# --- compute ---


def _require(
    parser: argparse.ArgumentParser, args: argparse.Namespace, *names: str
) -> None:
    missing = [name for name in names if getattr(args, name) is None]
    if missing:
        flags = ", ".join(f"--{name}" for name in missing)
        parser.error(f"compute {args.what} requires {flags}")


def _poset_for(
    parser: argparse.ArgumentParser, args: argparse.Namespace
) -> LabelledWeightedPoset:
    if args.poset is not None:
        try:
            return parse_poset(args.poset.read_text())
        except OSError as err:
            parser.error(f"argument --poset: cannot read {args.poset}: {err}")
        except ValueError as err:
            parser.error(f"argument --poset: {err}")
    if args.perm is not None:
        return chain_poset(args.perm)
    if args.shape is not None:
        return skew_poset(args.shape)
    parser.error("compute gamma requires one of --poset, --perm, --shape")
    raise AssertionError("unreachable")


def _compute(
    parser: argparse.ArgumentParser, args: argparse.Namespace, settings: Settings
) -> TruncPoly | SignedTruncPoly:
    ctx = EvalContext(args.m or settings.m, args.degree or settings.degree)
    seed = settings.seed if args.seed is None else args.seed
    if args.what == "qn":
        _require(parser, args, "n")
        return hl_qn(args.n, ctx)
    if args.what == "S":
        _require(parser, args, "shape")
        return hl_s_skew(args.shape, ctx)
    if args.what == "schur":
        _require(parser, args, "shape")
        return schur(args.shape, ctx)
    if args.what == "L":
        if args.perm is not None:
            idx = SubsetDescent.of(args.perm)
        else:
            _require(parser, args, "n", "descents")
            try:
                idx = SubsetDescent(args.n, args.descents)
            except ValueError as err:
                parser.error(f"argument --I: {err}")
        return l_q_closed(idx, ctx)
    if args.what == "Hn":
        _require(parser, args, "n")
        order = TotalSignedOrder.named(args.order, ctx.m, seed)
        return h_signed(args.n, RelationR(order), ctx)
    order = TotalSignedOrder.named(args.order, ctx.m, seed)
    return gamma_q(_poset_for(parser, args), ctx, order)


def _emit(report: VerificationReport, text: bool) -> int:
    print(report.to_text() if text else report.to_json())
    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        settings = Settings()
    except ValidationError as err:
        print(f"qhl: invalid QHL_* environment settings: {err}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(
        level=settings.log_level.upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if getattr(args, "seed", None) is not None:
        settings = settings.model_copy(update={"seed": args.seed})

    try:
        if args.command == "compute":
            poly = _compute(parser, args, settings)
            if args.at_q is not None:
                poly = poly.specialize_q(args.at_q)
            print(str(poly) if args.text else poly.to_json())
            return EXIT_OK
        if args.command == "verify":
            overrides = {
                "max_outer": args.max_outer,
                "m": args.m,
                "D": args.degree,
                "n": args.n,
                "mx": args.mx,
                "my": args.my,
                "seed": args.seed,
            }
            return _emit(run_suite(args.suite, settings, overrides), args.text)
        return _emit(run_selftest(settings), args.text)
    except ValueError as err:
        print(f"qhl: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
