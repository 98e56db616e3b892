"""Verification results, report models and their JSON / text renderings."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, StrictUndefined
from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

_PKG_DIR = Path(__file__).parent
_templates = Environment(
    loader=FileSystemLoader(_PKG_DIR / "templates"),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)

DIGEST_LENGTH = 16


def digest(value: Any) -> str:
    """Short SHA-256 of the canonical JSON of a polynomial, or of ``str(value)``."""
    to_json = getattr(value, "to_json", None)
    payload = to_json() if callable(to_json) else str(value)
    return hashlib.sha256(payload.encode()).hexdigest()[:DIGEST_LENGTH]


class CaseResult(BaseModel):
    identifier: str
    passed: bool
    left: str
    right: str


class VerificationReport(BaseModel):
    """Outcome of one suite run; fails iff any case fails."""

    suite: str
    parameters: dict[str, int | str]
    cases: list[CaseResult] = Field(default_factory=list)
    elapsed_seconds: float | None = None

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    @property
    def failures(self) -> list[CaseResult]:
        return [case for case in self.cases if not case.passed]

    def with_sorted_cases(self) -> VerificationReport:
        return self.model_copy(
            update={"cases": sorted(self.cases, key=lambda c: c.identifier)}
        )

    def to_json(self) -> str:
        payload = self.with_sorted_cases().model_dump(exclude_none=True)
        payload["passed"] = self.passed
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_text(self) -> str:
        template = _templates.get_template("report.txt.j2")
        return template.render(report=self.with_sorted_cases(), passed=self.passed)


@dataclass(frozen=True)
class Comparison:
    """Two independently computed sides of an identity."""

    identifier: str
    left: Any
    right: Any

    @property
    def passed(self) -> bool:
        return bool(self.left == self.right)

    def __bool__(self) -> bool:
        return self.passed

    def to_case(self) -> CaseResult:
        return CaseResult(
            identifier=self.identifier,
            passed=self.passed,
            left=digest(self.left),
            right=digest(self.right),
        )
