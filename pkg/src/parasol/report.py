"""Verification reports: deterministic JSON and human-readable tables.

A report records the conventions in force (curvature sign, Ricci mode,
sampling seed), one entry per executed check with both the symbolic verdict
and the largest numeric residual over seeded sample points, and the derived
constants.  Reports are byte-identical across repeated runs with the same
manifest, flags and seed; golden-file tests rely on that.

Exit codes: 0 when no check failed (inapplicable entries do not fail),
1 when any check failed, 2 on input or usage errors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .checks import CheckOutcome, FAIL
from .symexpr import DegenerateEvaluationError, Expr
from .tensor import TensorField

__all__ = ["CheckEntry", "VerificationReport", "CURVATURE_SIGN_CONVENTION"]

CURVATURE_SIGN_CONVENTION = (
    "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z"
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


@dataclass
class CheckEntry:
    id: str
    status: str
    symbolic_zero: bool | None
    numeric_max: float | None
    details: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "symbolic_zero": self.symbolic_zero,
            "numeric_max": self.numeric_max,
            "details": self.details,
        }


def _round_float(value: float) -> float:
    # six significant digits: stable across repeated runs, readable in tables
    return float("%.6e" % value)


def residual_numeric_max(residual, points: Iterable[Mapping[str, float]]) -> float | None:
    if residual is None:
        return None
    if isinstance(residual, Expr):
        worst = 0.0
        for point in points:
            try:
                value = abs(residual.evaluate(point))
            except DegenerateEvaluationError:
                continue
            worst = max(worst, value)
        return _round_float(worst)
    if isinstance(residual, TensorField):
        return _round_float(residual.max_abs(points))
    return None


def entry_from_outcome(
    outcome: CheckOutcome, points: list[Mapping[str, float]]
) -> CheckEntry:
    return CheckEntry(
        id=outcome.id,
        status=outcome.status,
        symbolic_zero=outcome.symbolic_zero,
        numeric_max=residual_numeric_max(outcome.residual, points),
        details=outcome.details,
    )


def _constant_str(value) -> str | None:
    if value is None:
        return None
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Expr):
        constant = value.as_rational_constant()
        return str(constant) if constant is not None else str(value)
    return str(value)


@dataclass
class VerificationReport:
    name: str
    ricci_mode: str
    seed: int
    checks: list[CheckEntry] = field(default_factory=list)
    constants: dict = field(default_factory=dict)

    def add(self, entry: CheckEntry) -> None:
        self.checks.append(entry)

    def extend_outcomes(
        self, outcomes: Iterable[CheckOutcome], points: list[Mapping[str, float]]
    ) -> None:
        for outcome in outcomes:
            self.add(entry_from_outcome(outcome, points))

    def set_constant(self, key: str, value) -> None:
        self.constants[key] = value

    @property
    def exit_code(self) -> int:
        return EXIT_CHECK_FAILED if any(c.status == FAIL for c in self.checks) else EXIT_OK

    def to_dict(self) -> dict:
        constant_keys = (
            "epsilon",
            "a",
            "b",
            "c",
            "lambda",
            "mu",
            "f",
            "classification",
            "regular",
        )
        constants = {}
        for key in constant_keys:
            value = self.constants.get(key)
            if key == "epsilon" and value is not None:
                constants[key] = int(value)
            elif key == "regular" and value is not None:
                constants[key] = bool(value)
            elif key == "classification":
                constants[key] = value
            else:
                constants[key] = _constant_str(value)
        return {
            "name": self.name,
            "conventions": {
                "curvature_sign": CURVATURE_SIGN_CONVENTION,
                "ricci_mode": self.ricci_mode,
                "seed": self.seed,
            },
            "checks": [c.to_dict() for c in self.checks],
            "constants": constants,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_table(self) -> str:
        lines = []
        lines.append("manifest: %s" % self.name)
        lines.append(
            "conventions: %s | ricci_mode=%s | seed=%d"
            % (CURVATURE_SIGN_CONVENTION, self.ricci_mode, self.seed)
        )
        header = ("check", "status", "symbolic", "numeric max", "details")
        rows = [header]
        for entry in self.checks:
            symbolic = (
                "-"
                if entry.symbolic_zero is None
                else ("zero" if entry.symbolic_zero else "nonzero")
            )
            numeric = "-" if entry.numeric_max is None else "%.3e" % entry.numeric_max
            rows.append((entry.id, entry.status, symbolic, numeric, entry.details))
        widths = [max(len(row[i]) for row in rows) for i in range(4)]
        lines.append("-" * (sum(widths) + 14))
        for idx, row in enumerate(rows):
            lines.append(
                "%-*s  %-*s  %-*s  %-*s  %s"
                % (widths[0], row[0], widths[1], row[1], widths[2], row[2], widths[3], row[3], row[4])
            )
            if idx == 0:
                lines.append("-" * (sum(widths) + 14))
        shown = {
            key: value
            for key, value in self.to_dict()["constants"].items()
            if value is not None
        }
        if shown:
            lines.append("constants: " + ", ".join("%s=%s" % kv for kv in sorted(shown.items())))
        lines.append("result: %s" % ("FAIL" if self.exit_code else "PASS"))
        return "\n".join(lines) + "\n"
