"""Check outcomes shared by the validation suites and the CLI reports.

Every verification operation produces named outcomes carrying the symbolic
residual itself, not just a boolean: near-misses in user-supplied structures
are diagnosed from the residual's numeric size at sample points, which the
CLI renders next to the symbolic verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .symexpr import Expr
from .tensor import TensorField

__all__ = ["CheckOutcome", "residual_outcome", "inapplicable", "PASS", "FAIL", "INAPPLICABLE"]

PASS = "pass"
FAIL = "fail"
INAPPLICABLE = "inapplicable"

Residual = Union[Expr, TensorField, None]


@dataclass
class CheckOutcome:
    """One named verification result.

    ``status`` is "pass", "fail" or "inapplicable".  Classification-style
    outcomes (Codazzi or not, parallel or not, torse-forming class) always
    pass; their finding lives in ``details`` and ``symbolic_zero``.
    """

    id: str
    status: str
    symbolic_zero: bool | None = None
    residual: Residual = None
    details: str = ""
    data: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status == FAIL


def residual_outcome(
    check_id: str,
    residual: Residual,
    details: str = "",
    classification: bool = False,
) -> CheckOutcome:
    """Build an outcome from a residual tensor/scalar.

    Plain checks fail when the residual is not canonically zero;
    classifications always pass and only record whether it vanished.
    """
    zero = residual.is_zero() if residual is not None else True
    status = PASS if (zero or classification) else FAIL
    return CheckOutcome(check_id, status, symbolic_zero=zero, residual=residual, details=details)


def inapplicable(check_id: str, details: str) -> CheckOutcome:
    return CheckOutcome(check_id, INAPPLICABLE, details=details)
