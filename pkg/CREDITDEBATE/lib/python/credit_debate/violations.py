from enum import Enum

from pydantic import BaseModel, ConfigDict


class ViolationKind(str, Enum):
    MISSING_CITATION = "missing_citation"
    UNDATED_CITATION = "undated_citation"
    FACTOR_REUSE = "factor_reuse"
    CHAR_LIMIT_EXCEEDED = "char_limit_exceeded"
    INSUFFICIENT_FACTOR_SIGNALS = "insufficient_factor_signals"
    INSUFFICIENT_QUESTIONS = "insufficient_questions"
    NEW_FACTOR_IN_CLOSING = "new_factor_in_closing"
    TOOL_PERMISSION = "tool_permission"
    ORDER_BREACH = "order_breach"


class Severity(str, Enum):
    HARD = "hard"
    ADVISORY = "advisory"


# Citation kinds take their severity from the origin of the cited evidence.
FIXED_SEVERITY: dict[ViolationKind, Severity] = {
    ViolationKind.TOOL_PERMISSION: Severity.HARD,
    ViolationKind.ORDER_BREACH: Severity.HARD,
    ViolationKind.NEW_FACTOR_IN_CLOSING: Severity.HARD,
    ViolationKind.FACTOR_REUSE: Severity.ADVISORY,
    ViolationKind.CHAR_LIMIT_EXCEEDED: Severity.ADVISORY,
    ViolationKind.INSUFFICIENT_FACTOR_SIGNALS: Severity.ADVISORY,
    ViolationKind.INSUFFICIENT_QUESTIONS: Severity.ADVISORY,
}


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ViolationKind
    severity: Severity
    step_index: int
    detail: str = ""

    @classmethod
    def of(cls, kind: ViolationKind, step_index: int, detail: str = "") -> "Violation":
        return cls(kind=kind, severity=FIXED_SEVERITY[kind], step_index=step_index, detail=detail)

    @property
    def is_hard(self) -> bool:
        return self.severity is Severity.HARD
