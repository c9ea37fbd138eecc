import hashlib
from enum import Enum
from itertools import combinations

from pydantic import BaseModel, ConfigDict, Field

from ..violations import Violation, ViolationKind


class Side(str, Enum):
    AFFIRMATIVE = "affirmative"
    NEGATIVE = "negative"


def evidence_fingerprint(date: str | None, source: str | None, value: object = None) -> str:
    payload = "|".join("" if part is None else str(part).strip() for part in (date, source, value))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


class UsageRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    side: Side
    factor: str
    step_index: int = Field(ge=1, le=10)
    fingerprint: str


class FactorUsageLedger(BaseModel):
    """Per-session record of which side used which factor with which evidence."""

    model_config = ConfigDict(frozen=True)

    records: tuple[UsageRecord, ...] = ()

    def __len__(self) -> int:
        return len(self.records)

    def uses(self, side: Side | str, factor: str) -> list[tuple[int, str]]:
        side = Side(side)
        return [(r.step_index, r.fingerprint) for r in self.records if r.side is side and r.factor == factor]

    def totals(self) -> dict[tuple[str, str], int]:
        counts: dict[tuple[str, str], int] = {}
        for r in self.records:
            key = (r.side.value, r.factor)
            counts[key] = counts.get(key, 0) + 1
        return counts


def record_usage(
    ledger: FactorUsageLedger,
    side: Side | str,
    factor: str,
    evidence_fingerprint: str,
    step_index: int,
) -> FactorUsageLedger:
    record = UsageRecord(side=Side(side), factor=factor, step_index=step_index, fingerprint=evidence_fingerprint)
    return ledger.model_copy(update={"records": (*ledger.records, record)})


def check_factor_reuse(ledger: FactorUsageLedger) -> list[Violation]:
    """One advisory violation per pair of uses sharing side, factor and evidence fingerprint."""
    violations = []
    for first, second in combinations(ledger.records, 2):
        if (first.side, first.factor, first.fingerprint) != (second.side, second.factor, second.fingerprint):
            continue
        violations.append(
            Violation.of(
                ViolationKind.FACTOR_REUSE,
                second.step_index,
                f"{second.side.value} reused '{second.factor}' with the same evidence as step {first.step_index}",
            )
        )
    return violations
