from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..violations import Violation
from .schedule import STEP_COUNT, StepKind


class Citation(BaseModel):
    model_config = ConfigDict(frozen=True)

    date: str | None = None
    source: str | None = None
    value: str | None = None
    factor: str | None = None
    sentence_index: int | None = None
    from_sidecar: bool = False

    @property
    def is_complete(self) -> bool:
        return bool(self.date) and bool(self.source)

    @property
    def pair(self) -> tuple[str | None, str | None]:
        return self.date, self.source

    def to_json(self) -> dict[str, Any]:
        entry = {"date": self.date, "source": self.source}
        if self.value is not None:
            entry["value"] = self.value
        return entry


class Utterance(BaseModel):
    step_index: int = Field(ge=1, le=STEP_COUNT)
    speaker: str
    kind: StepKind
    text: str
    prose: str = ""
    citations: list[Citation] = []
    factors: list[str] = []
    falsifiability_notes: str | None = None
    question_count: int = 0
    violations: list[Violation] = []
    elapsed_seconds: float = Field(default=0.0, ge=0)

    def to_json(self) -> dict[str, Any]:
        return {
            "index": self.step_index,
            "speaker": self.speaker,
            "kind": self.kind.value,
            "text": self.text,
            "citations": [c.to_json() for c in self.citations],
            "factors": list(self.factors),
            "falsifiability_notes": self.falsifiability_notes,
            "question_count": self.question_count,
            "violations": [v.model_dump(mode="json") for v in self.violations],
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }


class SessionInfo(BaseModel):
    run_id: str
    company_id: str
    company_name: str
    model_id: str
    backend: str
    strictness: str
    recency_days: int
    max_search: int
    as_of: str
    locale: str
    search_calls_used: int = 0
    # Wall-clock values only ever live here.
    metadata: dict[str, Any] = {}


class Transcript(BaseModel):
    session: SessionInfo
    utterances: list[Utterance]
    complete: bool = True
    halted_at: int | None = None

    @model_validator(mode="after")
    def _ten_steps_when_complete(self):
        if self.complete and len(self.utterances) != STEP_COUNT:
            raise ValueError(f"A complete transcript holds exactly {STEP_COUNT} utterances, got {len(self.utterances)}")
        for position, utterance in enumerate(self.utterances, start=1):
            if utterance.step_index != position:
                raise ValueError(f"Utterance at position {position} carries step index {utterance.step_index}")
        return self

    def step(self, index: int) -> Utterance:
        return self.utterances[index - 1]

    @property
    def closing_pro(self) -> Utterance | None:
        return self.utterances[8] if len(self.utterances) >= 9 else None

    @property
    def closing_con(self) -> Utterance | None:
        return self.utterances[9] if len(self.utterances) >= 10 else None

    @property
    def violations(self) -> list[Violation]:
        return [v for u in self.utterances for v in u.violations]

    @property
    def hard_violations(self) -> list[Violation]:
        return [v for v in self.violations if v.is_hard]

    def citation_pairs(self) -> list[tuple[str | None, str | None]]:
        return [c.pair for u in self.utterances for c in u.citations]

    def to_json(self) -> dict[str, Any]:
        def closing(utterance: Utterance | None) -> dict[str, Any] | None:
            if utterance is None:
                return None
            return {"index": utterance.step_index, "speaker": utterance.speaker, "text": utterance.text}

        return {
            "session": {
                **self.session.model_dump(mode="json"),
                "complete": self.complete,
                "halted_at": self.halted_at,
            },
            "steps": [u.to_json() for u in self.utterances],
            "closing_pro": closing(self.closing_pro),
            "closing_con": closing(self.closing_con),
        }
