from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class StepKind(str, Enum):
    CONSTRUCTIVE = "constructive"
    CROSS_EXAMINATION = "cross_examination"
    REBUTTAL = "rebuttal"
    CLOSING = "closing"


class DebateStepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int = Field(ge=1, le=10)
    speaker: str
    kind: StepKind
    # Order is kept for prompt rendering; validation treats it as a set.
    context_indices: tuple[int, ...] = ()
    char_limit: int | None = None
    min_factor_signals: int | None = None
    required_question_count: int | None = None
    allow_new_factors: bool = True

    @property
    def template_name(self) -> str:
        return f"step_{self.index:02d}"

    @property
    def records_usage(self) -> bool:
        """Only arguments put forward with evidence count against factor reuse."""
        return self.kind in (StepKind.CONSTRUCTIVE, StepKind.REBUTTAL)


SCHEDULE: tuple[DebateStepSpec, ...] = (
    DebateStepSpec(index=1, speaker="A1", kind=StepKind.CONSTRUCTIVE, char_limit=600, min_factor_signals=3),
    DebateStepSpec(index=2, speaker="N3", kind=StepKind.CROSS_EXAMINATION, context_indices=(1,), required_question_count=3),
    DebateStepSpec(index=3, speaker="N1", kind=StepKind.CONSTRUCTIVE, char_limit=600, min_factor_signals=3),
    DebateStepSpec(index=4, speaker="A3", kind=StepKind.CROSS_EXAMINATION, context_indices=(3,), required_question_count=3),
    DebateStepSpec(index=5, speaker="A2", kind=StepKind.REBUTTAL, context_indices=(3,), char_limit=400),
    DebateStepSpec(index=6, speaker="N1", kind=StepKind.CROSS_EXAMINATION, context_indices=(5,), required_question_count=3),
    DebateStepSpec(index=7, speaker="N2", kind=StepKind.REBUTTAL, context_indices=(1,), char_limit=400),
    DebateStepSpec(index=8, speaker="A1", kind=StepKind.CROSS_EXAMINATION, context_indices=(7,), required_question_count=3),
    DebateStepSpec(
        index=9, speaker="A3", kind=StepKind.CLOSING, context_indices=(1, 2, 5, 8), char_limit=600, allow_new_factors=False
    ),
    DebateStepSpec(
        index=10, speaker="N3", kind=StepKind.CLOSING, context_indices=(3, 4, 7, 6), char_limit=600, allow_new_factors=False
    ),
)

STEP_COUNT = len(SCHEDULE)


def step_spec(index: int) -> DebateStepSpec:
    if not 1 <= index <= STEP_COUNT:
        raise IndexError(f"Debate step {index} is outside 1..{STEP_COUNT}")
    return SCHEDULE[index - 1]


def schedule_pairs() -> list[tuple[str, int]]:
    """(speaker, step) pairs a scripted transcript has to cover."""
    return [(spec.speaker, spec.index) for spec in SCHEDULE]
