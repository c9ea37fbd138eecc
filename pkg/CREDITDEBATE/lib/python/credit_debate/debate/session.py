from typing import Any

from pydantic import BaseModel, ConfigDict

from ..agent import Agent, Runtime, SearchBudget
from ..journal import RunJournal
from ..knowledge import CompanySummary, RecencyPolicy
from .schedule import DebateStepSpec


class DebateSession(BaseModel):
    """Per-session services and inputs the step nodes share; nothing here is shared across sessions."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    run_id: str
    summary: CompanySummary
    evidence_lines: list[str]
    policy: RecencyPolicy
    budget: SearchBudget
    runtime: Runtime
    agents: dict[str, Agent]
    journal: RunJournal
    strict: bool = True

    @property
    def company_id(self) -> str:
        return self.summary.company_id

    def task_variables(self, spec: DebateStepSpec) -> dict[str, Any]:
        return {
            "company_id": self.summary.company_id,
            "company_name": self.summary.company_name,
            "overview": self.summary.overview,
            "evidence": self.evidence_lines,
            "as_of": self.policy.as_of.isoformat(),
            "year": self.policy.as_of.year,
            "previous_year": self.policy.as_of.year - 1,
            "recency_days": self.policy.window_days,
            "char_limit": spec.char_limit,
        }
