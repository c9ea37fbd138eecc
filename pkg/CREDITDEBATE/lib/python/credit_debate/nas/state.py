import operator
from typing import Annotated, Optional, TypedDict

from ..agent import PromptBundle
from ..errors import CreditDebateError
from ..knowledge import CompanySummary, EvidenceItem
from .report import AnalysisReport

STAGES = ("summarize", "search", "compose", "generate", "post_process", "persist")


class NasState(TypedDict):
    """State of one single-pass analysis run."""
    company_id: str
    summary: Optional[CompanySummary]
    web: list[EvidenceItem]
    bundle: Optional[PromptBundle]
    raw: Optional[str]
    report: Optional[AnalysisReport]
    report_path: Optional[str]
    stages: Annotated[list[str], operator.add]
    error: Optional[str]
    failed_stage: Optional[str]
    failure: Optional[CreditDebateError]


def initial_state(company_id: str) -> NasState:
    return {
        "company_id": company_id,
        "summary": None,
        "web": [],
        "bundle": None,
        "raw": None,
        "report": None,
        "report_path": None,
        "stages": [],
        "error": None,
        "failed_stage": None,
        "failure": None,
    }
