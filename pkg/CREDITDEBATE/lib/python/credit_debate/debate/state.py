import operator
from typing import Annotated, Optional, TypedDict

from ..errors import CreditDebateError
from ..guideline import FactorUsageLedger
from ..violations import Violation
from .models import Utterance


class DebateState(TypedDict):
    """The overall state of one debate session."""
    company_id: str
    next_step: int
    ledger: FactorUsageLedger
    utterances: Annotated[list[Utterance], operator.add]
    protocol_violations: Annotated[list[Violation], operator.add]
    halted_at: Optional[int]
    error: Optional[str]
    failure: Optional[CreditDebateError]


def initial_state(company_id: str) -> DebateState:
    return {
        "company_id": company_id,
        "next_step": 1,
        "ledger": FactorUsageLedger(),
        "utterances": [],
        "protocol_violations": [],
        "halted_at": None,
        "error": None,
        "failure": None,
    }


def utterance_at(state: DebateState, index: int) -> Utterance:
    for utterance in state["utterances"]:
        if utterance.step_index == index:
            return utterance
    raise KeyError(f"Step {index} has not been spoken yet")
