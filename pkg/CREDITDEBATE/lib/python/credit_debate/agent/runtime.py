import logging

from dateutil import parser as date_parser
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..apis.search import SearchHit, SearchProvider
from ..clock import Clock, WallClock
from ..errors import ToolPermissionError
from ..journal import RunJournal
from ..knowledge import EvidenceItem, EvidenceKind, EvidenceOrigin, RecencyPolicy
from .backends import GenerationBackend
from .prompts import PromptBundle
from .roles import AgentRole


def generate(role: AgentRole, bundle: PromptBundle, backend: GenerationBackend, journal: RunJournal | None = None) -> str:
    """Dispatch one generation and journal (role, step, prompt digest, response)."""
    logging.debug("Generating for %s at step %s (round %d)", role.id, bundle.step, bundle.round)
    text = backend.complete(bundle)
    if journal is not None:
        journal.record(
            "generate",
            role=role.id,
            step=bundle.step,
            round=bundle.round,
            backend=backend.mode,
            prompt_digest=bundle.digest(),
            response=text,
        )
    return text


class SearchBudget(BaseModel):
    model_config = ConfigDict(validate_assignment=True)

    max_calls: int = Field(ge=0)
    calls_used: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _within_budget(self):
        if self.calls_used > self.max_calls:
            raise ValueError(f"calls_used ({self.calls_used}) exceeds max_calls ({self.max_calls})")
        return self

    @property
    def remaining(self) -> int:
        return self.max_calls - self.calls_used

    @property
    def exhausted(self) -> bool:
        return self.remaining <= 0


class SearchOutcome(BaseModel):
    query: str
    items: list[EvidenceItem] = []
    budget_exhausted: bool = False

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


def _hit_to_item(hit: SearchHit, company_id: str, seq: int, clock: Clock) -> EvidenceItem | None:
    if not hit.date or not hit.source or not hit.source.strip():
        return None
    try:
        day = date_parser.parse(hit.date).date()
    except (ValueError, OverflowError):
        logging.debug("Dropping search hit with unparseable date %r", hit.date)
        return None
    content = ". ".join(part for part in (hit.title.strip(), hit.snippet.strip()) if part)
    return EvidenceItem(
        item_id=f"{company_id}:web:{seq:03d}",
        company_id=company_id,
        kind=EvidenceKind.NEWS,
        content=content,
        date=day,
        source=hit.source,
        origin=EvidenceOrigin.WEB_SEARCH,
        retrieved_at=clock.now(),
        url=hit.url,
    )


def _run_search(
    query: str,
    company_id: str,
    policy: RecencyPolicy,
    budget: SearchBudget,
    provider: SearchProvider,
    clock: Clock,
) -> SearchOutcome:
    if budget.exhausted:
        logging.warning("Search budget exhausted (%d/%d), skipping %r", budget.calls_used, budget.max_calls, query)
        return SearchOutcome(query=query, budget_exhausted=True)

    max_items = budget.remaining
    hits = provider.search(query, max_items=max_items, date_floor=policy.floor)
    items = []
    for hit in hits:
        item = _hit_to_item(hit, company_id, budget.calls_used * 100 + len(items) + 1, clock)
        if item is not None:
            items.append(item)
        if len(items) == max_items:
            break
    budget.calls_used += 1
    return SearchOutcome(query=query, items=items)


def web_search(
    role: AgentRole,
    query: str,
    policy: RecencyPolicy,
    budget: SearchBudget,
    *,
    provider: SearchProvider,
    company_id: str,
    clock: Clock | None = None,
    journal: RunJournal | None = None,
    step: int | str | None = None,
) -> SearchOutcome:
    """
    Agent-initiated search. Only search-enabled roles may call it; the budget is left untouched
    on refusal. Results are capped at the remaining budget and keep only dated, sourced hits.
    """
    if not role.search_allowed:
        if journal is not None:
            journal.record("search_denied", role=role.id, step=step, query=query)
        raise ToolPermissionError(role.id)

    outcome = _run_search(query, company_id, policy, budget, provider, clock or WallClock())
    if journal is not None:
        journal.record(
            "web_search",
            role=role.id,
            step=step,
            query=query,
            items=len(outcome.items),
            budget_exhausted=outcome.budget_exhausted,
            calls_used=budget.calls_used,
        )
    return outcome


def pipeline_search(
    query: str,
    policy: RecencyPolicy,
    budget: SearchBudget,
    *,
    provider: SearchProvider,
    company_id: str,
    clock: Clock | None = None,
    journal: RunJournal | None = None,
) -> SearchOutcome:
    """Search run by a pipeline on the analyst's behalf, with the same budget and recency handling."""
    outcome = _run_search(query, company_id, policy, budget, provider, clock or WallClock())
    if journal is not None:
        journal.record(
            "pipeline_search",
            query=query,
            items=len(outcome.items),
            budget_exhausted=outcome.budget_exhausted,
            calls_used=budget.calls_used,
        )
    return outcome


def news_query(company_name: str) -> str:
    return f"{company_name} latest news"


def topic_query(company_name: str, topic: str) -> str:
    return f"{company_name} {topic} latest trends"
