import logging
from collections.abc import Sequence

from ..agent import AgentBuilder, Runtime, ScriptedBackend, SearchBudget, topic_query
from ..config import Strictness
from ..errors import ProtocolViolationError, StageError
from ..journal import RunJournal
from ..knowledge import KnowledgePool, RecencyPolicy
from .graph import DebateGraph
from .models import SessionInfo, Transcript
from .schedule import STEP_COUNT, schedule_pairs
from .session import DebateSession
from .state import initial_state


def run_debate(
    company_id: str,
    pool: KnowledgePool,
    runtime: Runtime,
    *,
    run_id: str,
    journal: RunJournal | None = None,
    step_order: Sequence[int] | None = None,
) -> Transcript:
    """
    Run the ten-step debate for one company and return its transcript.

    Backend failures and strict-mode hard violations abort the session; the partial transcript
    is journaled either way.
    """
    settings = runtime.settings
    clock = runtime.clock
    journal = journal or RunJournal(clock=clock)
    session = prepare_session(company_id, pool, runtime, run_id=run_id, journal=journal)
    summary, policy = session.summary, session.policy

    started_at = clock.now()
    started = clock.monotonic()
    journal.record("session_started", run_id=run_id, company_id=company_id, as_of=policy.as_of.isoformat())

    agent = DebateGraph(session, step_order=step_order).build()
    final_state = agent.invoke(initial_state(company_id))
    elapsed = max(0.0, clock.monotonic() - started)

    utterances = sorted(final_state["utterances"], key=lambda u: u.step_index)
    halted_at = final_state.get("halted_at")
    info = SessionInfo(
        run_id=run_id,
        company_id=company_id,
        company_name=summary.company_name,
        model_id=runtime.backend.model_id,
        backend=runtime.backend.mode,
        strictness=settings.strictness.value,
        recency_days=settings.recency_days,
        max_search=settings.max_search,
        as_of=policy.as_of.isoformat(),
        locale=settings.locale,
        search_calls_used=session.budget.calls_used,
        metadata={
            "started_at": started_at.isoformat(),
            "elapsed_seconds": round(elapsed, 3),
            "step_elapsed_seconds": [round(u.elapsed_seconds, 3) for u in utterances],
        },
    )
    complete = len(utterances) == STEP_COUNT and not final_state.get("error") and halted_at is None
    transcript = Transcript(session=info, utterances=utterances, complete=complete, halted_at=halted_at)
    if complete:
        journal.record(
            "session_completed",
            steps=[u.step_index for u in utterances],
            violations=[v.kind.value for v in transcript.violations],
            meta={"elapsed_seconds": elapsed},
        )
    else:
        document = transcript.to_json()
        journal.record(
            "session_partial",
            steps=[u.step_index for u in utterances],
            transcript={"steps": document["steps"], "halted_at": halted_at},
            meta={"elapsed_seconds": elapsed},
        )
        raise _abort(final_state, transcript)

    logging.debug("Debate for %s finished in %.2fs with %d violations", company_id, elapsed, len(transcript.violations))
    return transcript


def _abort(final_state, transcript: Transcript) -> Exception:
    if final_state.get("failure") is not None:
        error = StageError(f"step_{len(transcript.utterances) + 1}", final_state["failure"])
    elif final_state["protocol_violations"]:
        breach = final_state["protocol_violations"][0]
        error = ProtocolViolationError(f"Debate aborted at step {breach.step_index}: {breach.detail}")
    else:
        hard = [v for v in transcript.step(transcript.halted_at).violations if v.is_hard]
        error = ProtocolViolationError(
            f"Debate aborted at step {transcript.halted_at}: {hard[0].kind.value} ({hard[0].detail})"
        )
    error.transcript = transcript
    return error


def prepare_session(
    company_id: str,
    pool: KnowledgePool,
    runtime: Runtime,
    *,
    run_id: str,
    journal: RunJournal,
) -> DebateSession:
    """Summary, recency-ordered evidence, agents and a fresh search budget for one company."""
    settings = runtime.settings
    if isinstance(runtime.backend, ScriptedBackend):
        runtime.backend.require(schedule_pairs())

    summary = pool.summarize_company(company_id)
    policy = RecencyPolicy(window_days=settings.recency_days, as_of=settings.as_of_date(runtime.clock.today()))
    retrieval = pool.retrieve(company_id, policy)
    agents = AgentBuilder(settings).instantiate_agents(
        runtime.prompts,
        company_name=summary.company_name,
        recency_days=settings.recency_days,
        search_example=topic_query(summary.company_name, "<topic>"),
    )
    return DebateSession(
        run_id=run_id,
        summary=summary,
        evidence_lines=[str(item) for item in retrieval.items],
        policy=policy,
        budget=SearchBudget(max_calls=settings.max_search),
        runtime=runtime,
        agents=agents,
        journal=journal,
        strict=settings.strictness is Strictness.STRICT,
    )
