import logging
from pathlib import Path

from ..agent import Runtime, ScriptedBackend, SearchBudget
from ..errors import StageError
from ..journal import RunJournal
from ..knowledge import KnowledgePool, RecencyPolicy
from .compose import NAS_STEP
from .graph import NasGraph
from .report import AnalysisReport
from .session import NasSession
from .state import initial_state


def run_nas(
    company_id: str,
    pool: KnowledgePool,
    runtime: Runtime,
    *,
    run_id: str,
    journal: RunJournal | None = None,
    output_dir: Path | None = None,
) -> AnalysisReport:
    """
    One-shot analysis: summarize, search, compose, a single generation, post-process, persist.

    Raises StageError naming the first stage that failed; completed stages stay in the journal.
    """
    settings = runtime.settings
    clock = runtime.clock
    journal = journal or RunJournal(clock=clock)

    if isinstance(runtime.backend, ScriptedBackend):
        runtime.backend.require([("nas_analyst", NAS_STEP)])

    session = NasSession(
        run_id=run_id,
        pool=pool,
        runtime=runtime,
        journal=journal,
        policy=RecencyPolicy(window_days=settings.recency_days, as_of=settings.as_of_date(clock.today())),
        budget=SearchBudget(max_calls=settings.max_search),
        output_dir=output_dir,
        started_at=clock.now().isoformat(),
        started=clock.monotonic(),
    )
    journal.record("session_started", run_id=run_id, company_id=company_id, as_of=session.policy.as_of.isoformat())

    agent = NasGraph(session).build()
    final_state = agent.invoke(initial_state(company_id))

    if final_state.get("error"):
        raise StageError(final_state["failed_stage"], final_state["failure"])

    report = final_state["report"]
    journal.record("session_completed", stages=list(final_state["stages"]), report_path=final_state["report_path"])
    logging.debug("Analysis for %s finished with %d topics", company_id, len(report.topics))
    return report
