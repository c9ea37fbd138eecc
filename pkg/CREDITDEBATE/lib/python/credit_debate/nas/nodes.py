import json
import logging

from ..agent import ROLES, generate, news_query, pipeline_search
from ..config import SearchMode
from ..errors import CreditDebateError
from .compose import NAS_STEP, compose_prompt, is_sparse
from .report import GenerationMetadata, post_process, render_analysis_report
from .session import NasSession
from .state import NasState


def _failed(stage: str, error: CreditDebateError):
    logging.error("Stage %s failed: %s", stage, error)
    return {"error": f"{stage}: {error}", "failed_stage": stage, "failure": error}


def _done(session: NasSession, stage: str, **fields):
    session.journal.record("stage", stage=stage, **fields)
    return [stage]


def node_summarize(state: NasState, session: NasSession):
    logging.debug("ENTERING NODE: summarize")
    try:
        summary = session.pool.summarize_company(state["company_id"])
    except CreditDebateError as e:
        return _failed("summarize", e)
    return {
        "summary": summary,
        "stages": _done(session, "summarize", evidence=len(summary.evidence)),
    }


def node_search(state: NasState, session: NasSession):
    logging.debug("ENTERING NODE: search")
    summary = state["summary"]
    settings = session.runtime.settings
    if settings.search_mode is SearchMode.IF_SPARSE and not is_sparse(summary, session.policy):
        logging.debug("Company data is recent enough, skipping web search for %s", summary.company_id)
        return {"web": [], "stages": _done(session, "search", skipped=True, items=0)}

    try:
        outcome = pipeline_search(
            news_query(summary.company_name),
            session.policy,
            session.budget,
            provider=session.runtime.search_provider,
            company_id=summary.company_id,
            clock=session.runtime.clock,
            journal=session.journal,
        )
    except CreditDebateError as e:
        return _failed("search", e)
    return {"web": outcome.items, "stages": _done(session, "search", skipped=False, items=len(outcome.items))}


def node_compose(state: NasState, session: NasSession):
    logging.debug("ENTERING NODE: compose")
    prompts = session.runtime.prompts
    try:
        bundle = compose_prompt(
            state["summary"],
            state["web"],
            prompts.guideline_text(),
            prompts=prompts,
            policy=session.policy,
        )
    except CreditDebateError as e:
        return _failed("compose", e)
    return {"bundle": bundle, "stages": _done(session, "compose", prompt_digest=bundle.digest())}


def node_generate(state: NasState, session: NasSession):
    logging.debug("ENTERING NODE: generate")
    try:
        raw = generate(ROLES["nas_analyst"], state["bundle"], session.runtime.backend, session.journal)
    except CreditDebateError as e:
        return _failed("generate", e)
    return {"raw": raw, "stages": _done(session, "generate")}


def node_post_process(state: NasState, session: NasSession):
    logging.debug("ENTERING NODE: post_process")
    try:
        report = post_process(state["raw"], company_id=state["company_id"])
    except CreditDebateError as e:
        return _failed("post_process", e)
    return {"report": report, "stages": _done(session, "post_process", topics=len(report.topics))}


def node_persist(state: NasState, session: NasSession):
    logging.debug("ENTERING NODE: persist")
    clock = session.runtime.clock
    metadata = GenerationMetadata(
        company_id=state["company_id"],
        run_id=session.run_id,
        model_id=session.runtime.backend.model_id,
        started_at=session.started_at,
        elapsed_seconds=round(max(0.0, clock.monotonic() - session.started), 3),
    )
    report = state["report"].model_copy(update={"metadata": metadata})

    report_path = None
    if session.output_dir is not None:
        path = session.output_dir / f"{state['company_id']}_{session.run_id}_nas_report.json"
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(render_analysis_report(report), ensure_ascii=False, indent=2), encoding="utf-8")
        except OSError as e:
            return _failed("persist", CreditDebateError(f"Cannot write {path}: {e}"))
        report_path = str(path)

    return {
        "report": report,
        "report_path": report_path,
        "stages": _done(session, "persist", path=report_path, meta={"elapsed_seconds": metadata.elapsed_seconds}),
    }


def node_handle_error(state: NasState, session: NasSession):
    logging.debug("ENTERING NODE: handle_error")

    session.journal.record(
        "aborted",
        step=NAS_STEP,
        stage=state.get("failed_stage"),
        reason=state.get("error", "An unknown error occurred."),
        completed_stages=list(state["stages"]),
        raw=state.get("raw"),
    )
    return {}
