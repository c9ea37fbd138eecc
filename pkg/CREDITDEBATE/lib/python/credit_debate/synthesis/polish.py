import json
import logging
from collections import Counter

from ..agent import ROLES, Agent, PromptBundle, Runtime, generate
from ..errors import CreditDebateError
from ..journal import RunJournal
from ..nas.report import extract_json_object
from .report import DebateSummaryReport, parse_report, render_report

POLISH_STEP = "polish"


def polish_report(
    report: DebateSummaryReport,
    aggregator: Agent,
    runtime: Runtime,
    journal: RunJournal | None = None,
) -> DebateSummaryReport:
    """
    Let the aggregator rewrite the prose of a deterministic summary.

    The rewrite is kept only when it carries the same topic labels and the same (date, source)
    multiset; otherwise, or when the answer cannot be read, the deterministic report stands.
    """
    bundle = PromptBundle(
        role=aggregator.id,
        step=POLISH_STEP,
        system=aggregator.system_prompt,
        task=runtime.prompts.task(
            "aggregator_polish",
            report=json.dumps(render_report(report), ensure_ascii=False, indent=2),
        ),
        locale=runtime.settings.locale,
    )
    raw = generate(ROLES[aggregator.id], bundle, runtime.backend, journal)

    try:
        polished = parse_report(extract_json_object(raw))
    except CreditDebateError as e:
        logging.warning("Discarding polished summary: %s", e)
        return _keep(report, journal, f"unreadable: {e}")

    if polished.topic_labels() != report.topic_labels():
        logging.warning("Discarding polished summary: topic labels changed.")
        return _keep(report, journal, "topic labels changed")
    if Counter(polished.citation_pairs()) != Counter(report.citation_pairs()):
        logging.warning("Discarding polished summary: citations changed.")
        return _keep(report, journal, "citations changed")

    if journal is not None:
        journal.record("polish", accepted=True)
    return report.model_copy(
        update={
            "favorable_factor_summary": polished.favorable_factor_summary,
            "adverse_factor_summary": polished.adverse_factor_summary,
            "topics": [
                original.model_copy(update={"pro": rewritten.pro, "con": rewritten.con})
                for original, rewritten in zip(report.topics, polished.topics, strict=True)
            ],
        }
    )


def _keep(report: DebateSummaryReport, journal: RunJournal | None, reason: str) -> DebateSummaryReport:
    if journal is not None:
        journal.record("polish", accepted=False, reason=reason)
    return report
