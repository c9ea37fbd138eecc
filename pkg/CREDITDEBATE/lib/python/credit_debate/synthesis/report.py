import logging
from collections import Counter
from collections.abc import Sequence
from typing import Any

from jsonschema import Draft202012Validator
from pydantic import BaseModel, ConfigDict

from ..agent.roles import Team, get_role
from ..debate import Transcript, Utterance
from ..debate.extraction import ExtractedStructure, extract_structure
from ..errors import ReportSchemaError
from ..guideline import FactorTable, load_factor_table
from ..nas.report import format_error_path

SUMMARY_KEY = "Debate Summary"
FAVORABLE_KEY = "Favorable Factor Summary"
ADVERSE_KEY = "Adverse Factor Summary"
OBJECTIVE_KEY = "Objective Statement"
OVERVIEW_KEY = "Corporate Overview"
TRANSCRIPT_KEY = "Transcript"
COVERAGE_KEY = "Coverage Notes"

_NULLABLE_STRING = {"type": ["string", "null"]}

DEBATE_SUMMARY_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [SUMMARY_KEY, OBJECTIVE_KEY, OVERVIEW_KEY, TRANSCRIPT_KEY, COVERAGE_KEY],
    "properties": {
        "Company": {"type": "string"},
        SUMMARY_KEY: {
            "type": "object",
            "required": [FAVORABLE_KEY, ADVERSE_KEY, "topics"],
            "additionalProperties": False,
            "properties": {
                FAVORABLE_KEY: {"type": "array", "items": {"type": "string"}},
                ADVERSE_KEY: {"type": "array", "items": {"type": "string"}},
                "topics": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["topic", "pro", "con", "sources"],
                        "properties": {
                            "topic": {"type": "string", "minLength": 1},
                            "pro": {"type": "string"},
                            "con": {"type": "string"},
                            "sources": {
                                "type": "array",
                                "items": {
                                    "type": "object",
                                    "required": ["date", "source"],
                                    "properties": {"date": _NULLABLE_STRING, "source": _NULLABLE_STRING},
                                },
                            },
                        },
                    },
                },
            },
        },
        OBJECTIVE_KEY: {"type": "string"},
        OVERVIEW_KEY: {"type": "string"},
        TRANSCRIPT_KEY: {"type": "string"},
        COVERAGE_KEY: {"type": "array", "items": {"type": "string"}},
    },
}

_VALIDATOR = Draft202012Validator(DEBATE_SUMMARY_SCHEMA)


class SourceRef(BaseModel):
    model_config = ConfigDict(frozen=True)

    date: str | None = None
    source: str | None = None

    @property
    def pair(self) -> tuple[str | None, str | None]:
        return self.date, self.source


class DebateTopic(BaseModel):
    topic: str
    factor_id: str | None = None
    pro: str = ""
    con: str = ""
    sources: list[SourceRef] = []


class DebateSummaryReport(BaseModel):
    """Balanced, verdict-free merge of one debate transcript, grouped by factor."""

    company_id: str = ""
    favorable_factor_summary: list[str] = []
    adverse_factor_summary: list[str] = []
    topics: list[DebateTopic] = []
    transcript_ref: str = ""
    objective_statement: str = ""
    corporate_overview: str = ""
    coverage_notes: list[str] = []

    def citation_pairs(self) -> list[tuple[str | None, str | None]]:
        return [s.pair for t in self.topics for s in t.sources]

    def topic_labels(self) -> list[str]:
        return [t.topic for t in self.topics]


class _TopicDraft:

    def __init__(self, factor_id: str, first_step: int):
        self.factor_id = factor_id
        self.first_step = first_step
        self.pro: list[str] = []
        self.con: list[str] = []
        self.sources: list[SourceRef] = []

    def add_sentence(self, team: Team, sentence: str) -> None:
        bucket = self.pro if team is Team.AFFIRMATIVE else self.con
        if sentence not in bucket:
            bucket.append(sentence)


def _nearest_factor(structure: ExtractedStructure, sentence_index: int | None) -> str | None:
    """Factor of the closest tagged sentence, earlier sentences winning ties."""
    if sentence_index is None:
        return None
    tagged = [s for s in structure.sentences if s.factors]
    if not tagged:
        return None
    closest = min(tagged, key=lambda s: (abs(s.index - sentence_index), s.index > sentence_index))
    return closest.factors[0]


def _citation_home(utterance: Utterance, structure: ExtractedStructure, citation) -> str | None:
    if citation.factor and citation.factor in utterance.factors:
        return citation.factor
    if citation.sentence_index is not None:
        sentence = structure.sentences[citation.sentence_index]
        if sentence.factors:
            return sentence.factors[0]
    return _nearest_factor(structure, citation.sentence_index) or (utterance.factors[0] if utterance.factors else None)


def _fallback_home(step_index: int, first_factor_by_step: dict[int, str]) -> str | None:
    """Citations of an untagged utterance go to the closest tagged step, earlier steps winning ties."""
    if not first_factor_by_step:
        return None
    step = min(first_factor_by_step, key=lambda s: (abs(s - step_index), s > step_index))
    return first_factor_by_step[step]


def _objective(transcript: Transcript) -> str:
    session = transcript.session
    return (
        f"Balanced non-financial credit review of {session.company_name} ({session.company_id}) as of "
        f"{session.as_of}. Favorable and adverse positions are kept side by side; no verdict is given."
    )


def aggregate(
    transcript: Transcript,
    *,
    overview: str = "",
    transcript_ref: str = "",
    pool_factors: Sequence[str] = (),
    factors: FactorTable | None = None,
) -> DebateSummaryReport:
    """
    Merge the ten debate utterances into one report, one topic per discussed factor.

    Affirmative sentences mentioning a factor fill its `pro` text, negative ones its `con`
    text, cross-examinations and rebuttals included. Every extracted citation lands under
    exactly one topic.
    """
    factors = factors or load_factor_table()
    drafts: dict[str, _TopicDraft] = {}
    structures = [(u, extract_structure(u.text, factors)) for u in transcript.utterances]

    for utterance, _ in structures:
        for factor_id in utterance.factors:
            if factor_id not in drafts:
                drafts[factor_id] = _TopicDraft(factor_id, utterance.step_index)

    if not drafts:
        logging.warning(
            "Transcript %s has no extractable factors; the summary has no topics.", transcript.session.run_id
        )

    first_factor_by_step = {u.step_index: u.factors[0] for u, _ in structures if u.factors}
    for utterance, structure in structures:
        team = get_role(utterance.speaker).team
        for sentence in structure.sentences:
            for factor_id in sentence.factors:
                if factor_id in drafts:
                    drafts[factor_id].add_sentence(team, sentence.text)
        for citation in utterance.citations:
            home = _citation_home(utterance, structure, citation)
            if home not in drafts:
                home = _fallback_home(utterance.step_index, first_factor_by_step)
            if home is None:
                logging.warning("Citation %s at step %d has no topic to attach to.", citation.pair, utterance.step_index)
                continue
            drafts[home].sources.append(SourceRef(date=citation.date, source=citation.source))

    ordered = sorted(drafts.values(), key=lambda d: (d.first_step, factors.label_for(d.factor_id)))
    topics = [
        DebateTopic(
            topic=factors.label_for(d.factor_id),
            factor_id=d.factor_id,
            pro=" ".join(d.pro),
            con=" ".join(d.con),
            sources=d.sources,
        )
        for d in ordered
    ]

    discussed = set(drafts)
    coverage = [
        f"{factors.label_for(factor_id)}: present in the company data but not discussed in the debate"
        for factor_id in dict.fromkeys(pool_factors)
        if factor_id not in discussed
    ]

    return DebateSummaryReport(
        company_id=transcript.session.company_id,
        favorable_factor_summary=[d.pro[0] for d in ordered if d.pro],
        adverse_factor_summary=[d.con[0] for d in ordered if d.con],
        topics=topics,
        transcript_ref=transcript_ref,
        objective_statement=_objective(transcript),
        corporate_overview=overview,
        coverage_notes=coverage,
    )


def _check_unique_topics(report: DebateSummaryReport) -> None:
    counts = Counter(report.topic_labels())
    duplicates = [
        (format_error_path([SUMMARY_KEY, "topics", i, "topic"]), f"duplicate topic '{t.topic}'")
        for i, t in enumerate(report.topics)
        if counts[t.topic] > 1
    ]
    if duplicates:
        raise ReportSchemaError(duplicates)


def render_report(report: DebateSummaryReport) -> dict[str, Any]:
    _check_unique_topics(report)
    return {
        "Company": report.company_id,
        SUMMARY_KEY: {
            FAVORABLE_KEY: list(report.favorable_factor_summary),
            ADVERSE_KEY: list(report.adverse_factor_summary),
            "topics": [
                {
                    "topic": t.topic,
                    "pro": t.pro,
                    "con": t.con,
                    "sources": [{"date": s.date, "source": s.source} for s in t.sources],
                }
                for t in report.topics
            ],
        },
        OBJECTIVE_KEY: report.objective_statement,
        OVERVIEW_KEY: report.corporate_overview,
        TRANSCRIPT_KEY: report.transcript_ref,
        COVERAGE_KEY: list(report.coverage_notes),
    }


def parse_report(document: dict[str, Any], factors: FactorTable | None = None) -> DebateSummaryReport:
    errors = [
        (format_error_path(list(e.absolute_path)) or "<root>", e.message)
        for e in sorted(_VALIDATOR.iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path])
    ]
    if errors:
        raise ReportSchemaError(errors)

    factors = factors or load_factor_table()
    summary = document[SUMMARY_KEY]
    report = DebateSummaryReport(
        company_id=document.get("Company", ""),
        favorable_factor_summary=summary[FAVORABLE_KEY],
        adverse_factor_summary=summary[ADVERSE_KEY],
        topics=[
            DebateTopic(
                topic=t["topic"],
                factor_id=factors.resolve(t["topic"]) or t["topic"],
                pro=t["pro"],
                con=t["con"],
                sources=[SourceRef(**s) for s in t["sources"]],
            )
            for t in summary["topics"]
        ],
        transcript_ref=document[TRANSCRIPT_KEY],
        objective_statement=document[OBJECTIVE_KEY],
        corporate_overview=document[OVERVIEW_KEY],
        coverage_notes=document[COVERAGE_KEY],
    )
    _check_unique_topics(report)
    return report


def report_filename(company_id: str, run_id: str) -> str:
    return f"{company_id}_{run_id}_debate_summary.json"
