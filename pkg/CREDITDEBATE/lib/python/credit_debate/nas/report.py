import json
import logging
import re
from collections import deque
from typing import Any

from jsonschema import Draft202012Validator
from pydantic import BaseModel, ConfigDict, Field

from ..errors import ReportParseError, ReportSchemaError

SUMMARY_KEY = "Analysis Summary"
FAVORABLE_KEY = "Favorable Factors Summary"
ADVERSE_KEY = "Adverse Factors Summary"

REPORT_SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [SUMMARY_KEY],
    "properties": {
        SUMMARY_KEY: {
            "type": "object",
            "required": [FAVORABLE_KEY, ADVERSE_KEY, "topics"],
            "properties": {
                FAVORABLE_KEY: {"type": "array", "items": {"type": "string"}},
                ADVERSE_KEY: {"type": "array", "items": {"type": "string"}},
                "topics": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["topic", "Affirmative", "Adverse"],
                        "properties": {
                            "topic": {"type": "string", "minLength": 1},
                            "Affirmative": {"type": "string"},
                            "Adverse": {"type": "string"},
                        },
                    },
                },
            },
        },
        "metadata": {"type": "object"},
    },
}

_VALIDATOR = Draft202012Validator(REPORT_SCHEMA)
_REQUIRED_KEY = re.compile(r"^'(?P<key>.+)' is a required property$")


class TopicEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    topic: str
    affirmative: str = ""
    adverse: str = ""


class GenerationMetadata(BaseModel):
    company_id: str | None = None
    run_id: str | None = None
    model_id: str | None = None
    started_at: str | None = None
    elapsed_seconds: float = Field(default=0.0, ge=0)


class AnalysisReport(BaseModel):
    company_id: str = ""
    favorable_summary: list[str] = []
    adverse_summary: list[str] = []
    topics: list[TopicEntry] = []
    metadata: GenerationMetadata | None = None


def format_error_path(path: deque | list) -> str:
    """`["Analysis Summary", "topics", 0, "Adverse"]` -> `Analysis Summary.topics[0].Adverse`."""
    rendered = ""
    for part in path:
        if isinstance(part, int):
            rendered += f"[{part}]"
        else:
            rendered += f".{part}" if rendered else str(part)
    return rendered


def schema_errors(document: Any) -> list[tuple[str, str]]:
    errors = []
    for error in sorted(_VALIDATOR.iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path]):
        path = list(error.absolute_path)
        missing = _REQUIRED_KEY.match(error.message) if error.validator == "required" else None
        if missing:
            path.append(missing.group("key"))
        errors.append((format_error_path(path) or "<root>", error.message))
    return errors


def extract_json_object(raw: str) -> dict[str, Any]:
    """
    Return the first decodable JSON object in `raw`, skipping code fences and prose around it.
    """
    decoder = json.JSONDecoder()
    first_error: json.JSONDecodeError | None = None
    position = raw.find("{")
    while position != -1:
        try:
            value, _ = decoder.raw_decode(raw, position)
        except json.JSONDecodeError as e:
            first_error = first_error or e
        else:
            if isinstance(value, dict):
                return value
        position = raw.find("{", position + 1)

    if first_error is not None:
        raise ReportParseError(f"Malformed JSON object: {first_error.msg}", offset=first_error.pos)
    raise ReportParseError("No JSON object found", offset=len(raw))


def report_from_document(document: dict[str, Any], company_id: str = "") -> AnalysisReport:
    errors = schema_errors(document)
    if errors:
        raise ReportSchemaError(errors)

    summary = document[SUMMARY_KEY]
    metadata = document.get("metadata")
    return AnalysisReport(
        company_id=company_id or (metadata or {}).get("company_id") or "",
        favorable_summary=list(summary[FAVORABLE_KEY]),
        adverse_summary=list(summary[ADVERSE_KEY]),
        topics=[
            TopicEntry(topic=t["topic"], affirmative=t["Affirmative"], adverse=t["Adverse"]) for t in summary["topics"]
        ],
        metadata=GenerationMetadata(**metadata) if metadata else None,
    )


def post_process(raw: str, company_id: str = "") -> AnalysisReport:
    """Extract, schema-check and map the analyst's raw answer."""
    document = extract_json_object(raw)
    logging.debug("Extracted report object with keys %s", list(document))
    return report_from_document(document, company_id)


def render_analysis_report(report: AnalysisReport, include_metadata: bool = True) -> dict[str, Any]:
    document: dict[str, Any] = {
        SUMMARY_KEY: {
            FAVORABLE_KEY: list(report.favorable_summary),
            ADVERSE_KEY: list(report.adverse_summary),
            "topics": [{"topic": t.topic, "Affirmative": t.affirmative, "Adverse": t.adverse} for t in report.topics],
        }
    }
    if include_metadata and report.metadata is not None:
        document["metadata"] = report.metadata.model_dump(mode="json")
    return document
