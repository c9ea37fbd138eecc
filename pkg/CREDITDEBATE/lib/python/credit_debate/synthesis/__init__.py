from .polish import POLISH_STEP, polish_report
from .report import (
    DEBATE_SUMMARY_SCHEMA,
    DebateSummaryReport,
    DebateTopic,
    SourceRef,
    aggregate,
    parse_report,
    render_report,
    report_filename,
)

__all__ = [
    "DEBATE_SUMMARY_SCHEMA",
    "POLISH_STEP",
    "DebateSummaryReport",
    "DebateTopic",
    "SourceRef",
    "aggregate",
    "parse_report",
    "polish_report",
    "render_report",
    "report_filename",
]
