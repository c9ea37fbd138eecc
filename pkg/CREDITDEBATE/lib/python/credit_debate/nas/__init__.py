from .compose import NAS_STEP, compose_prompt, is_sparse
from .pipeline import run_nas
from .report import (
    AnalysisReport,
    GenerationMetadata,
    TopicEntry,
    extract_json_object,
    post_process,
    render_analysis_report,
    report_from_document,
    schema_errors,
)
from .state import STAGES

__all__ = [
    "NAS_STEP",
    "STAGES",
    "AnalysisReport",
    "GenerationMetadata",
    "TopicEntry",
    "compose_prompt",
    "extract_json_object",
    "is_sparse",
    "post_process",
    "render_analysis_report",
    "report_from_document",
    "run_nas",
    "schema_errors",
]
