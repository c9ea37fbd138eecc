from .extraction import ExtractedStructure, extract_structure
from .graph import DebateGraph
from .models import Citation, SessionInfo, Transcript, Utterance
from .runner import prepare_session, run_debate
from .schedule import SCHEDULE, STEP_COUNT, DebateStepSpec, StepKind, step_spec
from .validation import build_utterance, record_step_usage, validate_step

__all__ = [
    "SCHEDULE",
    "STEP_COUNT",
    "Citation",
    "DebateGraph",
    "DebateStepSpec",
    "ExtractedStructure",
    "SessionInfo",
    "StepKind",
    "Transcript",
    "Utterance",
    "build_utterance",
    "extract_structure",
    "prepare_session",
    "record_step_usage",
    "run_debate",
    "step_spec",
    "validate_step",
]
