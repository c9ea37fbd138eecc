from .models import CompanySummary, EvidenceItem, EvidenceKind, EvidenceOrigin, IngestResult, RecencyPolicy, Rejection
from .pool import KnowledgePool, Retrieval

__all__ = [
    "CompanySummary",
    "EvidenceItem",
    "EvidenceKind",
    "EvidenceOrigin",
    "IngestResult",
    "KnowledgePool",
    "RecencyPolicy",
    "Rejection",
    "Retrieval",
]
