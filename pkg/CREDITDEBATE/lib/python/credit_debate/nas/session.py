from pathlib import Path

from pydantic import BaseModel, ConfigDict

from ..agent import Runtime, SearchBudget
from ..journal import RunJournal
from ..knowledge import KnowledgePool, RecencyPolicy


class NasSession(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    run_id: str
    pool: KnowledgePool
    runtime: Runtime
    journal: RunJournal
    policy: RecencyPolicy
    budget: SearchBudget
    output_dir: Path | None = None
    started_at: str
    started: float
