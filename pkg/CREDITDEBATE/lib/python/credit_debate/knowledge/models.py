import datetime as dt
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class EvidenceKind(str, Enum):
    DISCLOSURE = "disclosure"
    NEWS = "news"
    CERTIFICATION = "certification"
    PATENT = "patent"
    GOVERNANCE = "governance"
    STATISTIC = "statistic"
    SEARCH_TREND = "search_trend"


class EvidenceOrigin(str, Enum):
    POOL = "pool"
    WEB_SEARCH = "web_search"


# Kinds that imply a guideline factor when a record carries no explicit tag.
KIND_DEFAULT_FACTOR = {
    EvidenceKind.CERTIFICATION: "certification_status",
    EvidenceKind.SEARCH_TREND: "search_volume_trend",
}


class EvidenceItem(BaseModel):
    """One dated, sourced fact about a company."""

    model_config = ConfigDict(frozen=True)

    item_id: str
    company_id: str
    kind: EvidenceKind
    factor_tag: str | None = None
    content: str = ""
    value: float | None = None
    unit: str | None = None
    date: dt.date
    source: str
    origin: EvidenceOrigin = EvidenceOrigin.POOL
    retrieved_at: dt.datetime | None = None
    url: str | None = None

    @field_validator("source")
    @classmethod
    def _source_not_blank(cls, value: str) -> str:
        if not value or not value.strip():
            raise ValueError("source must not be empty")
        return value.strip()

    @model_validator(mode="after")
    def _web_items_carry_retrieval_time(self):
        if self.origin is EvidenceOrigin.WEB_SEARCH and self.retrieved_at is None:
            raise ValueError("web_search evidence requires retrieved_at")
        return self

    def citation(self) -> str:
        """Render as the `(date, source)` marker the citation checks recognise."""
        return f"({self.date.isoformat()}, {self.source})"

    def to_readable_string(self) -> str:
        value = ""
        if self.value is not None:
            value = f" [{self.value:g}{' ' + self.unit if self.unit else ''}]"
        tag = f" <{self.factor_tag}>" if self.factor_tag else ""
        return f"{self.citation()} {self.kind.value}{tag}: {self.content}{value}"

    def __str__(self) -> str:
        return self.to_readable_string()


class RecencyPolicy(BaseModel):
    model_config = ConfigDict(frozen=True)

    window_days: int = Field(ge=1)
    as_of: dt.date

    @property
    def floor(self) -> dt.date:
        return self.as_of - dt.timedelta(days=self.window_days)

    def in_window(self, day: dt.date) -> bool:
        return self.floor <= day <= self.as_of


class Rejection(BaseModel):
    company_id: str
    record_index: int
    field: str
    reason: str


class IngestResult(BaseModel):
    company_id: str
    items: list[EvidenceItem] = []
    rejections: list[Rejection] = []


class CompanySummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    company_id: str
    company_name: str
    overview: str
    per_factor_digest: dict[str, tuple[str, ...]]
    evidence: tuple[EvidenceItem, ...]

    def item(self, item_id: str) -> EvidenceItem:
        for candidate in self.evidence:
            if candidate.item_id == item_id:
                return candidate
        raise KeyError(item_id)

    def digest_lines(self, label_for=lambda factor: factor) -> list[str]:
        lines = []
        for factor, refs in self.per_factor_digest.items():
            lines.append(f"[{label_for(factor)}]")
            lines.extend(f"- {self.item(ref)}" for ref in refs)
        return lines
