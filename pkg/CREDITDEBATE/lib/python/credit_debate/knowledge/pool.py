import datetime as dt
import json
import logging
import threading
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

from ..errors import IngestionError, InsufficientDataError
from ..guideline import FACTOR_IDS, load_factor_table
from .models import (
    KIND_DEFAULT_FACTOR,
    CompanySummary,
    EvidenceItem,
    EvidenceKind,
    IngestResult,
    RecencyPolicy,
    Rejection,
)


class Retrieval(BaseModel):
    company_id: str
    items: list[EvidenceItem]
    unknown_company: bool = False

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)


def _parse_pool_date(raw: Any) -> dt.date:
    if not isinstance(raw, str):
        raise ValueError("date must be a YYYY-MM-DD string")
    return dt.date.fromisoformat(raw)


class KnowledgePool:
    """
    Company-scoped evidence store.

    Ingestion happens once, before any read; afterwards the pool is treated as immutable and
    can be shared across sessions.
    """

    def __init__(self):
        self._items: dict[str, list[EvidenceItem]] = {}
        self._overviews: dict[str, str] = {}
        self._names: dict[str, str] = {}
        self._seq = 0
        self._write_lock = threading.Lock()
        self._factors = load_factor_table()

    @classmethod
    def from_directory(cls, directory: Path) -> tuple["KnowledgePool", list[IngestResult]]:
        pool = cls()
        results = []
        for path in sorted(Path(directory).glob("*.json")):
            logging.debug("Loading pool file %s", path)
            try:
                document = json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as e:
                raise IngestionError(f"{path.name} is not valid JSON: {e}", field="<document>")
            results.append(pool.ingest_document(document))
        return pool, results

    def ingest_document(self, raw_record: dict[str, Any], company_id: str | None = None) -> IngestResult:
        """Admit every well-formed record of one company document; reject the rest individually."""
        if not isinstance(raw_record, dict):
            raise IngestionError("Pool document must be a JSON object", field="<document>")

        doc_company = raw_record.get("company_id")
        if company_id is None:
            company_id = doc_company
        if not isinstance(company_id, str) or not company_id.strip():
            raise IngestionError("Missing company identifier", field="company_id")
        if doc_company is not None and doc_company != company_id:
            raise IngestionError(f"Document belongs to '{doc_company}', not '{company_id}'", field="company_id")

        summary = raw_record.get("company_summary", "")
        if not isinstance(summary, str):
            raise IngestionError("company_summary must be a string", field="company_summary")
        records = raw_record.get("company_data")
        if not isinstance(records, list):
            raise IngestionError("company_data must be a list of records", field="company_data")

        result = IngestResult(company_id=company_id)
        with self._write_lock:
            self._overviews[company_id] = summary
            self._names[company_id] = raw_record.get("company_name") or company_id
            bucket = self._items.setdefault(company_id, [])
            for index, record in enumerate(records):
                item_or_rejection = self._admit(company_id, index, record)
                if isinstance(item_or_rejection, Rejection):
                    logging.warning(
                        "Rejected record %s of %s: %s", index, company_id, item_or_rejection.reason
                    )
                    result.rejections.append(item_or_rejection)
                else:
                    bucket.append(item_or_rejection)
                    result.items.append(item_or_rejection)

        logging.debug(
            "Ingested %d items for %s (%d rejected)", len(result.items), company_id, len(result.rejections)
        )
        return result

    def _admit(self, company_id: str, index: int, record: Any) -> EvidenceItem | Rejection:
        def reject(field: str, reason: str) -> Rejection:
            return Rejection(company_id=company_id, record_index=index, field=field, reason=reason)

        if not isinstance(record, dict):
            return reject("<record>", "record is not an object")
        try:
            kind = EvidenceKind(record.get("kind"))
        except ValueError:
            return reject("kind", f"unknown kind {record.get('kind')!r}")
        if not record.get("date"):
            return reject("date", "time-stamped record has no date")
        try:
            date = _parse_pool_date(record["date"])
        except ValueError:
            return reject("date", f"unparseable date {record['date']!r}")
        source = record.get("source")
        if not isinstance(source, str) or not source.strip():
            return reject("source", "record has no source")

        tag = record.get("factor_tag")
        factor_tag = self._factors.normalize_tag(tag) if tag else KIND_DEFAULT_FACTOR.get(kind)

        self._seq += 1
        try:
            return EvidenceItem(
                item_id=f"{company_id}:{self._seq:05d}",
                company_id=company_id,
                kind=kind,
                factor_tag=factor_tag,
                content=record.get("content") or "",
                value=record.get("value"),
                unit=record.get("unit"),
                date=date,
                source=source,
            )
        except ValidationError as e:
            field = ".".join(str(p) for p in e.errors()[0]["loc"]) or "<record>"
            return reject(field, e.errors()[0]["msg"])

    def _factor_order(self, entry: tuple[str, list[str]]) -> tuple[int, str]:
        factor = entry[0]
        if factor in self._factors:
            return FACTOR_IDS.index(factor), factor
        return len(FACTOR_IDS), factor

    def companies(self) -> list[str]:
        return sorted(self._items)

    def knows(self, company_id: str) -> bool:
        return company_id in self._items

    def company_name(self, company_id: str) -> str:
        return self._names.get(company_id, company_id)

    def items(self, company_id: str) -> list[EvidenceItem]:
        return list(self._items.get(company_id, []))

    def retrieve(self, company_id: str, policy: RecencyPolicy) -> Retrieval:
        """Company items, in-window first, each tier date-descending; ties keep ingestion order."""
        if company_id not in self._items:
            logging.warning("Retrieval for unknown company %s", company_id)
            return Retrieval(company_id=company_id, items=[], unknown_company=True)

        indexed = list(enumerate(self._items[company_id]))
        indexed.sort(key=lambda pair: (not policy.in_window(pair[1].date), -pair[1].date.toordinal(), pair[0]))
        return Retrieval(company_id=company_id, items=[item for _, item in indexed])

    def summarize_company(self, company_id: str) -> CompanySummary:
        items = self._items.get(company_id)
        if not items:
            raise InsufficientDataError(company_id)

        ordered = sorted(enumerate(items), key=lambda pair: (-pair[1].date.toordinal(), pair[0]))
        digest: dict[str, list[str]] = {}
        for _, item in ordered:
            if item.factor_tag:
                digest.setdefault(item.factor_tag, []).append(item.item_id)

        return CompanySummary(
            company_id=company_id,
            company_name=self.company_name(company_id),
            overview=self._overviews.get(company_id, ""),
            per_factor_digest={factor: tuple(refs) for factor, refs in sorted(digest.items(), key=self._factor_order)},
            evidence=tuple(item for _, item in ordered),
        )
