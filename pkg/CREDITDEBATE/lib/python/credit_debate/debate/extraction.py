import re
from typing import Any

from pydantic import BaseModel

from ..agent.helpers import split_sidecar
from ..guideline import FactorTable, load_factor_table
from .models import Citation

MONTHS = r"(?:Jan|Feb|Mar|Apr|May|Jun|Jul|Aug|Sep|Sept|Oct|Nov|Dec)[a-z]*\.?"
DATE_TOKEN = re.compile(
    r"^(?:"
    r"\d{4}-\d{1,2}(?:-\d{1,2})?"
    r"|\d{4}[./]\d{1,2}(?:[./]\d{1,2})?\.?"
    r"|\d{4}년(?:\s*\d{1,2}월)?(?:\s*\d{1,2}일)?"
    rf"|(?:\d{{1,2}}\s+)?{MONTHS}\s+\d{{4}}"
    rf"|{MONTHS}\s+\d{{1,2}},?\s+\d{{4}}"
    r"|(?:19|20)\d{2}"
    r")$",
    re.IGNORECASE,
)
VALUE_TOKEN = re.compile(r"^[-+]?[$₩€]?\d[\d,.]*\s*(?:%|[A-Za-z가-힣]{1,10})?$")
SOURCE_PREFIX = re.compile(r"^(?:source|출처)\s*[:：]\s*", re.IGNORECASE)
MARKER = re.compile(r"[(\[]([^()\[\]]{1,240})[)\]]")
QUOTED_SOURCE = re.compile(r"(?:Source|출처)\s*[:：]\s*['\"“‘]([^'\"”’]{1,240})['\"”’]", re.IGNORECASE)
SENTENCE_END = frozenset(".!?？。")
QUESTION_END = re.compile(r"[?？]+(?=[\s\"'”’)\]]|$)")
FIGURE = re.compile(
    r"(?:[$₩€]\s?\d[\d,.]*"
    r"|\d[\d,.]*\s*(?:%|percent|bn|billion|million|trillion|KRW|USD|won|억|만|천|원|명|건|배)"
    r"|\d[\d,.]*\s+(?:employees|patents|staff|workers|projects|units|customers))",
    re.IGNORECASE,
)
FALSIFIABILITY_CUES = re.compile(
    r"falsif|refut|would be (?:wrong|disproven|invalid)|counter-?condition|disproves?|반증|틀릴 수|반박 조건",
    re.IGNORECASE,
)


class Sentence(BaseModel):
    index: int
    text: str
    factors: list[str] = []
    citations: list[Citation] = []
    has_figure: bool = False


class ExtractedStructure(BaseModel):
    prose: str
    citations: list[Citation]
    factors: list[str]
    question_count: int
    falsifiability_notes: str | None = None
    sentences: list[Sentence] = []
    unmarked_claims: list[int] = []
    sidecar: dict[str, Any] | None = None


def split_sentences(prose: str) -> list[str]:
    """Split on terminal punctuation followed by whitespace, never inside a bracketed marker."""
    sentences, depth, start = [], 0, 0
    for i, ch in enumerate(prose):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth = max(0, depth - 1)
        elif ch == "\n":
            sentences.append(prose[start:i])
            start, depth = i + 1, 0
        elif ch in SENTENCE_END and depth == 0 and (i + 1 == len(prose) or prose[i + 1].isspace()):
            sentences.append(prose[start : i + 1])
            start = i + 1
    sentences.append(prose[start:])
    return [s.strip() for s in sentences if s.strip()]


def parse_marker(content: str) -> Citation | None:
    """Read a bracketed group as a citation marker, or return None when it is an ordinary aside."""
    content = content.strip()
    explicit_source = bool(SOURCE_PREFIX.match(content))
    parts = [p.strip() for p in re.split(r"[,;]", SOURCE_PREFIX.sub("", content)) if p.strip()]

    date, value, source_parts = None, None, []
    for part in parts:
        cleaned = SOURCE_PREFIX.sub("", part)
        if date is None and DATE_TOKEN.match(cleaned):
            date = cleaned
        elif value is None and VALUE_TOKEN.match(cleaned):
            value = cleaned
        else:
            source_parts.append(cleaned.strip("'\"“”‘’ "))

    if date is None and not explicit_source:
        return None
    source = ", ".join(p for p in source_parts if p) or None
    if source is not None and not re.search(r"[^\W\d_]", source):
        source = None
    return Citation(date=date, source=source, value=value)


def parse_quoted_source(quoted: str) -> Citation:
    """`Source: 'Publisher, Title (Jan 2024)'` style references; the date may sit in brackets or trail."""
    date, source = None, quoted
    for match in MARKER.finditer(quoted):
        inner = match.group(1).strip()
        if DATE_TOKEN.match(inner):
            date = inner
            source = quoted[: match.start()] + quoted[match.end() :]
            break
    else:
        parts = [p.strip() for p in quoted.split(",")]
        if len(parts) > 1 and DATE_TOKEN.match(parts[-1]):
            date, source = parts[-1], ", ".join(parts[:-1])
    source = source.strip(" ,;")
    return Citation(date=date, source=source or None)


def _mask(text: str, start: int, end: int) -> str:
    return text[:start] + " " * (end - start) + text[end:]


def find_citations(sentence: str) -> tuple[list[Citation], str]:
    """Citations in one sentence, in text order, plus the sentence with every marker blanked out."""
    found: list[tuple[int, Citation]] = []
    masked = sentence
    for match in QUOTED_SOURCE.finditer(sentence):
        found.append((match.start(), parse_quoted_source(match.group(1))))
        masked = _mask(masked, match.start(), match.end())
    for match in MARKER.finditer(masked):
        citation = parse_marker(match.group(1))
        if citation is not None:
            found.append((match.start(), citation))
            masked = _mask(masked, match.start(), match.end())
    found.sort(key=lambda pair: pair[0])
    return [citation for _, citation in found], masked


def _sidecar_citations(sidecar: dict[str, Any], factors: FactorTable) -> list[Citation]:
    citations = []
    for entry in sidecar.get("citations") or []:
        if not isinstance(entry, dict):
            continue
        factor = entry.get("factor")
        citations.append(
            Citation(
                date=str(entry["date"]).strip() if entry.get("date") else None,
                source=str(entry["source"]).strip() if entry.get("source") else None,
                value=str(entry["value"]) if entry.get("value") is not None else None,
                factor=factors.normalize_tag(factor) if isinstance(factor, str) and factor.strip() else None,
                from_sidecar=True,
            )
        )
    return citations


def extract_structure(text: str, factors: FactorTable | None = None) -> ExtractedStructure:
    """Pull citations, factor tags, question count and falsifiability notes out of one utterance."""
    factors = factors or load_factor_table()
    prose, sidecar = split_sidecar(text)

    sentences: list[Sentence] = []
    citations: list[Citation] = []
    for index, sentence_text in enumerate(split_sentences(prose)):
        found, stripped = find_citations(sentence_text)
        found = [c.model_copy(update={"sentence_index": index}) for c in found]
        sentences.append(
            Sentence(
                index=index,
                text=sentence_text,
                factors=factors.factors_in(sentence_text),
                citations=found,
                has_figure=bool(FIGURE.search(stripped)),
            )
        )
        citations.extend(found)

    mentioned = factors.factors_in(prose)
    notes = [s.text for s in sentences if FALSIFIABILITY_CUES.search(s.text)]

    if sidecar:
        seen_pairs = {c.pair for c in citations}
        sidecar_citations = _sidecar_citations(sidecar, factors)
        for citation in sidecar_citations:
            # Inline markers already counted; the sidecar only adds its factor tag.
            if citation.is_complete and citation.pair in seen_pairs:
                continue
            citations.append(citation)
        tagged = [c.factor for c in sidecar_citations if c.factor]
        for tag in [*(sidecar.get("factors") or []), *tagged]:
            if isinstance(tag, str) and tag.strip():
                factor_id = factors.normalize_tag(tag)
                if factor_id not in mentioned:
                    mentioned.append(factor_id)
        if isinstance(sidecar.get("falsifiability"), str) and sidecar["falsifiability"].strip():
            notes.append(sidecar["falsifiability"].strip())

    unmarked = [s.index for s in sentences if s.has_figure and not s.citations]

    return ExtractedStructure(
        prose=prose,
        citations=citations,
        factors=mentioned,
        question_count=len(QUESTION_END.findall(prose)),
        falsifiability_notes=" ".join(notes) or None,
        sentences=sentences,
        unmarked_claims=unmarked,
        sidecar=sidecar,
    )
