from collections.abc import Iterable, Sequence

from ..agent.roles import Team, get_role
from ..guideline import FactorUsageLedger, Side, check_factor_reuse, evidence_fingerprint, record_usage
from ..knowledge import EvidenceItem
from ..violations import Severity, Violation, ViolationKind
from .extraction import extract_structure
from .models import Citation, Utterance
from .schedule import DebateStepSpec

NO_EVIDENCE = evidence_fingerprint(None, None, None)


def side_of(speaker: str) -> Side:
    team = get_role(speaker).team
    if team is Team.NEUTRAL:
        raise ValueError(f"Role {speaker} does not debate")
    return Side(team.value)


def build_utterance(step: DebateStepSpec, speaker: str, text: str, elapsed_seconds: float = 0.0) -> Utterance:
    structure = extract_structure(text)
    return Utterance(
        step_index=step.index,
        speaker=speaker,
        kind=step.kind,
        text=text,
        prose=structure.prose,
        citations=structure.citations,
        factors=structure.factors,
        falsifiability_notes=structure.falsifiability_notes,
        question_count=structure.question_count,
        elapsed_seconds=elapsed_seconds,
    )


def usage_entries(utterance: Utterance) -> list[tuple[str, str]]:
    """
    (factor, evidence fingerprint) pairs one utterance puts forward, deduplicated.

    A factor is paired with the citations of the sentences that mention it; a mention without
    a complete citation carries the shared no-evidence fingerprint.
    """
    structure = extract_structure(utterance.text)
    entries: list[tuple[str, str]] = []

    def add(factor: str, fingerprint: str) -> None:
        if (factor, fingerprint) not in entries:
            entries.append((factor, fingerprint))

    for sentence in structure.sentences:
        complete = [c for c in sentence.citations if c.is_complete]
        for factor in sentence.factors:
            if not complete:
                add(factor, NO_EVIDENCE)
            for citation in complete:
                add(factor, evidence_fingerprint(citation.date, citation.source, citation.value))
    for citation in structure.citations:
        if citation.from_sidecar and citation.factor and citation.is_complete:
            add(citation.factor, evidence_fingerprint(citation.date, citation.source, citation.value))
    for factor in structure.factors:
        if not any(f == factor for f, _ in entries):
            add(factor, NO_EVIDENCE)
    return entries


def record_step_usage(ledger: FactorUsageLedger, utterance: Utterance, spec: DebateStepSpec) -> FactorUsageLedger:
    if not spec.records_usage:
        return ledger
    side = side_of(utterance.speaker)
    for factor, fingerprint in usage_entries(utterance):
        ledger = record_usage(ledger, side, factor, fingerprint, utterance.step_index)
    return ledger


def _is_web_citation(citation: Citation, web_items: Sequence[EvidenceItem]) -> bool:
    for item in web_items:
        if citation.source and (
            citation.source.lower() in item.source.lower() or item.source.lower() in citation.source.lower()
        ):
            return True
        if not citation.source and citation.date and citation.date.startswith(item.date.isoformat()[:7]):
            return True
    return False


def _citation_violation(kind: ViolationKind, step: int, detail: str, web: bool) -> Violation:
    return Violation(kind=kind, severity=Severity.HARD if web else Severity.ADVISORY, step_index=step, detail=detail)


def citation_violations(utterance: Utterance, web_items: Sequence[EvidenceItem] = ()) -> list[Violation]:
    """Every claim on dated or quantitative evidence carries a date and a source."""
    step = utterance.step_index
    violations = []
    for citation in utterance.citations:
        if citation.is_complete:
            continue
        web = _is_web_citation(citation, web_items)
        if citation.date and not citation.source:
            violations.append(
                _citation_violation(ViolationKind.MISSING_CITATION, step, f"no source for date {citation.date}", web)
            )
        elif citation.source and not citation.date:
            violations.append(
                _citation_violation(ViolationKind.UNDATED_CITATION, step, f"no date for source {citation.source}", web)
            )

    structure = extract_structure(utterance.text)
    for index in structure.unmarked_claims:
        sentence = structure.sentences[index].text
        web = any(item.source.lower() in sentence.lower() for item in web_items)
        violations.append(
            _citation_violation(ViolationKind.MISSING_CITATION, step, f"uncited figure: {sentence[:80]}", web)
        )
    return violations


def validate_step(
    utterance: Utterance,
    spec: DebateStepSpec,
    ledger: FactorUsageLedger,
    *,
    context: Iterable[Utterance] = (),
    web_items: Sequence[EvidenceItem] = (),
) -> list[Violation]:
    """
    Structural checks for one step, in order: speaker, length, factor signals, questions,
    citations, factor reuse and, for closings, factor conservation against the context steps.
    Never raises on content.
    """
    step = spec.index
    violations: list[Violation] = []

    if utterance.step_index != spec.index or utterance.speaker != spec.speaker:
        violations.append(
            Violation.of(
                ViolationKind.ORDER_BREACH,
                step,
                f"expected {spec.speaker} at step {spec.index}, got {utterance.speaker} at step {utterance.step_index}",
            )
        )

    if spec.char_limit is not None:
        length = len(utterance.prose or utterance.text)
        if length > spec.char_limit:
            violations.append(
                Violation.of(ViolationKind.CHAR_LIMIT_EXCEEDED, step, f"{length} characters, limit {spec.char_limit}")
            )

    if spec.min_factor_signals is not None:
        distinct = len(set(utterance.factors))
        if distinct < spec.min_factor_signals:
            violations.append(
                Violation.of(
                    ViolationKind.INSUFFICIENT_FACTOR_SIGNALS,
                    step,
                    f"{distinct} distinct factors, at least {spec.min_factor_signals} required",
                )
            )

    if spec.required_question_count is not None and utterance.question_count < spec.required_question_count:
        violations.append(
            Violation.of(
                ViolationKind.INSUFFICIENT_QUESTIONS,
                step,
                f"{utterance.question_count} questions, {spec.required_question_count} required",
            )
        )

    violations.extend(citation_violations(utterance, web_items))

    if spec.records_usage and utterance.speaker == spec.speaker:
        updated = record_step_usage(ledger, utterance, spec)
        violations.extend(v for v in check_factor_reuse(updated) if v.step_index == step)

    if not spec.allow_new_factors:
        context_factors = {factor for prior in context for factor in prior.factors}
        for factor in utterance.factors:
            if factor not in context_factors:
                violations.append(Violation.of(ViolationKind.NEW_FACTOR_IN_CLOSING, step, factor))

    return violations
