from collections.abc import Sequence

from ..agent import PromptBundle, PromptLibrary
from ..knowledge import CompanySummary, EvidenceItem, RecencyPolicy

NAS_STEP = "nas"
SPARSE_NEWS_THRESHOLD = 3


def compose_prompt(
    summary: CompanySummary,
    web: Sequence[EvidenceItem],
    guideline_text: str,
    *,
    prompts: PromptLibrary | None = None,
    policy: RecencyPolicy | None = None,
) -> PromptBundle:
    """Guideline, company digest, dated web evidence and the output schema, in one bundle."""
    prompts = prompts or PromptLibrary()
    factors = prompts.factors
    return PromptBundle(
        role="nas_analyst",
        step=NAS_STEP,
        system=prompts.role_system("nas_analyst", guideline=guideline_text),
        task=prompts.task(
            "nas_analysis",
            company_id=summary.company_id,
            company_name=summary.company_name,
            overview=summary.overview,
            digest=summary.digest_lines(factors.label_for),
            web=[str(item) for item in web],
            as_of=policy.as_of.isoformat() if policy else "",
            recency_days=policy.window_days if policy else "",
        ),
        locale=prompts.locale,
    )


def is_sparse(summary: CompanySummary, policy: RecencyPolicy) -> bool:
    recent_news = [i for i in summary.evidence if i.kind.value == "news" and policy.in_window(i.date)]
    return len(recent_news) < SPARSE_NEWS_THRESHOLD
