import logging
from pathlib import Path
from typing import Any

from langchain_core.messages import BaseMessage, HumanMessage, SystemMessage
from langchain_core.prompts import PromptTemplate
from pydantic import BaseModel, ConfigDict

from ..errors import ConfigurationError
from ..guideline import FactorTable, load_factor_table
from ..journal import digest_text
from .roles import DEBATE_ROLE_IDS, ROLES

DEFAULT_PROMPT_DIR = Path(__file__).resolve().parent.parent / "prompts"

LOCALE_LANGUAGES = {
    "ko": "Korean",
    "en": "English",
    "ja": "Japanese",
    "zh": "Chinese",
    "fr": "French",
    "de": "German",
}


class PromptBundle(BaseModel):
    """Everything one generation call sees: role prompt, task, and the injected prior utterances."""

    model_config = ConfigDict(frozen=True)

    role: str
    step: int | str
    system: str
    task: str
    context: tuple[str, ...] = ()
    context_indices: tuple[int, ...] = ()
    web_evidence: tuple[str, ...] = ()
    locale: str = "ko"
    round: int = 1

    def human_text(self) -> str:
        parts = [self.task]
        if self.context:
            blocks = [
                f"[Step {index}]\n{text}" for index, text in zip(self.context_indices, self.context, strict=True)
            ]
            parts.append("Prior debate records:\n\n" + "\n\n".join(blocks))
        if self.web_evidence:
            parts.append("Web search results (cite date and source):\n" + "\n".join(f"- {line}" for line in self.web_evidence))
        return "\n\n".join(parts)

    def to_messages(self) -> list[BaseMessage]:
        return [SystemMessage(content=self.system), HumanMessage(content=self.human_text())]

    @property
    def text(self) -> str:
        return self.system + "\n\n" + self.human_text()

    def digest(self) -> str:
        return digest_text(self.text)


class PromptLibrary:
    """
    Loads the jinja2 prompt templates shipped under `prompts/` (or a configured directory).

    Layout: `roles/<role>.j2` system prompts, `tasks/<name>.j2` task prompts, plus the shared
    `guideline.j2`, `debate_rules.j2`, `task_guideline.j2` and `company_data.j2` fragments.
    """

    def __init__(self, prompt_dir: Path | None = None, locale: str = "ko", factors: FactorTable | None = None):
        self.prompt_dir = Path(prompt_dir) if prompt_dir else DEFAULT_PROMPT_DIR
        self.locale = locale
        self.factors = factors or load_factor_table()
        self._cache: dict[str, PromptTemplate] = {}

    @property
    def language(self) -> str:
        return LOCALE_LANGUAGES.get(self.locale, self.locale)

    def _load(self, relative: str, missing_message: str) -> PromptTemplate:
        if relative not in self._cache:
            path = self.prompt_dir / relative
            if not path.is_file():
                raise ConfigurationError(f"{missing_message}: {path}")
            logging.debug("Loading prompt template %s", path)
            self._cache[relative] = PromptTemplate.from_file(path, encoding="utf-8", template_format="jinja2")
        return self._cache[relative]

    def _render(self, template: PromptTemplate, **variables: Any) -> str:
        variables.setdefault("language", self.language)
        variables.setdefault("locale", self.locale)
        return template.format(**variables).strip()

    def has_role(self, role_id: str) -> bool:
        return (self.prompt_dir / "roles" / f"{role_id}.j2").is_file()

    def role_system(self, role_id: str, **variables: Any) -> str:
        template = self._load(f"roles/{role_id}.j2", f"Missing prompt template for role {role_id}")
        role = ROLES.get(role_id)
        values = {"role": role_id, **variables}
        values.setdefault("search_allowed", bool(role and role.search_allowed))
        if "guideline" in template.input_variables and "guideline" not in values:
            values["guideline"] = self.guideline_text(debate=role_id in DEBATE_ROLE_IDS, **variables)
        if "debate_rules" in template.input_variables and "debate_rules" not in values:
            values["debate_rules"] = self.debate_rules(**values)
        return self._render(template, **values)

    def task(self, name: str, **variables: Any) -> str:
        template = self._load(f"tasks/{name}.j2", f"Missing task template '{name}'")
        for fragment in ("task_guideline", "company_data"):
            if fragment in template.input_variables and fragment not in variables:
                variables[fragment] = self._fragment(fragment, **variables)
        return self._render(template, **variables)

    def guideline_text(self, debate: bool = False, **variables: Any) -> str:
        factors = [
            {
                "id": f.id,
                "label": f.label,
                "criterion": f.criterion,
                "rules": [{"observation": o.value, "signal": s.value} for o, s in f.direction_rule.items()],
            }
            for f in self.factors
        ]
        return self._fragment("guideline", factors=factors, debate=debate, **variables)

    def debate_rules(self, **variables: Any) -> str:
        return self._fragment("debate_rules", **variables)

    def _fragment(self, name: str, **variables: Any) -> str:
        return self._render(self._load(f"{name}.j2", f"Missing {name} template"), **variables)
