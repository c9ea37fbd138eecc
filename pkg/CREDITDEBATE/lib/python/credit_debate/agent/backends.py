import json
import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Any, Protocol, runtime_checkable

from langchain_core.messages import convert_to_openai_messages

from ..apis.chat_completions import ChatCompletionsAPIClient
from ..errors import ConfigurationError
from .prompts import PromptBundle


@runtime_checkable
class GenerationBackend(Protocol):
    mode: str
    model_id: str

    def complete(self, bundle: PromptBundle) -> str: ...


class ScriptedBackend:
    """
    Deterministic backend replaying canned texts keyed by (role, step).

    Script layout::

        {"A1": {"1": "text", "8": {"text": "...", "after_search": "..."}},
         "nas_analyst": {"nas": "..."},
         "search_results": {"<query>": [{"title", "snippet", "date", "source", "url"}]}}

    `after_search` answers the second round of a step that requested a web search; without it
    the step text is replayed.
    """

    mode = "scripted"

    def __init__(self, script: dict[str, Any], model_id: str = "scripted"):
        self.model_id = model_id
        self.search_results: dict[str, list[dict[str, Any]]] = script.get("search_results", {})
        self._entries = {role: steps for role, steps in script.items() if role != "search_results"}

    @classmethod
    def from_file(cls, path: Path, model_id: str = "scripted") -> "ScriptedBackend":
        path = Path(path)
        if not path.is_file():
            raise ConfigurationError(f"Scripted transcript not found: {path}")
        try:
            script = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Scripted transcript {path} is not valid JSON: {e}")
        return cls(script, model_id=model_id)

    def has(self, role_id: str, step: int | str) -> bool:
        return str(step) in self._entries.get(role_id, {})

    def require(self, pairs: Iterable[tuple[str, int | str]]) -> None:
        """Fail fast when the script cannot cover every (role, step) the run will ask for."""
        missing = [f"({role}, step {step})" for role, step in pairs if not self.has(role, step)]
        if missing:
            raise ConfigurationError(f"Scripted transcript has no entry for {', '.join(missing)}")

    def complete(self, bundle: PromptBundle) -> str:
        if not self.has(bundle.role, bundle.step):
            raise ConfigurationError(f"Scripted transcript has no entry for ({bundle.role}, step {bundle.step})")
        entry = self._entries[bundle.role][str(bundle.step)]
        if isinstance(entry, str):
            return entry
        if bundle.round > 1 and "after_search" in entry:
            return entry["after_search"]
        return entry["text"]


class RemoteBackend:
    """Chat-completion backend; sampling parameters pass through untouched when set."""

    mode = "remote"

    def __init__(
        self,
        client: ChatCompletionsAPIClient,
        model_id: str,
        temperature: float | None = None,
        top_p: float | None = None,
    ):
        self.client = client
        self.model_id = model_id
        self.temperature = temperature
        self.top_p = top_p

    def complete(self, bundle: PromptBundle) -> str:
        messages = convert_to_openai_messages(bundle.to_messages())
        logging.debug("Remote generation for %s step %s (round %d)", bundle.role, bundle.step, bundle.round)
        return self.client.complete(self.model_id, messages, temperature=self.temperature, top_p=self.top_p)
