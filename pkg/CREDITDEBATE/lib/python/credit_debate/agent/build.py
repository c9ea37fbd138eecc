import logging

from pydantic import BaseModel, ConfigDict

from ..apis.chat_completions import ChatCompletionsAPIClient
from ..apis.search import SearchAPIClient, SearchProvider, StaticSearchClient
from ..clock import Clock, make_clock
from ..config import BackendMode, ClockMode, ProjectSettings
from ..errors import ConfigurationError
from .backends import GenerationBackend, RemoteBackend, ScriptedBackend
from .prompts import PromptLibrary
from .roles import DEBATE_ROLE_IDS, ROLES, AgentRole


class Agent(BaseModel):
    model_config = ConfigDict(frozen=True)

    role: AgentRole
    system_prompt: str

    @property
    def id(self) -> str:
        return self.role.id


class Runtime(BaseModel):
    """Shared services a session needs: backend, search provider, templates and clock."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    settings: ProjectSettings
    backend: GenerationBackend
    search_provider: SearchProvider
    prompts: PromptLibrary
    clock: Clock


class AgentBuilder:

    def __init__(self, settings: ProjectSettings):
        self._settings = settings

    def _build_prompt_library(self) -> PromptLibrary:
        return PromptLibrary(self._settings.prompt_dir, locale=self._settings.locale)

    def _build_backend(self) -> GenerationBackend:
        if self._settings.backend is BackendMode.SCRIPTED:
            if not self._settings.script_path:
                raise ConfigurationError("Scripted backend requires a script file (--script).")
            return ScriptedBackend.from_file(self._settings.script_path, model_id=self._settings.model_id)

        api_key = self._settings.api_key.get_secret_value() if self._settings.api_key else None
        if not api_key or not self._settings.endpoint:
            raise ConfigurationError("Remote backend requires an endpoint and an API key.")
        client = ChatCompletionsAPIClient(self._settings.endpoint, api_key, timeout=self._settings.request_timeout)
        return RemoteBackend(
            client,
            self._settings.model_id,
            temperature=self._settings.temperature,
            top_p=self._settings.top_p,
        )

    def _build_search_provider(self, backend: GenerationBackend) -> SearchProvider:
        if self._settings.search_endpoint:
            key = self._settings.search_api_key.get_secret_value() if self._settings.search_api_key else None
            return SearchAPIClient(self._settings.search_endpoint, key, timeout=self._settings.request_timeout)
        if isinstance(backend, ScriptedBackend):
            return StaticSearchClient(backend.search_results)
        logging.warning("No search endpoint configured; web search will return no results.")
        return StaticSearchClient()

    def _build_clock(self) -> Clock:
        return make_clock(self._settings.clock.value, self._settings.fixed_time)

    def instantiate_agents(self, prompts: PromptLibrary | None = None, **variables) -> dict[str, Agent]:
        """The six debaters plus the aggregator, each with its rendered role prompt."""
        prompts = prompts or self._build_prompt_library()
        agents = {}
        for role_id in (*DEBATE_ROLE_IDS, "aggregator"):
            agents[role_id] = Agent(role=ROLES[role_id], system_prompt=prompts.role_system(role_id, **variables))
        logging.debug("Instantiated agents: %s", ", ".join(agents))
        return agents

    def build(self) -> Runtime:
        backend = self._build_backend()
        if self._settings.clock is ClockMode.FIXED:
            logging.debug("Using fixed clock at %s", self._settings.fixed_time)
        return Runtime(
            settings=self._settings,
            backend=backend,
            search_provider=self._build_search_provider(backend),
            prompts=self._build_prompt_library(),
            clock=self._build_clock(),
        )
