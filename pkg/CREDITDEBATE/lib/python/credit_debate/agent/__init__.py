from .backends import GenerationBackend, RemoteBackend, ScriptedBackend
from .build import Agent, AgentBuilder, Runtime
from .prompts import PromptBundle, PromptLibrary
from .roles import DEBATE_ROLE_IDS, ROLES, AgentRole, Team, get_role
from .runtime import SearchBudget, SearchOutcome, generate, news_query, pipeline_search, topic_query, web_search

__all__ = [
    "DEBATE_ROLE_IDS",
    "ROLES",
    "Agent",
    "AgentBuilder",
    "AgentRole",
    "GenerationBackend",
    "PromptBundle",
    "PromptLibrary",
    "RemoteBackend",
    "Runtime",
    "ScriptedBackend",
    "SearchBudget",
    "SearchOutcome",
    "Team",
    "generate",
    "get_role",
    "news_query",
    "pipeline_search",
    "topic_query",
    "web_search",
]
