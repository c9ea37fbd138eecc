from enum import Enum

from pydantic import BaseModel, ConfigDict


class Team(str, Enum):
    AFFIRMATIVE = "affirmative"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


class AgentRole(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    team: Team
    search_allowed: bool
    title: str

    def __str__(self) -> str:
        return self.id


DEBATE_ROLE_IDS = ("A1", "A2", "A3", "N1", "N2", "N3")
SEARCH_ENABLED_ROLE_IDS = frozenset({"A1", "A2", "N1", "N2"})

ROLES: dict[str, AgentRole] = {
    "A1": AgentRole(id="A1", team=Team.AFFIRMATIVE, search_allowed=True, title="Affirmative first speaker"),
    "A2": AgentRole(id="A2", team=Team.AFFIRMATIVE, search_allowed=True, title="Affirmative rebuttal speaker"),
    "A3": AgentRole(id="A3", team=Team.AFFIRMATIVE, search_allowed=False, title="Affirmative closing speaker"),
    "N1": AgentRole(id="N1", team=Team.NEGATIVE, search_allowed=True, title="Negative first speaker"),
    "N2": AgentRole(id="N2", team=Team.NEGATIVE, search_allowed=True, title="Negative rebuttal speaker"),
    "N3": AgentRole(id="N3", team=Team.NEGATIVE, search_allowed=False, title="Negative closing speaker"),
    "aggregator": AgentRole(id="aggregator", team=Team.NEUTRAL, search_allowed=False, title="Debate aggregator"),
    "nas_analyst": AgentRole(id="nas_analyst", team=Team.NEUTRAL, search_allowed=False, title="Credit analyst"),
}


def get_role(role_id: str) -> AgentRole:
    try:
        return ROLES[role_id]
    except KeyError:
        raise KeyError(f"Unknown agent role '{role_id}'") from None
