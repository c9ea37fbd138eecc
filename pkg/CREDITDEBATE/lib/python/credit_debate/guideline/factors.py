import json
import re
from enum import Enum
from functools import cache
from pathlib import Path

from pydantic import BaseModel, ConfigDict, field_validator

from ..errors import ClassificationError

FACTOR_TABLE_PATH = Path(__file__).parent / "factors.json"

FACTOR_IDS = (
    "industry_growth_outlook",
    "competition_intensity",
    "technological_disruption_risk",
    "economic_cyclicality",
    "government_support",
    "internal_control_risk",
    "managerial_continuity",
    "employment_stability",
    "certification_status",
    "search_volume_trend",
)


class SignalPolarity(str, Enum):
    FAVORABLE = "favorable"
    ADVERSE = "adverse"
    CONTEXT_DEPENDENT = "context_dependent"


class ObservationPolarity(str, Enum):
    HIGHER = "higher"
    LOWER = "lower"
    PRESENT = "present"
    ABSENT = "absent"
    INCREASING = "increasing"
    DECREASING = "decreasing"
    MORE_STABLE = "more_stable"
    LESS_STABLE = "less_stable"


class Factor(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    label: str
    criterion: str
    aliases: tuple[str, ...] = ()
    direction_rule: dict[ObservationPolarity, SignalPolarity]

    @field_validator("direction_rule")
    @classmethod
    def _rule_not_empty(cls, value):
        if not value:
            raise ValueError("direction_rule must map at least one observation")
        return value

    @property
    def names(self) -> tuple[str, ...]:
        """Every surface form that identifies this factor in free text."""
        return (self.label, self.id, *self.aliases)


def _alias_pattern(alias: str) -> str:
    # Boundaries only where the alias edge is ASCII; Hangul aliases are followed by particles.
    body = re.escape(alias).replace(r"\ ", r"[\s_-]+")
    head = r"(?<![A-Za-z0-9])" if alias[:1].isascii() else ""
    tail = r"(?![A-Za-z0-9])" if alias[-1:].isascii() else ""
    return head + body + tail


class FactorTable:
    """The ten-factor guideline, loaded once from the shared JSON export."""

    def __init__(self, factors: list[Factor]):
        ids = [f.id for f in factors]
        if tuple(ids) != FACTOR_IDS:
            raise ValueError(f"Factor table must list exactly the ten guideline factors, got {ids}")
        self.factors = tuple(factors)
        self._by_id = {f.id: f for f in factors}
        self._alias_index: dict[str, str] = {}
        for factor in factors:
            for name in factor.names:
                self._alias_index[self._key(name)] = factor.id
        # Longest aliases first so "industry growth outlook" wins over "industry growth".
        surface = sorted(
            ((name, f.id) for f in factors for name in f.names),
            key=lambda pair: len(pair[0]),
            reverse=True,
        )
        self._matchers = [(re.compile(_alias_pattern(name), re.IGNORECASE), fid) for name, fid in surface]

    @staticmethod
    def _key(name: str) -> str:
        return re.sub(r"[\s_-]+", " ", name.strip().lower())

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __contains__(self, factor_id: str) -> bool:
        return factor_id in self._by_id

    def get(self, factor_id: str) -> Factor:
        return self._by_id[factor_id]

    def resolve(self, name: str) -> str | None:
        """Map an id, label or registered alias to a factor id."""
        return self._alias_index.get(self._key(name))

    def normalize_tag(self, tag: str) -> str:
        """Table factors come back as their id; anything else is kept as a context-dependent tag."""
        return self.resolve(tag) or tag.strip()

    def label_for(self, factor_id: str) -> str:
        factor = self._by_id.get(factor_id)
        return factor.label if factor else factor_id

    def find_mentions(self, text: str) -> list[tuple[int, str]]:
        """Return (offset, factor id) for every non-overlapping factor mention, in text order."""
        taken: list[tuple[int, int]] = []
        found = []
        for pattern, factor_id in self._matchers:
            for match in pattern.finditer(text):
                start, end = match.span()
                if any(start < t_end and end > t_start for t_start, t_end in taken):
                    continue
                taken.append((start, end))
                found.append((start, factor_id))
        return sorted(found)

    def factors_in(self, text: str) -> list[str]:
        """Distinct factor ids mentioned in the text, in order of first mention."""
        seen: list[str] = []
        for _, factor_id in self.find_mentions(text):
            if factor_id not in seen:
                seen.append(factor_id)
        return seen

    def to_json(self) -> str:
        return json.dumps(
            {"factors": [f.model_dump(mode="json") for f in self.factors]},
            ensure_ascii=False,
            indent=2,
        )


@cache
def load_factor_table(path: Path = FACTOR_TABLE_PATH) -> FactorTable:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return FactorTable([Factor(**item) for item in raw["factors"]])


def classify_signal(factor: Factor | str, observation: ObservationPolarity | str) -> SignalPolarity:
    """
    Interpret an observation about a factor according to the guideline.

    Factors outside the table are context dependent: the caller has to supply the judgment.
    """
    table = load_factor_table()
    if isinstance(factor, str):
        factor_id = table.resolve(factor)
        if factor_id is None:
            return SignalPolarity.CONTEXT_DEPENDENT
        factor = table.get(factor_id)

    try:
        observation = ObservationPolarity(observation)
    except ValueError:
        raise ClassificationError(f"Unknown observation polarity '{observation}'.")

    if observation not in factor.direction_rule:
        allowed = ", ".join(o.value for o in factor.direction_rule)
        raise ClassificationError(
            f"Observation '{observation.value}' does not apply to {factor.id}; expected one of: {allowed}"
        )
    return factor.direction_rule[observation]
