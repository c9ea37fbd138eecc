import datetime as dt
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import Field, SecretStr, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from .errors import ConfigurationError


class BackendMode(str, Enum):
    SCRIPTED = "scripted"
    REMOTE = "remote"


class Strictness(str, Enum):
    STRICT = "strict"
    RECORD_ONLY = "record-only"


class ClockMode(str, Enum):
    WALL = "wall"
    FIXED = "fixed"


class SearchMode(str, Enum):
    ALWAYS = "always"
    IF_SPARSE = "if-sparse"


class JsonConfigFileSource(PydanticBaseSettingsSource):
    """
    Reads a JSON config file mirroring the run configuration.
    The file path itself arrives as the `config_file` init argument.
    """

    def __init__(self, settings_cls: type[BaseSettings], path: Path | None = None):
        super().__init__(settings_cls)
        self.path = Path(path) if path else None

    def get_field_value(self, field: Any, field_name: str) -> tuple[Any, str, bool]:
        return None, field_name, False

    def __call__(self) -> dict[str, Any]:
        if not self.path:
            return {}
        if not self.path.is_file():
            raise ConfigurationError(f"Config file not found: {self.path}")
        try:
            data = json.loads(self.path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Config file {self.path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigurationError(f"Config file {self.path} must contain a JSON object")
        # Accept both `recency_days` and `recency-days` spellings.
        return {key.replace("-", "_"): value for key, value in data.items()}


class ProjectSettings(BaseSettings):
    # Protocol parameters
    recency_days: int = Field(default=90, ge=1)
    max_search: int = Field(default=3, ge=0)
    model_id: str = "gpt-4o"
    locale: str = "ko"
    strictness: Strictness = Strictness.STRICT
    search_mode: SearchMode = SearchMode.ALWAYS

    # Backend
    backend: BackendMode = BackendMode.SCRIPTED
    endpoint: str | None = None
    api_key: SecretStr | None = None
    script_path: Path | None = None
    search_endpoint: str | None = None
    search_api_key: SecretStr | None = None
    temperature: float | None = None
    top_p: float | None = None
    request_timeout: float = Field(default=60.0, gt=0)

    # Paths
    output_dir: Path = Path("runs")
    prompt_dir: Path | None = None
    pool_dir: Path | None = None

    # Runtime
    clock: ClockMode = ClockMode.WALL
    fixed_time: dt.datetime | None = None
    as_of: dt.date | None = None
    workers: int = Field(default=1, ge=1)

    # --- Runtime Injection Field ---
    config_file: Path | None = Field(default=None, exclude=True)
    model_config = SettingsConfigDict(
        env_prefix="CREDIT_DEBATE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @model_validator(mode="after")
    def _backend_is_usable(self):
        if self.backend is BackendMode.REMOTE:
            if self.api_key is None or not self.api_key.get_secret_value():
                raise ConfigurationError("Remote backend requires an API key (CREDIT_DEBATE_API_KEY).")
            if not self.endpoint:
                raise ConfigurationError("Remote backend requires an endpoint.")
        return self

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # init_settings.init_kwargs holds the dict of arguments passed to __init__
        config_file = init_settings.init_kwargs.get("config_file")
        return (
            init_settings,
            JsonConfigFileSource(settings_cls, path=config_file),
            env_settings,
            dotenv_settings,
        )

    def as_of_date(self, today: dt.date) -> dt.date:
        return self.as_of or today

    def run_config(self) -> dict[str, Any]:
        """Serializable view for run directories; secrets never leave the process."""
        data = self.model_dump(mode="json", exclude={"api_key", "search_api_key", "config_file"})
        logging.debug("Run configuration: %s", data)
        return data
