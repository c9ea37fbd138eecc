import copy
import datetime as dt
import json
import os
import random
from pathlib import Path

import pytest

from credit_debate.agent import AgentBuilder, PromptLibrary, Runtime, ScriptedBackend
from credit_debate.apis.search import StaticSearchClient
from credit_debate.clock import FixedClock
from credit_debate.config import ProjectSettings
from credit_debate.debate import SCHEDULE, StepKind
from credit_debate.guideline import load_factor_table
from credit_debate.journal import RunJournal
from credit_debate.knowledge import KnowledgePool

FIXTURES = Path(__file__).parent / "fixtures"
POOL_DIR = FIXTURES / "pool"
SCRIPT_PATH = FIXTURES / "scripts" / "companyA_debate.json"
TREES_DIR = FIXTURES / "trees"
STATS_DIR = FIXTURES / "stats"
REPORTS_DIR = FIXTURES / "reports"

AS_OF = dt.date(2025, 7, 1)
FIXED_TIME = dt.datetime(2025, 7, 1, 9, 0, tzinfo=dt.timezone.utc)


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    """Keep developer .env files and CREDIT_DEBATE_* variables out of the tests."""
    for key in list(os.environ):
        if key.startswith("CREDIT_DEBATE_"):
            monkeypatch.delenv(key)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def pool() -> KnowledgePool:
    loaded, _ = KnowledgePool.from_directory(POOL_DIR)
    return loaded


@pytest.fixture
def script() -> dict:
    return json.loads(SCRIPT_PATH.read_text(encoding="utf-8"))


@pytest.fixture
def make_settings(tmp_path):
    def _make(**overrides) -> ProjectSettings:
        values = {
            "backend": "scripted",
            "script_path": SCRIPT_PATH,
            "pool_dir": POOL_DIR,
            "output_dir": tmp_path / "runs",
            "clock": "fixed",
            "fixed_time": FIXED_TIME,
            "as_of": AS_OF,
            "recency_days": 90,
            "max_search": 3,
            "locale": "en",
        }
        values.update(overrides)
        return ProjectSettings(**values)

    return _make


@pytest.fixture
def settings(make_settings) -> ProjectSettings:
    return make_settings()


@pytest.fixture
def runtime(settings) -> Runtime:
    return AgentBuilder(settings).build()


@pytest.fixture(scope="session")
def prompt_library() -> PromptLibrary:
    return PromptLibrary(locale="en")


@pytest.fixture
def make_runtime(make_settings, prompt_library):
    """Runtime over an in-memory script, sharing one template cache across calls."""

    def _make(script_doc: dict, **overrides) -> Runtime:
        run_settings = make_settings(**overrides)
        backend = ScriptedBackend(copy.deepcopy(script_doc))
        return Runtime(
            settings=run_settings,
            backend=backend,
            search_provider=StaticSearchClient(backend.search_results),
            prompts=prompt_library,
            clock=FixedClock(FIXED_TIME),
        )

    return _make


@pytest.fixture
def journal() -> RunJournal:
    return RunJournal(clock=FixedClock(FIXED_TIME))


def _random_date(rng: random.Random) -> str:
    return f"2025-{rng.randint(1, 6):02d}-{rng.randint(1, 28):02d}"


def random_script(seed: int) -> dict:
    """A scripted debate built from random factor claims, questions and citations."""
    rng = random.Random(seed)
    labels = [f.label for f in load_factor_table()]
    sources = ["KOSIS", "Yonhap", "DART", "Bank of Korea", "KIPRIS"]
    document: dict = {}
    for spec in SCHEDULE:
        if spec.kind is StepKind.CROSS_EXAMINATION:
            sentences = [
                f"Does the {rng.choice(labels)} argument hold ({_random_date(rng)}, {rng.choice(sources)})?"
                for _ in range(rng.randint(2, 4))
            ]
        else:
            sentences = []
            for _ in range(rng.randint(1, 8)):
                marker = f" ({_random_date(rng)}, {rng.choice(sources)})" if rng.random() < 0.8 else ""
                verb = rng.choice(["supports repayment", "weighs on repayment", "is mixed"])
                sentences.append(f"{rng.choice(labels)} {verb}{marker}.")
        document.setdefault(spec.speaker, {})[str(spec.index)] = " ".join(sentences)
    return document
