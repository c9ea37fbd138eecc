import json
import logging
import tempfile
from pathlib import Path
from typing import Any

from .agent import AgentBuilder
from .config import BackendMode, ClockMode, ProjectSettings
from .debate import run_debate
from .errors import CreditDebateError, ProtocolViolationError, UsageError
from .journal import RunJournal, digest_text
from .knowledge import KnowledgePool
from .nas import run_nas
from .synthesis import aggregate, polish_report, render_report, report_filename

RUN_CONFIG = "run_config.json"
JOURNAL = "journal.jsonl"
ARTIFACT_INDEX = "artifacts.json"

# Keys whose values depend on wall time; dropped before the stable digest.
TIMING_KEYS = frozenset({"metadata", "elapsed_seconds", "started_at", "retrieved_at", "ts"})


def dump_json(document: Any) -> str:
    return json.dumps(document, ensure_ascii=False, indent=2) + "\n"


def write_json(path: Path, document: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(document), encoding="utf-8")
    return path


def strip_timing(document: Any) -> Any:
    if isinstance(document, dict):
        return {k: strip_timing(v) for k, v in document.items() if k not in TIMING_KEYS}
    if isinstance(document, list):
        return [strip_timing(v) for v in document]
    return document


def artifact_digests(path: Path) -> dict[str, str]:
    text = path.read_text(encoding="utf-8")
    stable = json.dumps(strip_timing(json.loads(text)), ensure_ascii=False, sort_keys=True)
    return {"sha256": digest_text(text), "sha256_stable": digest_text(stable)}


def write_artifact_index(run_dir: Path, names: list[str]) -> dict[str, dict[str, str]]:
    index = {name: artifact_digests(run_dir / name) for name in sorted(names)}
    write_json(run_dir / ARTIFACT_INDEX, index)
    return index


def run_directory(settings: ProjectSettings, run_id: str, company_id: str) -> Path:
    return Path(settings.output_dir) / run_id / company_id


def write_run_config(
    run_dir: Path, command: str, company_id: str, run_id: str, settings: ProjectSettings, **extra: Any
) -> Path:
    document = {"command": command, "company_id": company_id, "run_id": run_id, "settings": settings.run_config()}
    document.update(extra)
    return write_json(run_dir / RUN_CONFIG, document)


def execute_nas(company_id: str, pool: KnowledgePool, settings: ProjectSettings, run_id: str) -> Path:
    """Run one analysis session into its own run directory and index its artifacts."""
    run_dir = run_directory(settings, run_id, company_id)
    runtime = AgentBuilder(settings).build()
    journal = RunJournal(run_dir / JOURNAL, clock=runtime.clock)
    write_run_config(run_dir, "nas", company_id, run_id, settings)

    run_nas(company_id, pool, runtime, run_id=run_id, journal=journal, output_dir=run_dir)
    write_artifact_index(run_dir, [f"{company_id}_{run_id}_nas_report.json"])
    return run_dir


def execute_debate(
    company_id: str, pool: KnowledgePool, settings: ProjectSettings, run_id: str, polish: bool = False
) -> Path:
    """
    Run one debate session, then persist the transcript and its summary report.

    An aborted session still leaves its partial transcript and artifact index behind.
    """
    run_dir = run_directory(settings, run_id, company_id)
    runtime = AgentBuilder(settings).build()
    journal = RunJournal(run_dir / JOURNAL, clock=runtime.clock)
    write_run_config(run_dir, "debate", company_id, run_id, settings, polish=polish)
    transcript_name = f"{company_id}_{run_id}_transcript.json"

    try:
        transcript = run_debate(company_id, pool, runtime, run_id=run_id, journal=journal)
    except CreditDebateError as e:
        partial = getattr(e, "transcript", None)
        if partial is not None:
            write_json(run_dir / transcript_name, partial.to_json())
            write_artifact_index(run_dir, [transcript_name])
        raise

    write_json(run_dir / transcript_name, transcript.to_json())

    summary = pool.summarize_company(company_id)
    report = aggregate(
        transcript,
        overview=summary.overview,
        transcript_ref=transcript_name,
        pool_factors=list(summary.per_factor_digest),
    )
    if polish:
        agents = AgentBuilder(settings).instantiate_agents(runtime.prompts, recency_days=settings.recency_days)
        report = polish_report(report, agents["aggregator"], runtime, journal)

    report_name = report_filename(company_id, run_id)
    write_json(run_dir / report_name, render_report(report))
    write_artifact_index(run_dir, [transcript_name, report_name])
    return run_dir


def replay(run_dir: Path) -> dict[str, Any]:
    """
    Re-execute a scripted run from its run directory and compare artifact digests.

    Raw digests are compared when the run used a fixed clock, timing-stripped digests
    otherwise. A mismatch raises ProtocolViolationError.
    """
    run_dir = Path(run_dir)
    config_path = run_dir / RUN_CONFIG
    if not config_path.is_file():
        raise UsageError(f"{run_dir} is not a run directory (no {RUN_CONFIG})")
    config = json.loads(config_path.read_text(encoding="utf-8"))
    recorded = json.loads((run_dir / ARTIFACT_INDEX).read_text(encoding="utf-8"))

    with tempfile.TemporaryDirectory() as scratch:
        settings = ProjectSettings(**{**config["settings"], "output_dir": scratch})
        if settings.backend is not BackendMode.SCRIPTED:
            raise UsageError("Only scripted runs can be replayed.")
        if settings.pool_dir is None:
            raise UsageError("The run configuration does not name a pool directory.")
        pool, _ = KnowledgePool.from_directory(settings.pool_dir)

        company_id, run_id = config["company_id"], config["run_id"]
        if config["command"] == "nas":
            new_dir = execute_nas(company_id, pool, settings, run_id)
        else:
            new_dir = execute_debate(company_id, pool, settings, run_id, polish=config.get("polish", False))
        fresh = json.loads((new_dir / ARTIFACT_INDEX).read_text(encoding="utf-8"))

    key = "sha256" if settings.clock is ClockMode.FIXED else "sha256_stable"
    mismatched = sorted(
        name for name in set(recorded) | set(fresh) if recorded.get(name, {}).get(key) != fresh.get(name, {}).get(key)
    )
    result = {"run_dir": str(run_dir), "compared": key, "artifacts": sorted(recorded), "mismatched": mismatched}
    if mismatched:
        logging.error("Replay of %s diverged on %s", run_dir, ", ".join(mismatched))
        raise ProtocolViolationError(f"Replay diverged for {', '.join(mismatched)}")
    return result
