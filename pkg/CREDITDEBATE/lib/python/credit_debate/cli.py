import json
import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from . import __version__
from .clock import make_clock
from .config import ProjectSettings
from .errors import ConfigurationError, CreditDebateError, TreeFormatError, UsageError
from .evaluation import (
    WilcoxonMethod,
    column_medians,
    latency_summary,
    load_latency,
    load_pairs,
    load_ratings,
    load_sus,
    sus_medians,
    wilcoxon_signed_rank,
)
from .knowledge import KnowledgePool
from .metrics import build_tree_from_report, compute_rei, load_tree, summarize_rei
from .nas import report_from_document
from .runs import dump_json, execute_debate, execute_nas, replay, write_json
from .synthesis import parse_report


class CreditDebateGroup(click.Group):
    """Maps escaping domain errors to their exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except CreditDebateError as e:
            logging.debug("Command failed", exc_info=True)
            click.echo(f"Error: {e}", err=True)
            ctx.exit(e.exit_code)


@click.group(cls=CreditDebateGroup)
@click.version_option(__version__, prog_name="credit-debate")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    show_default=True,
)
def cli(log_level: str):
    """Non-financial credit analysis: single-pass reports, structured debates and their evaluation."""
    load_dotenv()
    logging.basicConfig(level=log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _settings(**options: Any) -> ProjectSettings:
    overrides = {k: v for k, v in options.items() if v is not None}
    for key in ("script_path", "pool_dir", "prompt_dir"):
        if key in overrides:
            overrides[key] = Path(overrides[key]).resolve()
    try:
        return ProjectSettings(**overrides)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(p) for p in error["loc"]) or "<config>"
        raise ConfigurationError(f"Invalid configuration for {field}: {error['msg']}")


def _load_pool(settings: ProjectSettings) -> KnowledgePool:
    if settings.pool_dir is None:
        raise UsageError("No knowledge pool given (--pool or pool_dir in the config file).")
    if not Path(settings.pool_dir).is_dir():
        raise UsageError(f"Pool directory {settings.pool_dir} does not exist.")
    pool, _ = KnowledgePool.from_directory(settings.pool_dir)
    return pool


def _run_id(settings: ProjectSettings, explicit: str | None) -> str:
    if explicit:
        return explicit
    return make_clock(settings.clock.value, settings.fixed_time).now().strftime("%Y%m%dT%H%M%SZ")


def _fan_out(companies: tuple[str, ...], workers: int, run_one: Callable[[str], Path]) -> dict[str, str]:
    """Run independent sessions on a bounded pool; the first failure is re-raised after all finish."""
    results: dict[str, str] = {}
    failures: list[tuple[str, CreditDebateError]] = []
    with ThreadPoolExecutor(max_workers=max(1, min(workers, len(companies)))) as executor:
        futures = {company: executor.submit(run_one, company) for company in companies}
        for company, future in futures.items():
            try:
                results[company] = str(future.result())
            except CreditDebateError as e:
                logging.error("Session for %s failed: %s", company, e)
                failures.append((company, e))
    click.echo(dump_json({"runs": results, "failed": [company for company, _ in failures]}), nl=False)
    if failures:
        raise failures[0][1]
    return results


def run_options(func):
    """Options shared by the `nas` and `debate` commands."""
    options = [
        click.option("--company", "companies", multiple=True, required=True, help="Company id; repeat for several."),
        click.option("--pool", "pool_dir", type=click.Path(file_okay=False), help="Knowledge pool directory."),
        click.option("--config", "config_file", type=click.Path(dir_okay=False, exists=True), help="JSON run config."),
        click.option("--backend", type=click.Choice(["scripted", "remote"])),
        click.option("--script", "script_path", type=click.Path(dir_okay=False), help="Scripted transcript file."),
        click.option("--endpoint", help="Chat-completion endpoint (remote backend)."),
        click.option("--model", "model_id", help="Model id."),
        click.option("--recency-days", type=int),
        click.option("--max-search", type=int),
        click.option("--locale"),
        click.option("--out", "--output-dir", "output_dir", type=click.Path(file_okay=False)),
        click.option("--prompt-dir", type=click.Path(file_okay=False)),
        click.option("--clock", type=click.Choice(["wall", "fixed"])),
        click.option("--fixed-time", type=click.DateTime(["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d"])),
        click.option("--as-of", type=click.DateTime(["%Y-%m-%d"])),
        click.option("--workers", type=int),
        click.option("--run-id"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _settings_from(options: dict[str, Any]) -> ProjectSettings:
    if options.get("as_of") is not None:
        options["as_of"] = options["as_of"].date()
    return _settings(**options)


@cli.command()
@click.option("--pool", "pool_dir", type=click.Path(file_okay=False, exists=True), required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True)
def ingest(pool_dir: str, out_dir: str):
    """Load a pool directory and write its index and rejected records."""
    pool, results = KnowledgePool.from_directory(Path(pool_dir))
    index = {
        company: {
            "company_name": pool.company_name(company),
            "items": len(pool.items(company)),
            "factor_tags": sorted({i.factor_tag for i in pool.items(company) if i.factor_tag}),
        }
        for company in pool.companies()
    }
    rejections = [r.model_dump() for result in results for r in result.rejections]
    write_json(Path(out_dir) / "pool_index.json", index)
    write_json(Path(out_dir) / "rejections.json", rejections)
    totals = {"companies": len(index), "items": sum(c["items"] for c in index.values()), "rejections": len(rejections)}
    click.echo(dump_json(totals), nl=False)


@cli.command()
@run_options
@click.option("--search", "search_mode", type=click.Choice(["always", "if-sparse"]))
def nas(companies: tuple[str, ...], run_id: str | None, **options):
    """Single-pass analysis report per company."""
    settings = _settings_from(options)
    pool = _load_pool(settings)
    run_id = _run_id(settings, run_id)
    _fan_out(companies, settings.workers, lambda company: execute_nas(company, pool, settings, run_id))


@cli.command()
@run_options
@click.option("--strict/--record-only", "strict", default=None, help="Abort on hard violations (default) or only record them.")
@click.option("--polish", is_flag=True, help="Let the aggregator rewrite the summary prose.")
def debate(companies: tuple[str, ...], run_id: str | None, strict: bool | None, polish: bool, **options):
    """Ten-step debate and its balanced summary per company."""
    if strict is not None:
        options["strictness"] = "strict" if strict else "record-only"
    settings = _settings_from(options)
    pool = _load_pool(settings)
    run_id = _run_id(settings, run_id)
    _fan_out(companies, settings.workers, lambda company: execute_debate(company, pool, settings, run_id, polish))


def _tree_from_file(path: Path):
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise TreeFormatError(f"Invalid JSON in {path.name}: {e.msg}", position=f"line {e.lineno} column {e.colno}")
    if isinstance(document, dict) and "branches" in document:
        return load_tree(document)
    if isinstance(document, dict) and "Debate Summary" in document:
        return build_tree_from_report(parse_report(document))
    return build_tree_from_report(report_from_document(document))


@cli.command()
@click.option("--tree", "trees", multiple=True, type=click.Path(dir_okay=False, exists=True), help="Reasoning tree file.")
@click.option("--report", "reports", multiple=True, type=click.Path(dir_okay=False, exists=True), help="Report to build a tree from.")
@click.option("--compare", type=click.Path(dir_okay=False, exists=True), help="Second tree or report to set side by side.")
@click.option("--out", type=click.Path(dir_okay=False), help="Also write the metrics as JSON.")
def rei(trees: tuple[str, ...], reports: tuple[str, ...], compare: str | None, out: str | None):
    """Breadth, depth profile and REI for reasoning trees or reports."""
    inputs = [Path(p) for p in (*trees, *reports)]
    if not inputs:
        raise UsageError("Give at least one --tree or --report.")
    if compare:
        inputs.append(Path(compare))

    rows, results = [], []
    for path in inputs:
        tree = _tree_from_file(path)
        result = compute_rei(tree)
        results.append(result)
        rows.append({"source": path.name, "heuristic": bool(tree.metadata.get("heuristic")), **result.model_dump()})

    width = max(len(r["source"]) for r in rows) + 2
    click.echo(f"{'source':<{width}}{'breadth':>8}{'rei':>6}  depths")
    for r in rows:
        flag = " (heuristic)" if r["heuristic"] else ""
        depths = ",".join(str(d) for d in r["depth_profile"])
        click.echo(f"{r['source']:<{width}}{r['breadth']:>8}{r['rei']:>6}  {depths}{flag}")

    document: dict[str, Any] = {"results": rows}
    if len(rows) > 1:
        summary = summarize_rei(results)
        click.echo(f"REI mean ± sd over {summary.count}: {summary}")
        document["summary"] = summary.model_dump()
    if out:
        write_json(Path(out), document)


@cli.group()
def stats():
    """Evaluation statistics over rating and latency CSV files."""


def _input_option(func):
    return click.option("--in", "in_file", type=click.Path(dir_okay=False, exists=True), required=True)(func)


@stats.command()
@_input_option
@click.option("--method", type=click.Choice(["normal", "exact"]), default="normal", show_default=True)
def wilcoxon(in_file: str, method: str):
    """Signed-rank test on score_nas - score_kpd, zero differences excluded."""
    pairs = load_pairs(Path(in_file))
    result = wilcoxon_signed_rank(pairs, WilcoxonMethod.EXACT if method == "exact" else WilcoxonMethod.NORMAL)
    medians = column_medians(load_ratings(Path(in_file))[["score_nas", "score_kpd"]])
    click.echo(dump_json({"test": result.model_dump(mode="json"), "medians": medians}), nl=False)


@stats.command()
@_input_option
def sus(in_file: str):
    """Per-respondent SUS scores and per-system medians."""
    frame = load_sus(Path(in_file))
    click.echo(dump_json({"scores": frame["sus_score"].tolist(), "medians": sus_medians(frame)}), nl=False)


@stats.command()
@_input_option
def latency(in_file: str):
    """Per-company latency and mean per system, to two decimals."""
    summaries = latency_summary(load_latency(Path(in_file)))
    click.echo(dump_json({system: s.model_dump() for system, s in summaries.items()}), nl=False)


@stats.command(name="median")
@_input_option
def median_command(in_file: str):
    """Median of every numeric column."""
    click.echo(dump_json({"medians": column_medians(load_ratings(Path(in_file)))}), nl=False)


@cli.command(name="replay")
@click.option("--journal", "run_dir", type=click.Path(file_okay=False, exists=True), required=True, help="Run directory.")
def replay_command(run_dir: str):
    """Re-execute a scripted run and compare its artifact digests."""
    click.echo(dump_json(replay(Path(run_dir))), nl=False)


def main():
    cli(prog_name="credit-debate")


if __name__ == "__main__":
    main()
