# Command-line interface
# run, eval, inspect, resources validate and serve-scorer subcommands

import argparse
import asyncio
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from . import __version__
from .config import AppConfig, RunConfig, Settings, load_config
from .errors import ConfigError, EvaluationError, LexSimpError, TsvParseError
from .models.candidate import ModuleId
from .models.instance import Instance
from .models.report import MetricConfig
from .services.masked_lm import close_scorer
from .services.metrics import evaluate, render_table
from .services.pipeline import (
    InstanceResult,
    SimplificationPipeline,
    is_finite_score,
    module_timings,
)
from .services.resources import Resources, load_resources, validate_resources
from .services.tsv_io import parse_dataset_tsv, write_run_tsv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DEGRADED = 1
EXIT_FATAL = 2

stdout = Console()
stderr = Console(stderr=True)


def setup_logging(verbose: bool = False) -> None:
    level = logging.INFO if verbose else Settings().log_level.upper()
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=stderr, show_path=False)],
        force=True,
    )


def _fatal(message: str) -> int:
    stderr.print(f"[bold red]error:[/bold red] {message}")
    return EXIT_FATAL


def _parse_modules(value: str) -> list[ModuleId]:
    try:
        names = [name.strip().lower() for name in value.split(",")]
        return [ModuleId(name) for name in names if name]
    except ValueError as e:
        choices = ", ".join(m.value for m in ModuleId)
        raise argparse.ArgumentTypeError(f"{e}; choose from {choices}") from e


def apply_overrides(config: AppConfig, args: argparse.Namespace) -> AppConfig:
    """CLI flags replace the matching `run.*` keys."""
    updates = {
        key: value
        for key, value in (
            ("modules", getattr(args, "modules", None)),
            ("top_n", getattr(args, "top_n", None)),
            ("workers", getattr(args, "workers", None)),
        )
        if value is not None
    }
    if not updates:
        return config
    try:
        run = RunConfig.model_validate({**config.run.model_dump(), **updates})
    except ValidationError as e:
        problems = "; ".join(
            f"run.{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigError(f"invalid option: {problems}") from e
    return config.model_copy(update={"run": run})


def _load(args: argparse.Namespace) -> AppConfig:
    return apply_overrides(load_config(args.config), args)


async def _simplify_all(
    resources: Resources, config: AppConfig, instances: list[Instance]
) -> list[InstanceResult]:
    try:
        return await SimplificationPipeline(resources, config).run(instances)
    finally:
        await close_scorer(resources.scorer)


def _run_summary(results: Sequence[InstanceResult]) -> Table:
    table = Table(title="Run summary", show_header=False)
    table.add_column("Item", style="cyan")
    table.add_column("Value", justify="right", style="green")
    table.add_row("instances", str(len(results)))
    table.add_row("empty candidates", str(sum(r.trace.empty for r in results)))
    table.add_row("module failures", str(sum(bool(r.trace.failures) for r in results)))
    table.add_row("re-rank fallbacks", str(sum(r.trace.fallback for r in results)))
    for module, seconds in module_timings(results).items():
        table.add_row(f"{module} time", f"{seconds:.3f}s")
    return table


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
        with open(args.dataset, "rb") as f:
            instances = parse_dataset_tsv(f)
        resources = load_resources(config)
    except (LexSimpError, OSError) as e:
        return _fatal(str(e))

    try:
        results = asyncio.run(_simplify_all(resources, config, instances))
    except Exception as e:
        logger.debug("Run aborted", exc_info=True)
        return _fatal(f"run aborted: {type(e).__name__}: {e}")
    try:
        with open(args.output, "wb") as sink:
            write_run_tsv((r.record for r in results), sink)
    except OSError as e:
        return _fatal(f"cannot write {args.output}: {e}")

    stderr.print(_run_summary(results))
    degraded = [r for r in results if r.trace.degraded]
    for result in degraded:
        logger.warning(
            "%r: %s", result.trace.target, ", ".join(result.trace.diagnostics)
        )
    return EXIT_DEGRADED if degraded else EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    try:
        metrics = load_config(args.config).metrics if args.config else MetricConfig()
        report = evaluate(args.gold, args.pred, metrics, args.per_instance)
    except (EvaluationError, ConfigError) as e:
        return _fatal(str(e))

    if args.format == "json":
        print(json.dumps(report.to_document(), indent=2))
    else:
        stdout.print(render_table(report, title=f"{Path(args.pred).name}"))
    return EXIT_OK


def _score(value: float | None) -> str:
    if value is None:
        return "n/a"
    return f"{value:.3f}" if is_finite_score(value) else "-inf"


def render_trace(result: InstanceResult) -> None:
    trace = result.trace
    stdout.print(f"[bold]{trace.context}[/bold]")
    stdout.print(
        f"target: [cyan]{trace.target}[/cyan]  pos: {trace.pos}  "
        f"lemma: {trace.target_lemma}  form: {trace.target_form}"
    )
    stdout.print(f"routed modules: {', '.join(trace.routed) or '(none)'}")
    if trace.vsd_class:
        stdout.print(f"VSD class: {trace.vsd_class}")

    modules = Table(title="Modules")
    modules.add_column("Module", style="cyan")
    modules.add_column("Time", justify="right")
    modules.add_column("Candidates")
    modules.add_column("Status")
    for m in trace.modules:
        status = m.error or m.note or "ok"
        modules.add_row(
            str(m.module), f"{m.seconds:.3f}s", ", ".join(m.candidates) or "-", status
        )
    stdout.print(modules)

    if trace.inflections:
        inflections = Table(title="Inflection")
        for column in ("Candidate", "Source", "Lemma", "Form", "Surface", "Kept"):
            inflections.add_column(column)
        for d in trace.inflections:
            inflections.add_row(
                d.candidate,
                str(d.source),
                d.lemma,
                str(d.form),
                d.surface or "(uninflectable)",
                "yes" if d.kept else "no",
            )
        stdout.print(inflections)

    ranking = Table(title="Ranking")
    ranking.add_column("Rank", justify="right")
    ranking.add_column("Substitute", style="green")
    ranking.add_column("Source")
    ranking.add_column("Module score", justify="right")
    ranking.add_column("Fill score", justify="right")
    for c in trace.ranking:
        ranking.add_row(
            str(c.rank),
            c.surface,
            str(c.source),
            _score(c.module_score),
            _score(c.final_score),
        )
    stdout.print(ranking)
    stdout.print(f"output: {', '.join(result.record.substitutes) or '(empty)'}")
    if trace.diagnostics:
        stdout.print(f"[yellow]diagnostics: {', '.join(trace.diagnostics)}[/yellow]")


def cmd_inspect(args: argparse.Namespace) -> int:
    try:
        instance = Instance.create(args.sentence, args.word)
    except ValueError as e:
        return _fatal(str(e))
    try:
        config = _load(args)
        resources = load_resources(config)
    except (LexSimpError, OSError) as e:
        return _fatal(str(e))

    async def simplify() -> InstanceResult:
        try:
            return await SimplificationPipeline(resources, config).simplify(instance)
        finally:
            await close_scorer(resources.scorer)

    result = asyncio.run(simplify())
    if args.format == "json":
        print(result.model_dump_json(indent=2))
    else:
        render_trace(result)
    return EXIT_DEGRADED if result.trace.degraded else EXIT_OK


def cmd_validate_resources(args: argparse.Namespace) -> int:
    try:
        config = _load(args)
    except LexSimpError as e:
        return _fatal(str(e))

    rows = validate_resources(config)
    styles = {"ok": "green", "warning": "yellow", "skipped": "dim"}
    table = Table(title="Resources")
    table.add_column("Resource", style="cyan")
    table.add_column("Status")
    table.add_column("Location")
    table.add_column("Detail")
    for row in rows:
        style = styles.get(row.status, "red")
        table.add_row(
            row.name, f"[{style}]{row.status}[/{style}]", row.location, row.detail
        )
    stdout.print(table)
    return EXIT_DEGRADED if any(row.failed for row in rows) else EXIT_OK


def cmd_serve_scorer(args: argparse.Namespace) -> int:
    import uvicorn

    from .main import create_app

    try:
        config = load_config(args.config)
    except LexSimpError as e:
        return _fatal(str(e))
    uvicorn.run(create_app(config=config), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexsimp",
        description="Modular lexical simplification pipeline and TSAR-2022 evaluator",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", help="Log at INFO level"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def pipeline_options(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--config", type=Path, help="JSON configuration (bundled mini config)"
        )
        p.add_argument(
            "--modules",
            type=_parse_modules,
            help="Comma-separated modules to enable, e.g. ppdb,mlm",
        )
        p.add_argument("--top-n", type=int, help="Substitutes per instance")
        p.add_argument("--workers", type=int, help="Concurrent instances")

    run = sub.add_parser("run", help="Simplify every instance of a dataset")
    run.add_argument("--dataset", type=Path, required=True, help="context TAB target")
    run.add_argument("--output", type=Path, required=True, help="Run TSV to write")
    pipeline_options(run)
    run.set_defaults(handler=cmd_run)

    ev = sub.add_parser("eval", help="Score a run file against a gold file")
    ev.add_argument("--gold", type=Path, required=True)
    ev.add_argument("--pred", type=Path, required=True)
    ev.add_argument("--format", choices=["json", "table"], default="table")
    ev.add_argument("--config", type=Path, help="Take metric cutoffs from a config")
    ev.add_argument(
        "--per-instance",
        action="store_true",
        help="Include per-instance AP and Potential values in json output",
    )
    ev.set_defaults(handler=cmd_eval)

    inspect = sub.add_parser("inspect", help="Trace the pipeline for one sentence")
    inspect.add_argument("--sentence", required=True)
    inspect.add_argument("--word", required=True)
    inspect.add_argument("--format", choices=["text", "json"], default="text")
    pipeline_options(inspect)
    inspect.set_defaults(handler=cmd_inspect)

    resources = sub.add_parser("resources", help="Resource maintenance")
    resources_sub = resources.add_subparsers(dest="action", required=True)
    validate = resources_sub.add_parser("validate", help="Load and check resources")
    validate.add_argument("--config", type=Path)
    validate.add_argument("--modules", type=_parse_modules)
    validate.set_defaults(handler=cmd_validate_resources)

    serve = sub.add_parser("serve-scorer", help="Serve the maskfill endpoint")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--config", type=Path)
    serve.set_defaults(handler=cmd_serve_scorer)
    return parser


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Parse `argv` and dispatch; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_FATAL
    setup_logging(args.verbose)
    try:
        return int(args.handler(args))
    except TsvParseError as e:
        return _fatal(str(e))
    except Exception as e:
        logger.debug("Unhandled error", exc_info=True)
        return _fatal(f"{type(e).__name__}: {e}")


if __name__ == "__main__":
    sys.exit(run_cli())
