# Resource loading and validation
# Builds the shared, read-only resources the pipeline workers use

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

from ..config import AppConfig, missing_resources
from ..errors import ConfigError, LexSimpError
from ..models.candidate import ModuleId
from .inflection import Inflector, load_irregulars
from .kg import EntityLinker, SynonymGraph, build_linker, load_graph
from .masked_lm import MaskedLMScorer, build_scorer, load_frequency_lexicon
from .pos_tagger import ContextualPOSTagger, LexiconPOSTagger, load_pos_lexicon
from .ppdb import ParaphraseIndex, open_ppdb
from .routing import RoutingConfig, routing_from_config
from .verbnet import VerbLexicon, load_verbnet

logger = logging.getLogger(__name__)


@dataclass
class Resources:
    """Everything a pipeline run reads; shared by all workers."""

    routing: RoutingConfig
    tagger: ContextualPOSTagger
    inflector: Inflector
    scorer: MaskedLMScorer
    verbnet: VerbLexicon | None = None
    ppdb: ParaphraseIndex | None = None
    graph: SynonymGraph | None = None
    linker: EntityLinker | None = None


def load_resources(
    config: AppConfig,
    modules: Sequence[ModuleId] | None = None,
    scorer: MaskedLMScorer | None = None,
) -> Resources:
    """Load the resources the enabled modules need.

    Every missing path is reported in a single ConfigError.
    """
    enabled = list(modules if modules is not None else config.run.modules)
    missing = missing_resources(config, enabled)
    if missing:
        raise ConfigError(f"missing resources: {', '.join(missing)}")

    res = config.resources
    lexicon = load_pos_lexicon(res.pos_lexicon_path)
    resources = Resources(
        routing=routing_from_config(config.routing),
        tagger=LexiconPOSTagger(lexicon),
        inflector=Inflector.from_lexicon(load_irregulars(res.irregulars_path), lexicon),
        scorer=scorer if scorer is not None else build_scorer(config),
    )
    if ModuleId.VSD in enabled and res.verbnet_dir is not None:
        resources.verbnet = load_verbnet(res.verbnet_dir)
    if ModuleId.PPDB in enabled and res.ppdb_path is not None:
        resources.ppdb = open_ppdb(res.ppdb_path)
    if ModuleId.KG in enabled and res.kg_nodes is not None and res.kg_edges is not None:
        resources.graph = load_graph(res.kg_nodes, res.kg_edges)
        resources.linker = build_linker(
            resources.graph, config.kg.linker, config.kg.model_name
        )
    return resources


Status = Literal["ok", "warning", "missing", "invalid", "skipped"]


@dataclass
class ResourceStatus:
    """One row of `lexsimp resources validate`."""

    name: str
    location: str
    status: Status
    detail: str = ""
    required: bool = True

    @property
    def failed(self) -> bool:
        return self.required and self.status in ("missing", "invalid")


def _check(
    name: str,
    path: Path | None,
    required: bool,
    load: Callable[[Path], str],
    is_dir: bool = False,
    warn: Callable[[Path], str | None] | None = None,
) -> ResourceStatus:
    location = str(path) if path is not None else "(not configured)"
    if not required:
        return ResourceStatus(name, location, "skipped", "module disabled", False)
    if path is None or not (path.is_dir() if is_dir else path.is_file()):
        return ResourceStatus(name, location, "missing", "path does not exist")
    try:
        detail = load(path)
    except LexSimpError as e:
        return ResourceStatus(name, location, "invalid", str(e))
    warning = warn(path) if warn is not None else None
    if warning:
        return ResourceStatus(name, location, "warning", f"{detail}; {warning}")
    return ResourceStatus(name, location, "ok", detail)


def validate_resources(
    config: AppConfig, modules: Sequence[ModuleId] | None = None
) -> list[ResourceStatus]:
    """Try to load every resource and report its status."""
    enabled = set(modules if modules is not None else config.run.modules)
    res = config.resources
    rows: list[ResourceStatus] = []
    loaded: dict[str, object] = {}

    def verbnet(path: Path) -> str:
        lex = loaded["verbnet"] = load_verbnet(path)
        report = lex.report
        return f"{report.files} files, {len(lex)} classes, {report.members} lemmas"

    def verbnet_warning(path: Path) -> str | None:
        lex = loaded["verbnet"]
        assert isinstance(lex, VerbLexicon)
        if not len(lex):
            return "no classes"
        if lex.report.empty_classes:
            return f"{len(lex.report.empty_classes)} empty class(es)"
        return None

    def ppdb(path: Path) -> str:
        idx = loaded["ppdb"] = open_ppdb(path)
        return f"{idx.report.entries} entries for {len(idx)} sources"

    def ppdb_warning(path: Path) -> str | None:
        idx = loaded["ppdb"]
        assert isinstance(idx, ParaphraseIndex)
        report = idx.report
        parts = []
        if report.skipped:
            parts.append(f"{report.skipped} line(s) skipped")
        if report.missing_score:
            parts.append(f"{report.missing_score} without a quality score")
        return ", ".join(parts) or None

    rows.append(
        _check(
            "verbnet",
            res.verbnet_dir,
            ModuleId.VSD in enabled,
            verbnet,
            is_dir=True,
            warn=verbnet_warning,
        )
    )
    rows.append(
        _check("ppdb", res.ppdb_path, ModuleId.PPDB in enabled, ppdb, warn=ppdb_warning)
    )

    rows.append(_graph_status(config, ModuleId.KG in enabled))
    rows.extend(_optional_tables(config))
    rows.append(_scorer_status(config))
    for row in rows:
        logger.info("resource %s: %s %s", row.name, row.status, row.detail)
    return rows


def _optional_tables(config: AppConfig) -> list[ResourceStatus]:
    res = config.resources
    rows = []
    for name, path, loader in (
        (
            "irregulars",
            res.irregulars_path,
            lambda p: f"{len(load_irregulars(p))} forms",
        ),
        (
            "pos_lexicon",
            res.pos_lexicon_path,
            lambda p: f"{len(load_pos_lexicon(p))} words",
        ),
    ):
        if path is None:
            rows.append(ResourceStatus(name, "(bundled)", "ok", "bundled table"))
        else:
            rows.append(_check(name, path, True, loader))
    return rows


def _scorer_status(config: AppConfig) -> ResourceStatus:
    mlm = config.mlm
    if mlm.backend == "remote":
        if not mlm.endpoint:
            return ResourceStatus(
                "scorer", "(not configured)", "missing", "mlm.endpoint"
            )
        return ResourceStatus("scorer", mlm.endpoint, "ok", "remote backend")
    path = config.resources.frequency_path
    if path is None:
        return ResourceStatus("scorer", "(bundled)", "ok", "frequency stub")
    return _check(
        "scorer",
        path,
        True,
        lambda p: f"frequency stub, {load_frequency_lexicon(p).vocab} words",
    )


def _graph_status(config: AppConfig, required: bool) -> ResourceStatus:
    nodes, edges = config.resources.kg_nodes, config.resources.kg_edges
    location = f"{nodes or '(not configured)'}, {edges or '(not configured)'}"
    if not required:
        return ResourceStatus("kg", location, "skipped", "module disabled", False)
    if nodes is None or edges is None or not nodes.is_file() or not edges.is_file():
        return ResourceStatus("kg", location, "missing", "nodes and edges files needed")
    try:
        graph = load_graph(nodes, edges)
    except LexSimpError as e:
        return ResourceStatus("kg", location, "invalid", str(e))
    detail = f"{len(graph)} nodes, {len(graph.edges)} edges"
    if not len(graph):
        return ResourceStatus("kg", location, "warning", f"{detail}; empty graph")
    return ResourceStatus("kg", location, "ok", detail)
