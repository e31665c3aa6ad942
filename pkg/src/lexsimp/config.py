"""Configuration management for lexsimp"""

import gzip
import json
import os
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Any, Literal, Self, TextIO

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import ConfigError
from .models.candidate import MODULE_ORDER, ModuleId
from .models.report import MetricConfig


class Settings(BaseSettings):
    """Process settings with environment variable support"""

    scorer_url: str | None = None
    log_level: str = "WARNING"
    use_transformer: bool = False

    model_config = SettingsConfigDict(
        env_prefix="LEXSIMP_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


def bundled_path(*parts: str) -> Path:
    """Path of a resource file shipped inside the package."""
    return Path(str(importlib_resources.files("lexsimp").joinpath("resources", *parts)))


def open_text(path: Path) -> TextIO:
    """Open a UTF-8 table, decompressing `.gz` files."""
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


BUNDLED_CONFIG = bundled_path("mini", "config.json")


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ResourcesConfig(_Section):
    verbnet_dir: Path | None = None
    ppdb_path: Path | None = None
    kg_nodes: Path | None = None
    kg_edges: Path | None = None
    irregulars_path: Path | None = None
    pos_lexicon_path: Path | None = None
    frequency_path: Path | None = None


class RoutingSection(_Section):
    profile: Literal["table1", "algorithm1", "custom"] = "table1"
    table: dict[str, list[str]] | None = None

    @model_validator(mode="after")
    def check_custom(self) -> Self:
        if self.profile == "custom" and not self.table:
            raise ValueError("routing.table is required for the custom profile")
        return self


class VsdConfig(_Section):
    """Verb sense disambiguation settings; k is the top-k vote window."""

    k: int = Field(10, ge=1)
    max_pool: int = Field(60, ge=1)
    include_subclasses: bool = True

    @model_validator(mode="after")
    def check_window(self) -> Self:
        if self.k > self.max_pool:
            raise ValueError("vsd.k must not exceed vsd.max_pool")
        return self


class PpdbConfig(_Section):
    limit: int = Field(15, ge=1)


class MlmConfig(_Section):
    backend: Literal["stub", "remote"] = "stub"
    endpoint: str | None = None
    generate_endpoint: str | None = None
    top_n: int = Field(30, ge=1)
    timeout: float = Field(10.0, gt=0)
    max_concurrent: int = Field(8, ge=1)
    retries: int = Field(2, ge=0)
    backoff: float = Field(0.2, ge=0)
    max_batch: int = Field(64, ge=1)


class KgConfig(_Section):
    limit: int = Field(15, ge=1)
    relation_name: str = "synonym"
    lang: str | None = None
    linker: Literal["lexical", "embedding"] = "lexical"
    model_name: str = "all-MiniLM-L6-v2"


class RunConfig(_Section):
    """Pipeline output settings; top_n is the number of substitutes emitted."""

    top_n: int = Field(5, ge=1, le=10)
    workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    drop_target_variants: bool = True
    modules: list[ModuleId] = Field(default_factory=lambda: list(MODULE_ORDER))


class AppConfig(_Section):
    """The structured configuration document."""

    resources: ResourcesConfig = Field(default_factory=ResourcesConfig)
    routing: RoutingSection = Field(default_factory=RoutingSection)
    vsd: VsdConfig = Field(default_factory=VsdConfig)
    ppdb: PpdbConfig = Field(default_factory=PpdbConfig)
    mlm: MlmConfig = Field(default_factory=MlmConfig)
    kg: KgConfig = Field(default_factory=KgConfig)
    run: RunConfig = Field(default_factory=RunConfig)
    metrics: MetricConfig = Field(default_factory=MetricConfig)

    def resolve_paths(self, base: Path) -> Self:
        """Anchor relative resource paths at `base`."""
        updates = {
            name: base / value
            for name, value in self.resources.model_dump().items()
            if value is not None and not Path(value).is_absolute()
        }
        if not updates:
            return self
        return self.model_copy(
            update={"resources": self.resources.model_copy(update=updates)}
        )


def parse_config(data: dict[str, Any], base: Path | None = None) -> AppConfig:
    """Validate a configuration mapping, reporting every problem at once."""
    try:
        config = AppConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigError(f"invalid configuration: {problems}") from e
    return config.resolve_paths(base) if base is not None else config


def load_config(
    path: str | Path | None = None, settings: Settings | None = None
) -> AppConfig:
    """Load a JSON configuration document; the bundled mini config by default."""
    config_path = Path(path) if path is not None else BUNDLED_CONFIG
    try:
        with open(config_path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {config_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {config_path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config {config_path} must be a JSON object")

    config = parse_config(data, base=config_path.parent)
    return apply_settings(config, settings or Settings())


def apply_settings(config: AppConfig, settings: Settings) -> AppConfig:
    """Environment overrides: LEXSIMP_SCORER_URL replaces mlm.endpoint."""
    if settings.scorer_url:
        mlm = config.mlm.model_copy(update={"endpoint": settings.scorer_url})
        return config.model_copy(update={"mlm": mlm})
    return config


def missing_resources(config: AppConfig, modules: list[ModuleId]) -> list[str]:
    """Config keys whose resources the enabled modules need but cannot find."""
    res = config.resources
    required: list[tuple[str, Path | None, bool]] = []
    if ModuleId.VSD in modules:
        required.append(("resources.verbnet_dir", res.verbnet_dir, True))
    if ModuleId.PPDB in modules:
        required.append(("resources.ppdb_path", res.ppdb_path, False))
    if ModuleId.KG in modules:
        required.append(("resources.kg_nodes", res.kg_nodes, False))
        required.append(("resources.kg_edges", res.kg_edges, False))

    missing = []
    for key, path, is_dir in required:
        if path is None or not (path.is_dir() if is_dir else path.is_file()):
            missing.append(key)
    for key, path in (
        ("resources.irregulars_path", res.irregulars_path),
        ("resources.pos_lexicon_path", res.pos_lexicon_path),
        ("resources.frequency_path", res.frequency_path),
    ):
        if path is not None and not path.is_file():
            missing.append(key)

    # Re-ranking always needs the scorer, whichever modules are enabled.
    if config.mlm.backend == "remote" and not config.mlm.endpoint:
        missing.append("mlm.endpoint")
    return missing


# The `run.*` section is the pipeline's configuration.
PipelineConfig = RunConfig
