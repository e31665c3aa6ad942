"""
Test configuration and shared fixtures for lexsimp tests.

Everything here is built from the bundled mini resources and the frequency
stub scorer, so no test needs a network or a model download.
"""

from collections.abc import Mapping, Sequence
from pathlib import Path

import pytest

from lexsimp.config import AppConfig, bundled_path, load_config
from lexsimp.errors import MaskedLMBackendError
from lexsimp.models.candidate import ModuleId
from lexsimp.models.instance import Instance, POSCategory
from lexsimp.services.inflection import Inflector, load_irregulars
from lexsimp.services.kg import SynonymGraph, load_graph
from lexsimp.services.masked_lm import FrequencyStubScorer, MaskedContext, ScoredText
from lexsimp.services.pos_tagger import load_pos_lexicon
from lexsimp.services.ppdb import ParaphraseIndex, open_ppdb
from lexsimp.services.resources import Resources, load_resources
from lexsimp.services.verbnet import VerbLexicon, load_verbnet

FIXTURES = Path(__file__).parent / "fixtures"


class ScriptedScorer:
    """Scorer double: fixed generate output and a score table."""

    def __init__(
        self,
        scores: Mapping[str, float] | None = None,
        generated: Sequence[tuple[str, float]] = (),
        default: float = -20.0,
    ) -> None:
        self.scores = dict(scores or {})
        self.generated = list(generated)
        self.default = default
        self.score_calls: list[list[str]] = []

    async def generate(self, ctx: MaskedContext, top_n: int) -> list[ScoredText]:
        return [ScoredText(text=t, log_prob=p) for t, p in self.generated[:top_n]]

    async def score(self, ctx: MaskedContext, texts: Sequence[str]) -> list[ScoredText]:
        self.score_calls.append(list(texts))
        return [
            ScoredText(text=t, log_prob=self.scores.get(t, self.default)) for t in texts
        ]


class FailingScorer:
    """Scorer double whose backend is always down."""

    async def generate(self, ctx: MaskedContext, top_n: int) -> list[ScoredText]:
        raise MaskedLMBackendError("backend down", {"mode": "generate"})

    async def score(self, ctx: MaskedContext, texts: Sequence[str]) -> list[ScoredText]:
        raise MaskedLMBackendError("backend down", {"mode": "score"})


def make_instance(
    context: str, target: str, pos: POSCategory = POSCategory.UNASSIGNED
) -> Instance:
    instance = Instance.create(context, target)
    return instance if pos is POSCategory.UNASSIGNED else instance.with_pos(pos)


def with_modules(config: AppConfig, *modules: ModuleId) -> AppConfig:
    run = config.run.model_copy(update={"modules": list(modules)})
    return config.model_copy(update={"run": run})


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def mini_config() -> AppConfig:
    """The bundled mini configuration"""
    return load_config()


@pytest.fixture(scope="session")
def pos_lexicon():
    return load_pos_lexicon()


@pytest.fixture(scope="session")
def inflector(pos_lexicon) -> Inflector:
    return Inflector.from_lexicon(load_irregulars(), pos_lexicon)


@pytest.fixture(scope="session")
def stub_scorer() -> FrequencyStubScorer:
    return FrequencyStubScorer.bundled()


@pytest.fixture(scope="session")
def verbnet() -> VerbLexicon:
    return load_verbnet(bundled_path("mini", "verbnet"))


@pytest.fixture(scope="session")
def ppdb_index() -> ParaphraseIndex:
    return open_ppdb(bundled_path("mini", "ppdb-lexical-mini.txt"))


@pytest.fixture(scope="session")
def graph() -> SynonymGraph:
    return load_graph(
        bundled_path("mini", "kg_nodes.tsv"), bundled_path("mini", "kg_edges.tsv")
    )


@pytest.fixture
def mini_resources(mini_config) -> Resources:
    """All four modules' resources with the stub scorer"""
    return load_resources(mini_config)
