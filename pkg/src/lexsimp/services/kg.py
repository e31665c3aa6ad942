# Synonym knowledge graph
# Entity linking of the target word and one-hop synonym expansion

import logging
import re
import zlib
from collections.abc import Sequence
from pathlib import Path
from threading import Lock
from typing import TYPE_CHECKING, Protocol

import numpy as np
from numpy.typing import NDArray
from pydantic import ValidationError

from ..config import Settings
from ..errors import ResourceLoadError
from ..models.candidate import Candidate, ModuleId
from ..models.instance import normalize
from ..models.lexicon import KGNode

if TYPE_CHECKING:
    from sentence_transformers import SentenceTransformer

logger = logging.getLogger(__name__)


def node_id_key(node_id: str) -> tuple[tuple[int, int | str], ...]:
    """Natural ordering of node ids, so that Q2 sorts before Q10."""
    return tuple(
        (0, int(part)) if part.isdigit() else (1, part)
        for part in re.split(r"(\d+)", node_id)
        if part
    )


class SynonymGraph:
    """Labelled nodes, typed edges and an index from labels to nodes."""

    def __init__(self, nodes: dict[str, KGNode], edges: list[tuple[str, str, str]]):
        self.nodes = nodes
        self.edges = edges
        self._adjacent: dict[tuple[str, str], set[str]] = {}
        for src, relation, dst in edges:
            self._adjacent.setdefault((src, relation), set()).add(dst)
            self._adjacent.setdefault((dst, relation), set()).add(src)

        index: dict[str, set[str]] = {}
        for node in nodes.values():
            for label in node.labels:
                index.setdefault(normalize(label), set()).add(node.node_id)
        self.label_index: dict[str, list[str]] = {
            label: sorted(ids, key=node_id_key) for label, ids in index.items()
        }

    def neighbors(self, node_id: str, relation: str) -> set[str]:
        """Nodes joined to `node_id` by `relation`, in either direction."""
        return self._adjacent.get((node_id, relation), set())

    def __len__(self) -> int:
        return len(self.nodes)


def _read_tsv(path: Path) -> list[tuple[int, list[str]]]:
    rows = []
    try:
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                line = line.rstrip("\r\n")
                if not line.strip() or line.startswith("#"):
                    continue
                rows.append((line_no, line.split("\t")))
    except UnicodeDecodeError as e:
        raise ResourceLoadError(f"not valid UTF-8: {e}", str(path)) from e
    except OSError as e:
        raise ResourceLoadError(str(e), str(path)) from e
    return rows


def load_graph(nodes_path: str | Path, edges_path: str | Path) -> SynonymGraph:
    """Load the graph from its two TSV files.

    Nodes are `id TAB label TAB aliases TAB lang?` rows, aliases separated by `|`;
    edges are `source TAB relation TAB target` rows.
    """
    nodes_path, edges_path = Path(nodes_path), Path(edges_path)
    nodes: dict[str, KGNode] = {}
    for line_no, fields in _read_tsv(nodes_path):
        if len(fields) < 2:
            raise ResourceLoadError(
                "node lines need at least an id and a label", str(nodes_path), line_no
            )
        node_id = fields[0].strip()
        if node_id in nodes:
            raise ResourceLoadError(
                f"duplicate node id {node_id!r}", str(nodes_path), line_no
            )
        aliases = fields[2].split("|") if len(fields) > 2 else []
        lang = fields[3].strip() if len(fields) > 3 else ""
        try:
            nodes[node_id] = KGNode(
                node_id=node_id,
                primary_label=fields[1].strip(),
                aliases=tuple(a.strip() for a in aliases if a.strip()),
                lang=lang or None,
            )
        except ValidationError as e:
            raise ResourceLoadError(
                str(e.errors()[0]["msg"]), str(nodes_path), line_no
            ) from e

    edges: list[tuple[str, str, str]] = []
    for line_no, fields in _read_tsv(edges_path):
        if len(fields) < 3:
            raise ResourceLoadError(
                "edge lines need source, relation and target", str(edges_path), line_no
            )
        src, relation, dst = (f.strip() for f in fields[:3])
        for end in (src, dst):
            if end not in nodes:
                raise ResourceLoadError(
                    f"edge references unknown node {end!r}", str(edges_path), line_no
                )
        edges.append((src, relation, dst))

    if not nodes:
        logger.warning("Synonym graph %s has no nodes", nodes_path)
    logger.info("Loaded synonym graph: %d nodes, %d edges", len(nodes), len(edges))
    return SynonymGraph(nodes, edges)


class EntityLinker(Protocol):
    """Orders the graph nodes a target could refer to, best first."""

    def link(
        self, target: str, context: str, candidates: Sequence[str]
    ) -> list[str]: ...


class LexicalEntityLinker:
    """Exact primary-label matches first, then alias matches, then node id."""

    def __init__(self, graph: SynonymGraph) -> None:
        self.graph = graph

    def link(self, target: str, context: str, candidates: Sequence[str]) -> list[str]:
        key = normalize(target)
        return sorted(
            candidates,
            key=lambda node_id: (
                normalize(self.graph.nodes[node_id].primary_label) != key,
                node_id_key(node_id),
            ),
        )


class EmbeddingEntityLinker:
    """Ranks candidate nodes by similarity between the sentence and node text."""

    _encoder_lock: Lock = Lock()
    _shared_encoder: "SentenceTransformer | None" = None
    _encoder_failed: bool = False

    def __init__(
        self,
        graph: SynonymGraph,
        model_name: str = "all-MiniLM-L6-v2",
        use_transformer: bool | None = None,
    ) -> None:
        self.graph = graph
        self.lexical = LexicalEntityLinker(graph)
        if use_transformer is None:
            use_transformer = Settings().use_transformer
        self.encoder = self._get_shared_encoder(model_name) if use_transformer else None
        self._node_embeddings: dict[str, NDArray[np.float64]] = {}

    def link(self, target: str, context: str, candidates: Sequence[str]) -> list[str]:
        lexical_order = self.lexical.link(target, context, candidates)
        if len(lexical_order) < 2:
            return lexical_order
        query = self._embed(context)
        similarity = {
            node_id: round(self._cosine(query, self._node_embedding(node_id)), 9)
            for node_id in lexical_order
        }
        position = {node_id: i for i, node_id in enumerate(lexical_order)}
        return sorted(lexical_order, key=lambda n: (-similarity[n], position[n]))

    def _node_embedding(self, node_id: str) -> NDArray[np.float64]:
        if node_id not in self._node_embeddings:
            node = self.graph.nodes[node_id]
            words = list(node.labels)
            for relation in sorted({rel for _, rel, _ in self.graph.edges}):
                for other in sorted(self.graph.neighbors(node_id, relation)):
                    words.append(self.graph.nodes[other].primary_label)
            self._node_embeddings[node_id] = self._embed(" ".join(words))
        return self._node_embeddings[node_id]

    def _embed(self, text: str) -> NDArray[np.float64]:
        if self.encoder is not None:
            try:
                return np.array(self.encoder.encode(text), dtype=np.float64)
            except Exception:
                logger.warning("Falling back to hashed embeddings", exc_info=True)
                self.encoder = None
        return self._hashed_embedding(text)

    @staticmethod
    def _hashed_embedding(text: str, dimensions: int = 256) -> NDArray[np.float64]:
        vector = np.zeros(dimensions, dtype=np.float64)
        for token in re.findall(r"[^\W\d_]+", text.lower()):
            vector[zlib.crc32(token.encode("utf-8")) % dimensions] += 1.0
        return vector

    @staticmethod
    def _cosine(a: NDArray[np.float64], b: NDArray[np.float64]) -> float:
        norm = float(np.linalg.norm(a) * np.linalg.norm(b))
        return float(np.dot(a, b) / norm) if norm else 0.0

    @classmethod
    def _get_shared_encoder(cls, model_name: str) -> "SentenceTransformer | None":
        if cls._shared_encoder is not None or cls._encoder_failed:
            return cls._shared_encoder
        with cls._encoder_lock:
            if cls._shared_encoder is not None or cls._encoder_failed:
                return cls._shared_encoder
            try:
                from sentence_transformers import SentenceTransformer

                cls._shared_encoder = SentenceTransformer(model_name, device="cpu")
            except Exception:
                logger.warning(
                    "Failed to initialize sentence-transformers model '%s'",
                    model_name,
                    exc_info=True,
                )
                cls._encoder_failed = True
            return cls._shared_encoder


def build_linker(
    graph: SynonymGraph, kind: str = "lexical", model_name: str = "all-MiniLM-L6-v2"
) -> EntityLinker:
    if kind == "embedding":
        return EmbeddingEntityLinker(graph, model_name)
    return LexicalEntityLinker(graph)


def link_entity(
    g: SynonymGraph, linker: EntityLinker, target: str, context: str
) -> str | None:
    """Best node for `target` in `context`, or None when no label matches."""
    candidates = g.label_index.get(normalize(target))
    if not candidates:
        return None
    ranked = linker.link(target, context, candidates)
    return ranked[0] if ranked else None


def synonym_candidates(
    g: SynonymGraph,
    node: str,
    limit: int = 15,
    relation: str = "synonym",
    lang: str | None = None,
) -> list[Candidate]:
    """Primary labels of the node's direct neighbours over `relation`."""
    own = {normalize(label) for label in g.nodes[node].labels}
    labels: dict[str, str] = {}
    for other in sorted(g.neighbors(node, relation), key=node_id_key):
        neighbour = g.nodes[other]
        if lang is not None and neighbour.lang is not None and neighbour.lang != lang:
            continue
        key = normalize(neighbour.primary_label)
        if key in own:
            continue
        labels.setdefault(key, neighbour.primary_label)
    chosen = sorted(labels.items())[:limit]
    return [
        Candidate(lemma=key, surface=label, source=ModuleId.KG, module_score=1.0)
        for key, label in chosen
    ]
