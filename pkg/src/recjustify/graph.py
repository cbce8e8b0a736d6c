"""Heterogeneous product graph: nodes, weighted symmetric adjacency, ingestion.

The graph holds three node kinds: products, attributes (typed, optionally
carrying topic labels), and non-attribute entities that link related
attributes. Edges are undirected and weighted; each declared edge induces
traversal in both directions. The structure is immutable after load and safe
for concurrent reads.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

PRODUCT = 0
ATTRIBUTE = 1
ENTITY = 2

_KIND_CODES = {"P": PRODUCT, "A": ATTRIBUTE, "E": ENTITY}
_KIND_LETTERS = {PRODUCT: "P", ATTRIBUTE: "A", ENTITY: "E"}

LineSource = "str | os.PathLike[str] | Iterable[str]"


class GraphFormatError(ValueError):
    """Raised when a node or edge source violates the file format or graph invariants."""


class UnknownNodeError(KeyError):
    """Raised when a node id does not resolve in the graph."""


@dataclass(frozen=True)
class ProductGraph:
    """Immutable heterogeneous graph with compressed symmetric adjacency.

    ``indptr``/``indices``/``weights`` form a CSR over node indices where the
    neighbor list of every node is sorted by index. Each undirected edge is
    stored twice (once per direction) with equal weight.
    """

    ids: tuple[str, ...]
    kinds: np.ndarray  # uint8, PRODUCT / ATTRIBUTE / ENTITY
    type_labels: tuple[str, ...]  # "" for non-attributes
    topics: tuple[frozenset[str], ...]  # empty for non-attributes
    indptr: np.ndarray  # int64, len n+1
    indices: np.ndarray  # int32, len 2m
    weights: np.ndarray  # float64, len 2m
    _index: dict[str, int] = field(repr=False)
    # Per-arc source node, aligned with indices; cached for vectorized kernels.
    arc_src: np.ndarray = field(repr=False)  # int32, len 2m
    # Weighted degree per node (sum of incident edge weights).
    weighted_degree: np.ndarray = field(repr=False)  # float64, len n

    @property
    def n_nodes(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        """Number of undirected edges."""
        return len(self.indices) // 2

    def index_of(self, node_id: str) -> int:
        try:
            return self._index[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node id: {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._index

    def kind_letter(self, node_id: str) -> str:
        return _KIND_LETTERS[int(self.kinds[self.index_of(node_id)])]

    def is_product(self, node_id: str) -> bool:
        return self.kinds[self.index_of(node_id)] == PRODUCT

    def is_attribute(self, node_id: str) -> bool:
        return self.kinds[self.index_of(node_id)] == ATTRIBUTE

    def type_label(self, node_id: str) -> str:
        return self.type_labels[self.index_of(node_id)]

    def topics_of(self, node_id: str) -> frozenset[str]:
        return self.topics[self.index_of(node_id)]

    def neighbors(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Neighbor indices and weights of node index ``i``."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def product_ids(self) -> Iterator[str]:
        for i, node_id in enumerate(self.ids):
            if self.kinds[i] == PRODUCT:
                yield node_id

    def attribute_ids(self) -> Iterator[str]:
        for i, node_id in enumerate(self.ids):
            if self.kinds[i] == ATTRIBUTE:
                yield node_id

    # -- canonical serialization -------------------------------------------

    def node_lines(self) -> list[str]:
        """Nodes in index order, in the ingestion file format."""
        out = []
        for i, node_id in enumerate(self.ids):
            kind = _KIND_LETTERS[int(self.kinds[i])]
            topics = ",".join(sorted(self.topics[i]))
            out.append(f"{node_id}\t{kind}\t{self.type_labels[i]}\t{topics}")
        return out

    def edge_lines(self) -> list[str]:
        """Each undirected edge once (src index < dst index), sorted."""
        out = []
        for u in range(self.n_nodes):
            lo, hi = self.indptr[u], self.indptr[u + 1]
            for v, w in zip(self.indices[lo:hi], self.weights[lo:hi]):
                if u < v:
                    out.append(f"{self.ids[u]}\t{self.ids[int(v)]}\t{float(w)!r}")
        return out

    def dumps(self) -> tuple[str, str]:
        """Canonical (node_text, edge_text); identical inputs load to identical dumps."""
        return (
            "\n".join(self.node_lines()) + "\n",
            "\n".join(self.edge_lines()) + "\n" if self.n_edges else "",
        )


@dataclass(frozen=True)
class Query:
    """A justification query: recommended product, positive-feedback set, budget, weights.

    ``r`` may appear in ``feedback``; the relevance computation then assigns
    ``r`` its own self-normalized feedback weight.
    """

    r: str
    feedback: frozenset[str]
    budget: int
    rho: float = 0.5
    lambda1: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self) -> None:
        if not self.feedback:
            raise ValueError("feedback set must be non-empty")
        if self.budget < 1:
            raise ValueError(f"budget must be a positive integer, got {self.budget}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("lambda1 and lambda2 must be non-negative")

    def validate_against(self, g: ProductGraph) -> None:
        for node_id in (self.r, *self.feedback):
            if not g.has_node(node_id):
                raise UnknownNodeError(f"unknown node id: {node_id!r}")
            if not g.is_product(node_id):
                raise ValueError(f"query node {node_id!r} is not a Product")


def _open_lines(source) -> tuple[str, Iterator[tuple[int, str]]]:
    """Resolve a path / file object / iterable of lines into (name, numbered lines)."""
    if isinstance(source, (str, os.PathLike)):
        name = str(source)
        handle = open(source, "r", encoding="utf-8")
        return name, ((i, line) for i, line in enumerate(handle, start=1))
    if isinstance(source, io.TextIOBase):
        name = getattr(source, "name", "<stream>")
        return name, ((i, line) for i, line in enumerate(source, start=1))
    return "<lines>", ((i, line) for i, line in enumerate(source, start=1))


def load_graph(node_source, edge_source) -> ProductGraph:
    """Build a validated ProductGraph from line-oriented node and edge sources.

    Sources are paths, open text files, or iterables of lines. Node lines are
    ``id<TAB>kind<TAB>type_label<TAB>topic1,topic2,...`` with kind one of
    P/A/E and fields 3-4 empty for P/E. Edge lines are ``src<TAB>dst<TAB>weight``
    with the weight optional (default 1.0). ``#``-prefixed and blank lines are
    ignored. Duplicate edges have their weights summed after symmetrization.
    """
    ids: list[str] = []
    kinds: list[int] = []
    type_labels: list[str] = []
    topics: list[frozenset[str]] = []
    index: dict[str, int] = {}

    node_name, node_lines = _open_lines(node_source)
    for lineno, raw in node_lines:
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2 or len(fields) > 4:
            raise GraphFormatError(
                f"{node_name}, line {lineno}: expected 2-4 tab-separated fields, got {len(fields)}"
            )
        node_id = fields[0]
        if not node_id:
            raise GraphFormatError(f"{node_name}, line {lineno}: empty node id")
        if node_id in index:
            raise GraphFormatError(f"{node_name}, line {lineno}: duplicate node id {node_id!r}")
        kind_code = _KIND_CODES.get(fields[1])
        if kind_code is None:
            raise GraphFormatError(
                f"{node_name}, line {lineno}: kind must be one of P/A/E, got {fields[1]!r}"
            )
        label = fields[2] if len(fields) > 2 else ""
        topic_field = fields[3] if len(fields) > 3 else ""
        if kind_code == ATTRIBUTE:
            if not label:
                raise GraphFormatError(
                    f"{node_name}, line {lineno}: attribute {node_id!r} needs a non-empty type label"
                )
            topic_set = frozenset(t for t in topic_field.split(",") if t)
        else:
            if label or topic_field:
                raise GraphFormatError(
                    f"{node_name}, line {lineno}: type/topic fields must be empty for kind {fields[1]}"
                )
            topic_set = frozenset()
        index[node_id] = len(ids)
        ids.append(node_id)
        kinds.append(kind_code)
        type_labels.append(label)
        topics.append(topic_set)

    n = len(ids)
    pair_weights: dict[tuple[int, int], float] = {}
    edge_name, edge_lines = _open_lines(edge_source)
    for lineno, raw in edge_lines:
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) < 2 or len(fields) > 3:
            raise GraphFormatError(
                f"{edge_name}, line {lineno}: expected 2-3 tab-separated fields, got {len(fields)}"
            )
        try:
            u = index[fields[0]]
        except KeyError:
            raise GraphFormatError(
                f"{edge_name}, line {lineno}: unknown node id {fields[0]!r}"
            ) from None
        try:
            v = index[fields[1]]
        except KeyError:
            raise GraphFormatError(
                f"{edge_name}, line {lineno}: unknown node id {fields[1]!r}"
            ) from None
        if u == v:
            raise GraphFormatError(
                f"{edge_name}, line {lineno}: self-loop on {fields[0]!r} is not allowed"
            )
        if len(fields) == 3 and fields[2]:
            try:
                w = float(fields[2])
            except ValueError:
                raise GraphFormatError(
                    f"{edge_name}, line {lineno}: bad weight {fields[2]!r}"
                ) from None
        else:
            w = 1.0
        if not w > 0 or not np.isfinite(w):
            raise GraphFormatError(
                f"{edge_name}, line {lineno}: edge weight must be a positive finite number, got {w}"
            )
        key = (u, v) if u < v else (v, u)
        pair_weights[key] = pair_weights.get(key, 0.0) + w

    return _assemble(ids, kinds, type_labels, topics, index, pair_weights)


def graph_from_edges(
    nodes: Iterable[tuple[str, str, str, Iterable[str]]],
    edges: Iterable[tuple[str, str, float]],
) -> ProductGraph:
    """Programmatic construction through the same validation path as file loading.

    ``nodes`` yields (id, kind_letter, type_label, topics); ``edges`` yields
    (src, dst, weight).
    """
    node_lines = [
        f"{node_id}\t{kind}\t{label}\t{','.join(sorted(topic_list))}"
        for node_id, kind, label, topic_list in nodes
    ]
    edge_lines = [f"{u}\t{v}\t{w!r}" for u, v, w in edges]
    return load_graph(node_lines, edge_lines)


def _assemble(ids, kinds, type_labels, topics, index, pair_weights) -> ProductGraph:
    n = len(ids)
    kinds_arr = np.asarray(kinds, dtype=np.uint8)
    m = len(pair_weights)
    src = np.empty(2 * m, dtype=np.int32)
    dst = np.empty(2 * m, dtype=np.int32)
    wgt = np.empty(2 * m, dtype=np.float64)
    for k, ((u, v), w) in enumerate(pair_weights.items()):
        src[2 * k], dst[2 * k], wgt[2 * k] = u, v, w
        src[2 * k + 1], dst[2 * k + 1], wgt[2 * k + 1] = v, u, w

    order = np.lexsort((dst, src))
    src, dst, wgt = src[order], dst[order], wgt[order]
    counts = np.bincount(src, minlength=n) if m else np.zeros(n, dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    weighted_degree = (
        np.bincount(src, weights=wgt, minlength=n) if m else np.zeros(n, dtype=np.float64)
    )

    g = ProductGraph(
        ids=tuple(ids),
        kinds=kinds_arr,
        type_labels=tuple(type_labels),
        topics=tuple(topics),
        indptr=indptr,
        indices=dst,
        weights=wgt,
        _index=index,
        arc_src=src,
        weighted_degree=weighted_degree,
    )
    _validate_kinds(g)
    for arr in (g.kinds, g.indptr, g.indices, g.weights, g.arc_src, g.weighted_degree):
        arr.setflags(write=False)
    return g


def _validate_kinds(g: ProductGraph) -> None:
    for i in range(g.n_nodes):
        kind = g.kinds[i]
        if kind == PRODUCT:
            continue
        nbr, _ = g.neighbors(i)
        has_product = bool(np.any(g.kinds[nbr] == PRODUCT)) if len(nbr) else False
        if kind == ATTRIBUTE and not has_product:
            raise GraphFormatError(
                f"attribute {g.ids[i]!r} has no Product neighbor"
            )
        if kind == ENTITY and has_product:
            raise GraphFormatError(
                f"entity {g.ids[i]!r} must not neighbor a Product"
            )


def attributes_of(g: ProductGraph, product_id: str) -> list[str]:
    """Attribute-kind neighbors of a product, in id-sorted order."""
    i = g.index_of(product_id)
    if g.kinds[i] != PRODUCT:
        raise ValueError(f"node {product_id!r} is not a Product")
    nbr, _ = g.neighbors(i)
    return sorted(g.ids[int(j)] for j in nbr if g.kinds[j] == ATTRIBUTE)
