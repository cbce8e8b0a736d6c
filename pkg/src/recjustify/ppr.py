"""Personalized PageRank over the product graph, with node sinking and deletion.

A walk at node u either restarts (probability 1 - damping) at the
personalization distribution, or moves to a neighbor with probability
proportional to edge weight over u's weighted degree. Mass at nodes with no
outgoing transitions is re-seeded through the personalization on the next
step, so scores always sum to one over the live nodes.

Two structural perturbations are supported: sinking a node removes only its
outgoing transitions (walks still enter and are then re-seeded), and deleting
a node restricts the walk to the induced subgraph on the remaining nodes
(deleted nodes score exactly zero and may not carry personalization mass).

The inner loop is a compiled extension when available, with a vectorized
numpy fallback selected at import time; both satisfy the same contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Collection, Mapping

import numpy as np

from recjustify.graph import ProductGraph

try:
    from recjustify._kernel import power_iterate as _selected_kernel

    KERNEL_BACKEND = "compiled"
except ImportError:
    from recjustify._kernel_np import power_iterate as _selected_kernel

    KERNEL_BACKEND = "numpy"


def available_kernels() -> dict[str, Callable]:
    """Importable power-iteration kernels keyed by backend name."""
    kernels: dict[str, Callable] = {}
    try:
        from recjustify._kernel import power_iterate as compiled

        kernels["compiled"] = compiled
    except ImportError:
        pass
    from recjustify._kernel_np import power_iterate as fallback

    kernels["numpy"] = fallback
    return kernels


@dataclass(frozen=True)
class PprConfig:
    """Solver settings: damping factor, L1 convergence tolerance, iteration cap."""

    damping: float = 0.85
    tol: float = 1e-9
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not 0.0 < self.damping < 1.0:
            raise ValueError(f"damping must lie strictly in (0, 1), got {self.damping}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")


DEFAULT_CONFIG = PprConfig()


@dataclass(frozen=True)
class ScoreVector:
    """Stationary scores of one walk, aligned with graph node indices."""

    graph: ProductGraph
    scores: np.ndarray
    iterations: int
    converged: bool

    def __getitem__(self, node_id: str) -> float:
        return float(self.scores[self.graph.index_of(node_id)])

    def top(self, k: int, kind: int | None = None) -> list[tuple[str, float]]:
        """Highest-scoring nodes (optionally of one kind), ties by node id."""
        g = self.graph
        pool = [
            (node_id, float(self.scores[i]))
            for i, node_id in enumerate(g.ids)
            if kind is None or g.kinds[i] == kind
        ]
        pool.sort(key=lambda item: (-item[1], item[0]))
        return pool[:k]


class TransitionOperator:
    """Outgoing-transition table of a graph, optionally with sunk or deleted nodes.

    Building the operator is linear in the number of arcs; it can then be
    solved repeatedly against different personalization vectors, which is the
    common access pattern when one graph serves many walks.
    """

    def __init__(
        self,
        g: ProductGraph,
        sink: Collection[str] = (),
        delete: Collection[str] = (),
    ) -> None:
        self.graph = g
        self.sink = frozenset(sink)
        self.delete = frozenset(delete)
        if self.sink & self.delete:
            raise ValueError("a node cannot be both sunk and deleted")

        n = g.n_nodes
        self.deleted_mask: np.ndarray | None = None
        if not self.sink and not self.delete:
            self._arc_src = g.arc_src
            self._arc_dst = g.indices
            self._arc_prob = g.weights / g.weighted_degree[g.arc_src]
            return

        keep = np.ones(len(g.arc_src), dtype=bool)
        if self.delete:
            deleted = np.zeros(n, dtype=bool)
            deleted[[g.index_of(x) for x in self.delete]] = True
            keep &= ~deleted[g.arc_src]
            keep &= ~deleted[g.indices]
            self.deleted_mask = deleted
        if self.sink:
            sunk = np.zeros(n, dtype=bool)
            sunk[[g.index_of(x) for x in self.sink]] = True
            keep &= ~sunk[g.arc_src]

        src = np.ascontiguousarray(g.arc_src[keep])
        dst = np.ascontiguousarray(g.indices[keep])
        wgt = g.weights[keep]
        out_degree = np.bincount(src, weights=wgt, minlength=n)
        self._arc_src = src
        self._arc_dst = dst
        self._arc_prob = wgt / out_degree[src]

    def solve(
        self,
        v: np.ndarray,
        config: PprConfig = DEFAULT_CONFIG,
        kernel: Callable | None = None,
    ) -> ScoreVector:
        """Run the walk to its fixed point from personalization ``v``."""
        if self.deleted_mask is not None and np.any(v[self.deleted_mask] != 0.0):
            raise ValueError("personalization mass on a deleted node")
        run = kernel if kernel is not None else _selected_kernel
        scores, iterations, converged = run(
            self._arc_src,
            self._arc_dst,
            self._arc_prob,
            v,
            config.damping,
            config.tol,
            config.max_iter,
        )
        return ScoreVector(self.graph, scores, iterations, converged)


def personalization(g: ProductGraph, masses: Mapping[str, float]) -> np.ndarray:
    """Dense restart distribution from node-id masses, normalized to sum one."""
    if not masses:
        raise ValueError("personalization needs at least one node")
    v = np.zeros(g.n_nodes, dtype=np.float64)
    for node_id, mass in masses.items():
        if not np.isfinite(mass) or mass < 0:
            raise ValueError(f"personalization mass for {node_id!r} must be >= 0, got {mass}")
        v[g.index_of(node_id)] += mass
    total = v.sum()
    if not total > 0:
        raise ValueError("personalization masses sum to zero")
    v /= total
    return v


def ppr(
    g: ProductGraph,
    seeds: Mapping[str, float],
    config: PprConfig = DEFAULT_CONFIG,
    sink: Collection[str] = (),
    delete: Collection[str] = (),
    kernel: Callable | None = None,
) -> ScoreVector:
    """Personalized PageRank seeded at ``seeds`` over the (perturbed) graph."""
    op = TransitionOperator(g, sink=sink, delete=delete)
    return op.solve(personalization(g, seeds), config, kernel=kernel)


def pagerank(
    g: ProductGraph,
    config: PprConfig = DEFAULT_CONFIG,
    kernel: Callable | None = None,
) -> ScoreVector:
    """Unpersonalized PageRank: uniform restart over all nodes."""
    n = g.n_nodes
    if n == 0:
        raise ValueError("graph has no nodes")
    v = np.full(n, 1.0 / n, dtype=np.float64)
    return TransitionOperator(g).solve(v, config, kernel=kernel)
