"""Shared test utilities: reference oracles and randomized instance builders."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from recjustify.graph import ProductGraph, graph_from_edges
from recjustify.scoring import ScoringContext, compute_bounds, justification_score

AXIOM_STEMS = (
    "proximity",
    "feedback-relevance",
    "popularity",
    "edge-weight-awareness",
    "product-data-scarcity-sparse",
    "product-data-scarcity-dense",
    "community-awareness",
    "long-path-connectivity",
)


def dense_ppr(g: ProductGraph, v: np.ndarray, damping: float = 0.85, sink=(), delete=()):
    """Exact stationary walk scores via a dense linear solve.

    Reconstructs the transition structure from the graph's adjacency alone:
    row-normalized weights, sunk rows zeroed, deleted rows and columns zeroed.
    Mass at rows without outgoing transitions re-enters through the restart
    vector, which the solve encodes as a rank-one term.
    """
    n = g.n_nodes
    W = np.zeros((n, n))
    for u in range(n):
        nbr, wts = g.neighbors(u)
        for j, w in zip(nbr.tolist(), wts.tolist()):
            W[u, j] += w
    delete_idx = sorted(g.index_of(x) for x in delete)
    sink_idx = sorted(g.index_of(x) for x in sink)
    if delete_idx:
        if np.any(v[delete_idx] != 0.0):
            raise ValueError("personalization mass on a deleted node")
        W[delete_idx, :] = 0.0
        W[:, delete_idx] = 0.0
    if sink_idx:
        W[sink_idx, :] = 0.0
    out = W.sum(axis=1)
    P = np.divide(W, out[:, None], out=np.zeros_like(W), where=out[:, None] > 0)
    dangling = (out == 0.0).astype(float)
    A = np.eye(n) - damping * P.T - damping * np.outer(v, dangling)
    return np.linalg.solve(A, (1.0 - damping) * v)


def random_graph(
    seed: int,
    n_products: int = 6,
    n_attrs: int = 8,
    n_entities: int = 2,
    extra_edges: int = 10,
    unit_weights: bool = False,
    isolated_product: bool = False,
) -> ProductGraph:
    """Small random product graph, connected by construction unless isolating."""
    rng = np.random.default_rng(seed)

    def weight() -> float:
        return 1.0 if unit_weights else float(rng.uniform(0.5, 2.5))

    products = [f"p{i}" for i in range(n_products)]
    attrs = [f"a{j}" for j in range(n_attrs)]
    entities = [f"e{k}" for k in range(n_entities)]
    vocab = [f"k{t}" for t in range(6)]

    nodes = [(p, "P", "", ()) for p in products]
    for j, a in enumerate(attrs):
        n_topics = int(rng.integers(0, 3))
        topics = tuple(rng.choice(vocab, size=n_topics, replace=False).tolist())
        nodes.append((a, "A", f"t{j % 3}", topics))
    nodes.extend((e, "E", "", ()) for e in entities)

    seen = set()
    edges = []

    def add(u: str, x: str) -> None:
        if (u, x) not in seen and (x, u) not in seen:
            seen.add((u, x))
            edges.append((u, x, weight()))

    # Every attribute gets a product; every product joins the attribute chain.
    for j, a in enumerate(attrs):
        add(products[j % n_products], a)
    for i in range(n_products):
        add(products[i], attrs[i % n_attrs])
    for e in entities:
        for j in rng.choice(n_attrs, size=min(2, n_attrs), replace=False):
            add(e, attrs[int(j)])
    for _ in range(extra_edges):
        add(products[int(rng.integers(n_products))], attrs[int(rng.integers(n_attrs))])

    if isolated_product:
        nodes.append(("p_isolated", "P", "", ()))
    return graph_from_edges(nodes, edges)


def movie_graph() -> ProductGraph:
    """Hand-sized movie example: four films, typed attributes, one entity."""
    nodes = [
        ("avatar", "P", "", ()),
        ("aliens", "P", "", ()),
        ("terminator", "P", "", ()),
        ("titanic", "P", "", ()),
        ("james_cameron", "A", "director", ("auteur",)),
        ("sci_fi", "A", "genre", ("space", "future")),
        ("romance", "A", "genre", ("love",)),
        ("sigourney_weaver", "A", "actor", ()),
        ("strong_heroine", "E", "", ()),
    ]
    edges = [
        ("avatar", "james_cameron", 1.0),
        ("aliens", "james_cameron", 1.0),
        ("terminator", "james_cameron", 1.0),
        ("titanic", "james_cameron", 1.0),
        ("avatar", "sci_fi", 1.0),
        ("aliens", "sci_fi", 1.0),
        ("terminator", "sci_fi", 1.0),
        ("titanic", "romance", 1.0),
        ("avatar", "sigourney_weaver", 1.0),
        ("aliens", "sigourney_weaver", 1.0),
        ("strong_heroine", "sigourney_weaver", 1.0),
        ("strong_heroine", "sci_fi", 1.0),
    ]
    return graph_from_edges(nodes, edges)


def random_context(
    rng: np.random.Generator,
    pool_max: int = 12,
    budget_max: int | None = None,
    lambda_hi: float = 1.0,
) -> ScoringContext:
    """Random scoring instance: relevance simplex, typed candidates, topic sets."""
    n = int(rng.integers(2, pool_max + 1))
    ids = [f"c{i:02d}" for i in range(n)]
    raw = rng.uniform(0.01, 1.0, size=n)
    relevance = dict(zip(ids, (raw / raw.sum()).tolist()))
    type_of = {a: f"t{int(rng.integers(0, 4))}" for a in ids}
    vocab = [f"k{t}" for t in range(10)]
    topics = {
        a: frozenset(rng.choice(vocab, size=int(rng.integers(0, 4)), replace=False).tolist())
        for a in ids
    }
    budget = int(rng.integers(1, (budget_max or n) + 1))
    return ScoringContext(
        relevance=relevance,
        type_of=type_of,
        topics=topics,
        budget=budget,
        lambda1=float(rng.uniform(0.0, lambda_hi)),
        lambda2=float(rng.uniform(0.0, lambda_hi)),
        bounds=compute_bounds(relevance, type_of, topics, budget),
    )


def exhaustive_best(ctx: ScoringContext) -> tuple[float, tuple[str, ...]]:
    """Best objective over all non-empty subsets within the budget, by enumeration."""
    best_score = float("-inf")
    best_set: tuple[str, ...] = ()
    pool = ctx.candidates
    for size in range(1, min(ctx.budget, len(pool)) + 1):
        for subset in combinations(pool, size):
            score = justification_score(ctx, subset)
            if score > best_score:
                best_score, best_set = score, subset
    return best_score, best_set
