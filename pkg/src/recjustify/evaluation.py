"""Retrieval and trade-off harnesses with deterministic synthetic workloads.

Retrieval quality is the mean reciprocal rank of a known-relevant attribute
among candidates of the same type, with tied scores resolved to the average
rank of the tied block. The trade-off harness sweeps the type-diversity
weight and reports how selected sets trade relevance mass for type coverage.
The synthetic generators are seeded and fully deterministic: a scalable
product-attribute-entity graph for benchmarks, a mixed-type candidate pool
for the sweep, and a planted-preference benchmark in which each simulated
user's own review of the recommended product is the retrieval target.

Each retrieval case treats exactly one attribute as relevant; when more
candidates are genuinely relevant the reported value understates retrieval
quality, so read it as a lower bound.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass
from statistics import fmean
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from recjustify.baselines import METHODS, score_attributes
from recjustify.graph import ProductGraph, Query, attributes_of, graph_from_edges
from recjustify.ppr import DEFAULT_CONFIG, PprConfig
from recjustify.relevance import relevance_scores
from recjustify.scoring import scoring_context, term_breakdown
from recjustify.selector import greedy_select, justify

Scorer = Callable[[ProductGraph, str, frozenset[str]], Mapping[str, float]]


@dataclass(frozen=True)
class RetrievalCase:
    """One retrieval trial: rank a known-relevant attribute among same-type peers."""

    user_id: str
    r: str
    feedback: frozenset[str]
    target: str
    candidate_type: str

    def validate_against(self, g: ProductGraph) -> None:
        if not self.feedback:
            raise ValueError(f"case {self.user_id!r}: feedback set must be non-empty")
        for node_id in (self.r, *self.feedback):
            if not g.is_product(node_id):
                raise ValueError(f"case {self.user_id!r}: node {node_id!r} is not a Product")
        if self.target not in attributes_of(g, self.r):
            raise ValueError(
                f"case {self.user_id!r}: target {self.target!r} is not an attribute of {self.r!r}"
            )
        if g.type_label(self.target) != self.candidate_type:
            raise ValueError(
                f"case {self.user_id!r}: target has type {g.type_label(self.target)!r}, "
                f"expected {self.candidate_type!r}"
            )


@dataclass(frozen=True)
class SweepPoint:
    """Mean selection outcomes at one type-diversity weight."""

    lambda1: float
    mean_relevance: float
    mean_type_diversity: float


def mrr(ranks: Iterable[float]) -> float:
    """Mean reciprocal rank over 1-based ranks; fractional ranks arise from tie averaging."""
    items = [float(rank) for rank in ranks]
    if not items:
        raise ValueError("mrr needs at least one rank")
    for rank in items:
        if not (rank >= 1.0 and math.isfinite(rank)):
            raise ValueError(f"ranks must be finite and >= 1, got {rank}")
    return fmean(1.0 / rank for rank in items)


def target_rank(scores: Mapping[str, float], target: str) -> float:
    """1-based rank of the target under descending score; ties take the block's average rank."""
    if target not in scores:
        raise ValueError(f"target {target!r} missing from candidate scores")
    t = scores[target]
    higher = sum(1 for v in scores.values() if v > t)
    tied = sum(1 for v in scores.values() if v == t)
    return higher + (tied + 1) / 2.0


def resolve_scorer(
    scorer: "str | Scorer",
    config: PprConfig = DEFAULT_CONFIG,
    rho: float = 0.5,
    alpha: float = 0.5,
    beta: float = 0.5,
) -> Scorer:
    """Accept a method name or any callable with the (graph, r, feedback) contract."""
    if callable(scorer):
        return scorer
    if scorer not in METHODS:
        raise ValueError(f"unknown scoring method {scorer!r}; expected one of {', '.join(METHODS)}")
    return functools.partial(
        score_attributes, method=scorer, config=config, rho=rho, alpha=alpha, beta=beta
    )


def retrieval_ranks(
    g: ProductGraph,
    cases: Sequence[RetrievalCase],
    scorer: "str | Scorer",
    config: PprConfig = DEFAULT_CONFIG,
) -> list[float]:
    """Per-case rank of the target among same-type candidates, in case order."""
    score_fn = resolve_scorer(scorer, config)
    ranks = []
    for case in cases:
        case.validate_against(g)
        scores = score_fn(g, case.r, case.feedback)
        pool = {a: float(s) for a, s in scores.items() if g.type_label(a) == case.candidate_type}
        ranks.append(target_rank(pool, case.target))
    return ranks


def preference_retrieval(
    g: ProductGraph,
    cases: Sequence[RetrievalCase],
    scorer: "str | Scorer",
    config: PprConfig = DEFAULT_CONFIG,
) -> float:
    """Mean reciprocal rank of the targets over all cases."""
    return mrr(retrieval_ranks(g, cases, scorer, config))


def diversity_sweep(
    g: ProductGraph,
    users: Sequence[tuple[str, frozenset[str]]],
    lambda1_grid: Sequence[float],
    budget: int,
    rho: float = 0.5,
    config: PprConfig = DEFAULT_CONFIG,
) -> list[SweepPoint]:
    """Mean relevance mass and type diversity of greedy selections per diversity weight.

    The topic weight stays at zero; only the type-diversity weight varies.
    Relevance does not depend on the mixing weights, so the walks run once per
    user and are reused across the grid.
    """
    grid = [float(lam) for lam in lambda1_grid]
    if not grid:
        raise ValueError("lambda1 grid must be non-empty")
    if not users:
        raise ValueError("user list must be non-empty")
    cached = []
    for r, feedback in users:
        query = Query(r=r, feedback=frozenset(feedback), budget=budget, rho=rho)
        cached.append((query, relevance_scores(g, query, config)))

    points = []
    for lam in grid:
        rel_values = []
        div_values = []
        for base, rel in cached:
            query = Query(
                r=base.r, feedback=base.feedback, budget=budget, rho=rho, lambda1=lam, lambda2=0.0
            )
            ctx = scoring_context(g, query, config, relevance=rel)
            picked = greedy_select(ctx)
            rel_values.append(picked.relevance_mass)
            div_values.append(term_breakdown(ctx, picked.attributes)["type_diversity"])
        points.append(
            SweepPoint(
                lambda1=lam,
                mean_relevance=fmean(rel_values),
                mean_type_diversity=fmean(div_values),
            )
        )
    return points


# Guard for synth_graph: beyond this many product-attribute edges the line-based
# construction path starts to swamp memory.
MAX_SYNTH_EDGES = 20_000_000


def synth_graph(
    n_products: int,
    attrs_per_product: int,
    n_types: int,
    topics_per_attr: int,
    seed: int = 0,
) -> ProductGraph:
    """Deterministic pseudo-random product graph at a requested scale.

    Products draw distinct attributes from a shared pool with skewed
    popularity, so a few attributes are common and most are rare; entities
    link small groups of attributes. Identical parameters and seed give an
    identical graph.
    """
    if min(n_products, attrs_per_product, n_types, topics_per_attr) < 1:
        raise ValueError("all size parameters must be positive")
    if n_products * attrs_per_product > MAX_SYNTH_EDGES:
        raise ValueError(
            f"requested scale exceeds {MAX_SYNTH_EDGES} product-attribute edges; "
            "reduce n_products or attrs_per_product"
        )
    rng = np.random.default_rng(seed)
    n_attrs = max(attrs_per_product + 1, n_products // 5)

    weights = 1.0 / np.arange(1, n_attrs + 1, dtype=np.float64) ** 0.8
    cum = np.cumsum(weights / weights.sum())
    cum[-1] = 1.0
    cols = np.searchsorted(cum, rng.random((n_products, attrs_per_product)), side="right")
    # Redraw rows whose picks collide; with replacement first, then exactly for
    # any stubborn rows so the loop always terminates.
    for _ in range(32):
        ordered = np.sort(cols, axis=1)
        bad = np.nonzero((ordered[:, 1:] == ordered[:, :-1]).any(axis=1))[0]
        if bad.size == 0:
            break
        cols[bad] = np.searchsorted(
            cum, rng.random((bad.size, attrs_per_product)), side="right"
        )
    ordered = np.sort(cols, axis=1)
    bad = np.nonzero((ordered[:, 1:] == ordered[:, :-1]).any(axis=1))[0]
    if bad.size:
        prob = weights / weights.sum()
        for row in bad:
            cols[row] = rng.choice(n_attrs, size=attrs_per_product, replace=False, p=prob)

    # Tail attributes can miss every draw; wire each to one product so no
    # attribute is left without a product neighbor.
    orphans = np.nonzero(np.bincount(cols.ravel(), minlength=n_attrs) == 0)[0]
    orphan_products = rng.integers(0, n_products, size=orphans.size)

    type_ids = rng.integers(0, n_types, size=n_attrs)
    vocab = max(8, 4 * topics_per_attr)
    topic_picks = rng.random((n_attrs, vocab)).argpartition(topics_per_attr - 1, axis=1)
    topic_picks = topic_picks[:, :topics_per_attr]

    n_entities = n_attrs // 5
    entity_links = min(3, n_attrs)

    product_names = [f"p{i}" for i in range(n_products)]
    attr_names = [f"a{j}" for j in range(n_attrs)]

    def nodes():
        for name in product_names:
            yield name, "P", "", ()
        for j, name in enumerate(attr_names):
            yield name, "A", f"t{type_ids[j]}", tuple(f"topic{v}" for v in topic_picks[j])
        for k in range(n_entities):
            yield f"e{k}", "E", "", ()

    def edges():
        for i, name in enumerate(product_names):
            for j in cols[i]:
                yield name, attr_names[j], 1.0
        for i, j in zip(orphan_products, orphans):
            yield product_names[i], attr_names[j], 1.0
        for k in range(n_entities):
            for j in rng.choice(n_attrs, size=entity_links, replace=False):
                yield f"e{k}", attr_names[j], 1.0

    return graph_from_edges(nodes(), edges())


def bench_graph(n_edges: int, seed: int = 0) -> ProductGraph:
    """Synthetic graph sized to approximately the requested undirected edge count."""
    if n_edges < 100:
        raise ValueError("benchmark scale starts at 100 edges")
    return synth_graph(
        n_products=n_edges // 8,
        attrs_per_product=8,
        n_types=6,
        topics_per_attr=2,
        seed=seed,
    )


def bench_query(
    g: ProductGraph, n_feedback: int = 10, budget: int = 15, seed: int = 0
) -> Query:
    """Deterministic query over a synthetic graph: one recommendation, random feedback."""
    products = list(g.product_ids())
    if len(products) < n_feedback + 1:
        raise ValueError(f"graph has {len(products)} products, need {n_feedback + 1}")
    picks = np.random.default_rng(seed).choice(len(products), size=n_feedback + 1, replace=False)
    return Query(
        r=products[picks[0]],
        feedback=frozenset(products[i] for i in picks[1:]),
        budget=budget,
    )


def justify_wall_time(
    g: ProductGraph,
    query: Query,
    config: PprConfig = DEFAULT_CONFIG,
    repeats: int = 3,
) -> float:
    """Best wall-clock seconds for an end-to-end justification over a few repeats."""
    best = math.inf
    for _ in range(max(1, repeats)):
        start = time.perf_counter()
        justify(g, query, config)
        best = min(best, time.perf_counter() - start)
    return best


def mixed_type_fixture(
    n_users: int = 50, seed: int = 11
) -> tuple[ProductGraph, list[tuple[str, frozenset[str]]]]:
    """Many small user worlds in one graph, each with a mixed-type candidate pool.

    Every user's recommended product carries twelve candidate attributes in
    four types: four of one type tied strongly to both feedback products, and
    eight fringe attributes in the remaining three types, each tied weakly to
    a single feedback product. Pure relevance selection concentrates on the
    strong type; a growing type-diversity weight pulls fringe types in.
    Budgets around four keep that trade-off visible.

    Returns the graph and per-user (recommended, feedback) query pairs.
    """
    if n_users < 1:
        raise ValueError("need at least one user")
    rng = np.random.default_rng(seed)
    nodes = []
    edges = []
    users = []
    for u in range(n_users):
        r, q1, q2 = f"u{u}/r", f"u{u}/q1", f"u{u}/q2"
        nodes += [(r, "P", "", ()), (q1, "P", "", ()), (q2, "P", "", ())]
        for j in range(4):
            a = f"u{u}/d{j}"
            nodes.append((a, "A", "t0", (f"{a}/topic",)))
            edges += [(r, a, 1.0), (q1, a, 1.0), (q2, a, 1.0)]
        for j in range(8):
            a = f"u{u}/f{j}"
            nodes.append((a, "A", f"t{1 + j % 3}", (f"{a}/topic",)))
            w = float(rng.uniform(0.5, 1.0))
            edges += [(r, a, 1.0), (q1 if j % 2 == 0 else q2, a, w)]
        users.append((r, frozenset({q1, q2})))
    return graph_from_edges(nodes, edges), users


def planted_retrieval_benchmark(
    n_cases: int = 60,
    n_products: int = 30,
    reviews_per_user: int = 4,
    seed: int = 5,
) -> tuple[ProductGraph, list[RetrievalCase]]:
    """A shared catalog where each simulated user reviews a few products.

    Each review is an attribute of type ``review`` on exactly one product, and
    one keyword entity per user links that user's reviews together. One
    reviewed product per user plays the recommendation; the user's own review
    of it is the retrieval target, ranked against other users' reviews of the
    same product. The keyword link is the only signal separating the target:
    personalized walks can follow it, while adjacency counting and
    unpersonalized ranking see near-interchangeable single-product reviews.

    Returns the graph and one RetrievalCase per simulated user.
    """
    if n_cases < 1 or reviews_per_user < 2:
        raise ValueError("need at least one case and two reviews per user")
    if reviews_per_user > n_products:
        raise ValueError("reviews_per_user cannot exceed n_products")
    if n_cases > math.comb(n_products, reviews_per_user):
        raise ValueError("not enough distinct review sets for the requested number of cases")
    rng = np.random.default_rng(seed)
    nodes = [(f"m{i}", "P", "", ()) for i in range(n_products)]
    edges = []
    cases = []
    seen_sets: set[tuple[int, ...]] = set()
    for u in range(n_cases):
        # Distinct review sets across users rule out structurally identical
        # competitors for the target.
        while True:
            picks = tuple(
                sorted(int(i) for i in rng.choice(n_products, size=reviews_per_user, replace=False))
            )
            if picks not in seen_sets:
                seen_sets.add(picks)
                break
        target_product = picks[int(rng.integers(reviews_per_user))]
        keyword = f"kw{u}"
        nodes.append((keyword, "E", "", ()))
        for i in picks:
            review = f"rev{u}/m{i}"
            nodes.append((review, "A", "review", ()))
            edges += [(f"m{i}", review, 1.0), (keyword, review, 1.0)]
        cases.append(
            RetrievalCase(
                user_id=f"u{u}",
                r=f"m{target_product}",
                feedback=frozenset(f"m{i}" for i in picks if i != target_product),
                target=f"rev{u}/m{target_product}",
                candidate_type="review",
            )
        )
    return graph_from_edges(nodes, edges), cases
