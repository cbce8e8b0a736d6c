"""Set-level justification objective: relevance mass plus type and topic diversity.

A candidate justification is a subset of the recommendation's attributes. Its
raw ingredients are the summed attribute relevance, the number of distinct
attribute types, and the number of distinct topics covered. Each ingredient
is min-max normalized against its achievable range over non-empty subsets
within the budget, and the objective is the normalized relevance plus
weighted normalized diversity terms. The objective is non-negative, zero on
the empty set, monotone, and submodular, which is what the greedy selector's
approximation guarantee rests on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from recjustify.graph import ProductGraph, Query, attributes_of
from recjustify.ppr import DEFAULT_CONFIG, PprConfig
from recjustify.relevance import relevance_scores


@dataclass(frozen=True)
class Bounds:
    """Achievable ranges of the raw ingredients over non-empty subsets of size <= budget.

    Relevance and type bounds are exact. The topic maximum comes from a greedy
    max-coverage pass, which can undershoot the true optimum; normalized terms
    are therefore clamped to 1, which keeps them monotone and submodular.
    """

    relevance_min: float
    relevance_max: float
    type_min: int
    type_max: int
    topic_min: int
    topic_max: int


@dataclass(frozen=True)
class ScoringContext:
    """Frozen per-query inputs for scoring candidate justification sets."""

    relevance: dict[str, float]
    type_of: dict[str, str]
    topics: dict[str, frozenset[str]]
    budget: int
    lambda1: float
    lambda2: float
    bounds: Bounds

    @property
    def candidates(self) -> list[str]:
        return sorted(self.relevance)


def relevance_mass(ctx: ScoringContext, subset: Iterable[str]) -> float:
    return sum(ctx.relevance[a] for a in subset)


def type_coverage(ctx: ScoringContext, subset: Iterable[str]) -> int:
    """Number of distinct attribute types in the subset."""
    return len({ctx.type_of[a] for a in subset})


def topic_coverage(ctx: ScoringContext, subset: Iterable[str]) -> int:
    """Number of distinct topics covered by the subset."""
    covered: set[str] = set()
    for a in subset:
        covered |= ctx.topics[a]
    return len(covered)


def greedy_max_coverage(sets: Mapping[str, frozenset[str]], k: int) -> int:
    """Greedy lower bound on the largest union of at most k of the given sets."""
    covered: set[str] = set()
    remaining = sorted(sets)
    for _ in range(min(k, len(remaining))):
        best, best_gain = None, 0
        for key in remaining:
            gain = len(sets[key] - covered)
            if gain > best_gain:
                best, best_gain = key, gain
        if best is None:
            break
        covered |= sets[best]
        remaining.remove(best)
    return len(covered)


def compute_bounds(
    relevance: Mapping[str, float],
    type_of: Mapping[str, str],
    topics: Mapping[str, frozenset[str]],
    budget: int,
) -> Bounds:
    """Ingredient ranges over non-empty subsets of the candidates, size <= budget."""
    if not relevance:
        raise ValueError("no candidate attributes to bound")
    k = min(budget, len(relevance))
    values = sorted(relevance.values(), reverse=True)
    return Bounds(
        relevance_min=min(values),
        relevance_max=sum(values[:k]),
        type_min=1,
        type_max=min(k, len(set(type_of.values()))),
        topic_min=min(len(t) for t in topics.values()),
        topic_max=greedy_max_coverage(topics, k),
    )


def _normalize(value: float, lo: float, hi: float) -> float:
    """Min-max normalize with a degenerate range mapping to 1, clamped to [0, 1]."""
    if hi <= lo:
        return 1.0
    return min(max((value - lo) / (hi - lo), 0.0), 1.0)


def term_breakdown(ctx: ScoringContext, subset: Iterable[str]) -> dict[str, float]:
    """Normalized objective terms of a subset: relevance, diversity terms, weighted total."""
    members = list(subset)
    if not members:
        return {"relevance": 0.0, "type_diversity": 0.0, "topic_diversity": 0.0, "total": 0.0}
    if len(set(members)) != len(members):
        raise ValueError("candidate subset contains duplicates")
    b = ctx.bounds
    rel = _normalize(relevance_mass(ctx, members), b.relevance_min, b.relevance_max)
    d_type = _normalize(type_coverage(ctx, members), b.type_min, b.type_max)
    d_topic = _normalize(topic_coverage(ctx, members), b.topic_min, b.topic_max)
    return {
        "relevance": rel,
        "type_diversity": d_type,
        "topic_diversity": d_topic,
        "total": rel + ctx.lambda1 * d_type + ctx.lambda2 * d_topic,
    }


def justification_score(ctx: ScoringContext, subset: Iterable[str]) -> float:
    """Objective value of a candidate subset; the empty set scores zero."""
    return term_breakdown(ctx, subset)["total"]


def scoring_context(
    g: ProductGraph,
    query: Query,
    config: PprConfig = DEFAULT_CONFIG,
    relevance: Mapping[str, float] | None = None,
) -> ScoringContext:
    """Assemble the scoring inputs for a query: relevance, metadata, bounds.

    ``relevance`` can be supplied to reuse scores that were already computed.
    """
    if relevance is None:
        relevance = relevance_scores(g, query, config)
    attrs = attributes_of(g, query.r)
    if set(relevance) != set(attrs):
        raise ValueError("relevance keys must be exactly the attributes of the product")
    type_of = {a: g.type_label(a) for a in attrs}
    topics = {a: g.topics_of(a) for a in attrs}
    return ScoringContext(
        relevance=dict(relevance),
        type_of=type_of,
        topics=topics,
        budget=query.budget,
        lambda1=query.lambda1,
        lambda2=query.lambda2,
        bounds=compute_bounds(relevance, type_of, topics, query.budget),
    )
