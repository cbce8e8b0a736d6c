"""Greedy budgeted selection of a justification set.

Each round picks the candidate attribute with the largest marginal gain in
the justification objective, breaking ties toward the lexicographically
smallest node id, until the budget is filled or no candidates remain. Because
the objective is non-negative, monotone, and submodular with zero value on
the empty set, the selected set scores at least (1 - 1/e) of the best
achievable subset within the budget.
"""

from __future__ import annotations

from dataclasses import dataclass

from recjustify.graph import ProductGraph, Query
from recjustify.ppr import DEFAULT_CONFIG, PprConfig
from recjustify.scoring import ScoringContext, justification_score, scoring_context


@dataclass(frozen=True)
class JustificationSet:
    """Greedy selection outcome: attributes in pick order, with score breakdown."""

    attributes: tuple[str, ...]
    score: float
    gains: tuple[float, ...]
    relevance_mass: float
    type_count: int
    topic_count: int

    def __len__(self) -> int:
        return len(self.attributes)


def marginal_gain(ctx: ScoringContext, subset: list[str], candidate: str) -> float:
    """Objective increase from adding one candidate to the current subset."""
    return justification_score(ctx, subset + [candidate]) - justification_score(ctx, subset)


def greedy_select(ctx: ScoringContext) -> JustificationSet:
    """Pick up to ``ctx.budget`` attributes by repeated best-marginal-gain choice."""
    b = ctx.bounds
    rel_span = b.relevance_max - b.relevance_min
    type_span = b.type_max - b.type_min
    topic_span = b.topic_max - b.topic_min

    def objective(rel_sum: float, n_types: int, n_topics: int) -> float:
        rel = 1.0 if rel_span <= 0 else min(max((rel_sum - b.relevance_min) / rel_span, 0.0), 1.0)
        d_type = 1.0 if type_span <= 0 else min(max((n_types - b.type_min) / type_span, 0.0), 1.0)
        d_topic = (
            1.0 if topic_span <= 0 else min(max((n_topics - b.topic_min) / topic_span, 0.0), 1.0)
        )
        return rel + ctx.lambda1 * d_type + ctx.lambda2 * d_topic

    chosen: list[str] = []
    gains: list[float] = []
    remaining = ctx.candidates
    rel_sum = 0.0
    seen_types: set[str] = set()
    seen_topics: set[str] = set()
    current = 0.0

    while len(chosen) < ctx.budget and remaining:
        best_id = None
        best_score = None
        for a in remaining:
            n_types = len(seen_types) + (0 if ctx.type_of[a] in seen_types else 1)
            n_topics = len(seen_topics) + sum(1 for t in ctx.topics[a] if t not in seen_topics)
            score = objective(rel_sum + ctx.relevance[a], n_types, n_topics)
            if best_score is None or score > best_score:
                best_id, best_score = a, score
        chosen.append(best_id)
        gains.append(best_score - current)
        current = best_score
        rel_sum += ctx.relevance[best_id]
        seen_types.add(ctx.type_of[best_id])
        seen_topics |= ctx.topics[best_id]
        remaining.remove(best_id)

    return JustificationSet(
        attributes=tuple(chosen),
        score=current,
        gains=tuple(gains),
        relevance_mass=rel_sum,
        type_count=len(seen_types),
        topic_count=len(seen_topics),
    )


def justify(
    g: ProductGraph,
    query: Query,
    config: PprConfig = DEFAULT_CONFIG,
) -> JustificationSet:
    """End to end: relevance walks, scoring context, greedy selection."""
    return greedy_select(scoring_context(g, query, config))
