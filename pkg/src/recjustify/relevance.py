"""Attribute relevance for a recommendation, derived from personalized walks.

Each attribute adjacent to the recommended product is scored by how strongly
the user's positive-feedback products reach it. Feedback products are first
weighted by a walk seeded at the recommendation (so feedback similar to the
recommendation counts more), then each feedback product runs its own walk,
seeded jointly at that product and the recommendation, and the resulting
attribute scores are renormalized over the recommendation's own attributes.
The final score of an attribute is the feedback-weighted sum of those
normalized scores, and the scores of all candidate attributes sum to one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from recjustify.graph import ProductGraph, Query, attributes_of
from recjustify.ppr import DEFAULT_CONFIG, PprConfig, TransitionOperator, personalization


@dataclass(frozen=True)
class RelevanceReport:
    """Relevance scores with walk diagnostics for one query.

    ``iterations`` totals the power-iteration counts across all walks (one
    weighting walk plus one per feedback product); ``converged`` is true only
    if every walk reached its tolerance.
    """

    scores: dict[str, float]
    feedback_weights: dict[str, float]
    iterations: int
    converged: bool


def normalize_over(scores: np.ndarray, subset_idx: np.ndarray) -> np.ndarray:
    """Restrict a score vector to a subset of node indices and rescale to sum one.

    A subset holding no mass falls back to uniform weights, so the result is
    always a probability vector over the subset.
    """
    if len(subset_idx) == 0:
        raise ValueError("cannot normalize over an empty subset")
    vals = scores[subset_idx]
    total = vals.sum()
    if total > 0:
        return vals / total
    return np.full(len(subset_idx), 1.0 / len(subset_idx))


def feedback_weights(
    g: ProductGraph,
    r: str,
    feedback: frozenset[str] | set[str],
    config: PprConfig = DEFAULT_CONFIG,
    op: TransitionOperator | None = None,
) -> dict[str, float]:
    """Weight each feedback product by a walk seeded at the recommendation.

    Scores are renormalized over the feedback set, so the weights sum to one.
    """
    if op is None:
        op = TransitionOperator(g)
    ordered = sorted(feedback)
    result = op.solve(personalization(g, {r: 1.0}), config)
    subset_idx = np.array([g.index_of(q) for q in ordered], dtype=np.int64)
    weights = normalize_over(result.scores, subset_idx)
    return dict(zip(ordered, weights.tolist()))


def relevance_report(
    g: ProductGraph,
    query: Query,
    config: PprConfig = DEFAULT_CONFIG,
) -> RelevanceReport:
    """Relevance of every attribute of the recommended product, with diagnostics.

    Scores sum to one over the recommendation's attributes. Feedback products
    are iterated in sorted id order, so the result is bit-identical under any
    permutation of the feedback set.
    """
    query.validate_against(g)
    attrs = attributes_of(g, query.r)
    if not attrs:
        raise ValueError(f"product {query.r!r} has no attributes to justify")
    attr_idx = np.array([g.index_of(a) for a in attrs], dtype=np.int64)

    op = TransitionOperator(g)
    ordered = sorted(query.feedback)
    weighting = op.solve(personalization(g, {query.r: 1.0}), config)
    weights = dict(
        zip(ordered, normalize_over(weighting.scores, np.array([g.index_of(q) for q in ordered])))
    )
    iterations = weighting.iterations
    converged = weighting.converged

    total = np.zeros(len(attrs), dtype=np.float64)
    for q in ordered:
        seeds = {q: 1.0 - query.rho}
        seeds[query.r] = seeds.get(query.r, 0.0) + query.rho
        result = op.solve(personalization(g, seeds), config)
        iterations += result.iterations
        converged = converged and result.converged
        total += weights[q] * normalize_over(result.scores, attr_idx)
    return RelevanceReport(
        scores=dict(zip(attrs, total.tolist())),
        feedback_weights={q: float(w) for q, w in weights.items()},
        iterations=iterations,
        converged=converged,
    )


def relevance_scores(
    g: ProductGraph,
    query: Query,
    config: PprConfig = DEFAULT_CONFIG,
) -> dict[str, float]:
    """Relevance of every attribute of the recommended product, summing to one."""
    return relevance_report(g, query, config).scores
