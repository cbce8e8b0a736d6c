"""Alternative attribute scorers used for comparison and sanity studies.

All scorers share one contract: given a graph, a recommended product, and a
non-empty set of positive-feedback products, they return a score for every
attribute adjacent to the recommended product. Higher means the attribute is
a better justification for the recommendation.

Included are an adjacency-count scorer with inverse product-frequency
weighting (weight-blind), meeting-probability scorers that combine one
personalized walk per seed product multiplicatively, walk-perturbation
scorers that measure how much sinking or deleting an attribute reduces the
walk mass flowing between feedback and recommendation, and plain PageRank.
"""

from __future__ import annotations

import warnings
from typing import Collection, Mapping

import numpy as np

from recjustify.graph import PRODUCT, ProductGraph, Query, attributes_of
from recjustify.ppr import DEFAULT_CONFIG, PprConfig, TransitionOperator, pagerank, personalization
from recjustify.relevance import relevance_scores

METHODS = (
    "nppr",
    "explod",
    "mp-and",
    "mp-or",
    "ba-qr-sink",
    "ba-qr-del",
    "ba-rq-sink",
    "ba-rq-del",
    "pagerank",
)

# Above this many candidate attributes, the walk-perturbation scorers warn:
# they solve one walk per candidate (per feedback product in the q->r
# direction), which grows expensive on large graphs.
PERTURBATION_WARN_CANDIDATES = 64


def _candidate_attributes(g: ProductGraph, r: str, feedback: Collection[str]) -> list[str]:
    if not feedback:
        raise ValueError("feedback set must be non-empty")
    for q in feedback:
        if not g.is_product(q):
            raise ValueError(f"feedback node {q!r} is not a Product")
    attrs = attributes_of(g, r)
    if not attrs:
        raise ValueError(f"product {r!r} has no attributes to score")
    return attrs


def explod_scores(
    g: ProductGraph,
    r: str,
    feedback: Collection[str],
    alpha: float = 0.5,
    beta: float = 0.5,
) -> dict[str, float]:
    """Adjacency counts toward feedback and recommendation, discounted by product frequency.

    Edge weights are ignored; only the existence of product-attribute edges
    counts. The discount is one over the number of products carrying the
    attribute, so ubiquitous attributes score low.
    """
    attrs = _candidate_attributes(g, r, feedback)
    fb = set(feedback)
    scores: dict[str, float] = {}
    for a in attrs:
        nbr, _ = g.neighbors(g.index_of(a))
        product_neighbors = {g.ids[int(j)] for j in nbr if g.kinds[j] == PRODUCT}
        n_q = len(fb & product_neighbors)
        n_r = 1 if r in product_neighbors else 0
        scores[a] = (alpha * n_q / len(fb) + beta * n_r) / len(product_neighbors)
    return scores


def meeting_probability_scores(
    g: ProductGraph,
    r: str,
    feedback: Collection[str],
    mode: str = "and",
    config: PprConfig = DEFAULT_CONFIG,
) -> dict[str, float]:
    """Combine one personalized walk per seed product at each candidate attribute.

    ``and`` multiplies the per-seed scores (the walks meet at the attribute
    simultaneously); ``or`` is the complement of no walk being there. Seeds
    are the feedback products and the recommendation, as a set.
    """
    if mode not in ("and", "or"):
        raise ValueError(f"mode must be 'and' or 'or', got {mode!r}")
    attrs = _candidate_attributes(g, r, feedback)
    attr_idx = np.array([g.index_of(a) for a in attrs], dtype=np.int64)
    op = TransitionOperator(g)
    if mode == "and":
        combined = np.ones(len(attrs), dtype=np.float64)
    else:
        combined = np.zeros(len(attrs), dtype=np.float64)
    for p in sorted(set(feedback) | {r}):
        vals = op.solve(personalization(g, {p: 1.0}), config).scores[attr_idx]
        if mode == "and":
            combined *= vals
        else:
            combined = 1.0 - (1.0 - combined) * (1.0 - vals)
    return dict(zip(attrs, combined.tolist()))


def perturbation_scores(
    g: ProductGraph,
    r: str,
    feedback: Collection[str],
    direction: str = "qr",
    mode: str = "sink",
    config: PprConfig = DEFAULT_CONFIG,
    warn_above: int = PERTURBATION_WARN_CANDIDATES,
) -> dict[str, float]:
    """Score an attribute by the walk mass it carries between feedback and recommendation.

    For each candidate attribute the graph is perturbed (``sink`` removes the
    attribute's outgoing transitions, ``del`` removes the node entirely) and
    the score is the total drop, across feedback products, of the walk mass
    arriving at the other endpoint. ``qr`` walks from each feedback product
    and reads the recommendation; ``rq`` walks from the recommendation and
    reads each feedback product. Scores are raw drops, not renormalized.
    """
    if direction not in ("qr", "rq"):
        raise ValueError(f"direction must be 'qr' or 'rq', got {direction!r}")
    if mode not in ("sink", "del"):
        raise ValueError(f"mode must be 'sink' or 'del', got {mode!r}")
    attrs = _candidate_attributes(g, r, feedback)
    if len(attrs) > warn_above:
        n_solves = (len(feedback) if direction == "qr" else 1) * len(attrs)
        warnings.warn(
            f"perturbation scoring runs one walk per perturbed graph: "
            f"{n_solves} solves for {len(attrs)} candidate attributes",
            RuntimeWarning,
            stacklevel=2,
        )
    qs = sorted(set(feedback))
    base_op = TransitionOperator(g)

    def perturbed(a: str) -> TransitionOperator:
        if mode == "sink":
            return TransitionOperator(g, sink={a})
        return TransitionOperator(g, delete={a})

    scores: dict[str, float] = {}
    if direction == "qr":
        seeds = {q: personalization(g, {q: 1.0}) for q in qs}
        base = {q: base_op.solve(seeds[q], config)[r] for q in qs}
        for a in attrs:
            op = perturbed(a)
            scores[a] = sum(base[q] - op.solve(seeds[q], config)[r] for q in qs)
    else:
        seed = personalization(g, {r: 1.0})
        base = base_op.solve(seed, config)
        for a in attrs:
            result = perturbed(a).solve(seed, config)
            scores[a] = sum(base[q] - result[q] for q in qs)
    return scores


def pagerank_scores(
    g: ProductGraph,
    r: str,
    feedback: Collection[str],
    config: PprConfig = DEFAULT_CONFIG,
) -> dict[str, float]:
    """Unpersonalized PageRank restricted to the recommendation's attributes."""
    attrs = _candidate_attributes(g, r, feedback)
    result = pagerank(g, config)
    return {a: result[a] for a in attrs}


def score_attributes(
    g: ProductGraph,
    r: str,
    feedback: Collection[str],
    method: str,
    config: PprConfig = DEFAULT_CONFIG,
    rho: float = 0.5,
    alpha: float = 0.5,
    beta: float = 0.5,
) -> dict[str, float]:
    """Dispatch to one scorer by method name; see ``METHODS`` for valid names."""
    if method == "nppr":
        query = Query(r=r, feedback=frozenset(feedback), budget=1, rho=rho)
        return relevance_scores(g, query, config)
    if method == "explod":
        return explod_scores(g, r, feedback, alpha=alpha, beta=beta)
    if method in ("mp-and", "mp-or"):
        return meeting_probability_scores(g, r, feedback, mode=method[3:], config=config)
    if method.startswith("ba-"):
        parts = method.split("-")
        if len(parts) == 3 and parts[1] in ("qr", "rq") and parts[2] in ("sink", "del"):
            return perturbation_scores(
                g, r, feedback, direction=parts[1], mode=parts[2], config=config
            )
    if method == "pagerank":
        return pagerank_scores(g, r, feedback, config)
    raise ValueError(f"unknown scoring method {method!r}; expected one of {', '.join(METHODS)}")
