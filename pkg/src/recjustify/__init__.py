"""Graph-based justification of recommendations.

Given a heterogeneous product graph, a recommended product, and the products
a user gave positive feedback on, this package scores the recommendation's
attributes by personalized-walk relevance, then greedily selects a budgeted
justification set that balances relevance against type and topic diversity.
Alternative scorers, behavioral test suites, and retrieval-quality harnesses
are included for comparison studies.
"""

from recjustify.axioms import (
    AxiomCase,
    AxiomResult,
    axiom_suite,
    axiom_table,
    check_axiom,
    default_scorers,
    render_axiom_table,
)
from recjustify.baselines import (
    METHODS,
    explod_scores,
    meeting_probability_scores,
    pagerank_scores,
    perturbation_scores,
    score_attributes,
)
from recjustify.evaluation import (
    RetrievalCase,
    SweepPoint,
    diversity_sweep,
    mixed_type_fixture,
    mrr,
    planted_retrieval_benchmark,
    preference_retrieval,
    synth_graph,
)
from recjustify.graph import (
    ATTRIBUTE,
    ENTITY,
    PRODUCT,
    GraphFormatError,
    ProductGraph,
    Query,
    UnknownNodeError,
    attributes_of,
    graph_from_edges,
    load_graph,
)
from recjustify.ppr import (
    DEFAULT_CONFIG,
    KERNEL_BACKEND,
    PprConfig,
    ScoreVector,
    TransitionOperator,
    available_kernels,
    pagerank,
    personalization,
    ppr,
)
from recjustify.relevance import (
    RelevanceReport,
    feedback_weights,
    normalize_over,
    relevance_report,
    relevance_scores,
)
from recjustify.scoring import (
    Bounds,
    ScoringContext,
    compute_bounds,
    justification_score,
    scoring_context,
    term_breakdown,
    topic_coverage,
    type_coverage,
)
from recjustify.selector import JustificationSet, greedy_select, justify, marginal_gain

__version__ = "0.1.0"

__all__ = [
    "ATTRIBUTE",
    "AxiomCase",
    "AxiomResult",
    "Bounds",
    "DEFAULT_CONFIG",
    "ENTITY",
    "GraphFormatError",
    "JustificationSet",
    "KERNEL_BACKEND",
    "METHODS",
    "PRODUCT",
    "PprConfig",
    "ProductGraph",
    "Query",
    "RelevanceReport",
    "RetrievalCase",
    "ScoreVector",
    "ScoringContext",
    "SweepPoint",
    "TransitionOperator",
    "UnknownNodeError",
    "attributes_of",
    "available_kernels",
    "axiom_suite",
    "axiom_table",
    "check_axiom",
    "compute_bounds",
    "default_scorers",
    "diversity_sweep",
    "explod_scores",
    "feedback_weights",
    "graph_from_edges",
    "greedy_select",
    "justification_score",
    "justify",
    "load_graph",
    "marginal_gain",
    "meeting_probability_scores",
    "mixed_type_fixture",
    "mrr",
    "normalize_over",
    "pagerank",
    "pagerank_scores",
    "personalization",
    "perturbation_scores",
    "planted_retrieval_benchmark",
    "ppr",
    "preference_retrieval",
    "relevance_report",
    "relevance_scores",
    "render_axiom_table",
    "score_attributes",
    "scoring_context",
    "synth_graph",
    "term_breakdown",
    "topic_coverage",
    "type_coverage",
    "__version__",
]
