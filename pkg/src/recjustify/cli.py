"""Command-line front-end for justification queries and the study harnesses.

Commands read tab-separated node/edge files or generate seeded synthetic
workloads, print a human-readable table to stdout, and can emit the same
results as line-delimited JSON records via ``--output`` (pass ``-`` to print
the records instead of the table). Runs are reproducible given identical
inputs, flags, and seed; only timings vary.

Exit codes: 0 success, 1 usage error, 2 input or data error, 3 internal
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from dataclasses import dataclass
from typing import NoReturn, Sequence

from recjustify.axioms import DEFAULT_MARGIN, axiom_table, default_scorers, render_axiom_table
from recjustify.baselines import METHODS, score_attributes
from recjustify.evaluation import (
    RetrievalCase,
    bench_graph,
    bench_query,
    diversity_sweep,
    justify_wall_time,
    mixed_type_fixture,
    mrr,
    planted_retrieval_benchmark,
    retrieval_ranks,
)
from recjustify.graph import (
    GraphFormatError,
    ProductGraph,
    Query,
    UnknownNodeError,
    load_graph,
)
from recjustify.ppr import (
    KERNEL_BACKEND,
    PprConfig,
    TransitionOperator,
    available_kernels,
    personalization,
)
from recjustify.relevance import relevance_report
from recjustify.scoring import scoring_context, term_breakdown
from recjustify.selector import greedy_select

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    """Bad flags or flag values; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    """Effective settings of one run; defaults are the reference parameters."""

    nodes: str | None = None
    edges: str | None = None
    r: str | None = None
    feedback: tuple[str, ...] = ()
    query_file: str | None = None
    method: str = "nppr"
    budget: int = 15
    rho: float = 0.5
    lambda1: float = 0.0
    lambda2: float = 0.0
    alpha: float = 0.5
    beta: float = 0.5
    damping: float = 0.85
    tolerance: float = 1e-9
    max_iterations: int = 200
    output: str | None = None
    seed: int = 0

    def ppr_config(self) -> PprConfig:
        return PprConfig(damping=self.damping, tol=self.tolerance, max_iter=self.max_iterations)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    defaults = RunConfig()

    def pick(name):
        value = getattr(args, name, None)
        return getattr(defaults, name) if value is None else value

    feedback_raw = getattr(args, "feedback", None)
    feedback = tuple(x.strip() for x in feedback_raw.split(",") if x.strip()) if feedback_raw else ()
    cfg = RunConfig(
        nodes=getattr(args, "nodes", None),
        edges=getattr(args, "edges", None),
        r=getattr(args, "r", None),
        feedback=feedback,
        query_file=getattr(args, "query_file", None),
        method=pick("method"),
        budget=pick("budget"),
        rho=pick("rho"),
        lambda1=pick("lambda1"),
        lambda2=pick("lambda2"),
        alpha=pick("alpha"),
        beta=pick("beta"),
        damping=pick("damping"),
        tolerance=pick("tolerance"),
        max_iterations=pick("max_iterations"),
        output=getattr(args, "output", None),
        seed=pick("seed"),
    )
    if cfg.budget < 1:
        raise UsageError(f"budget must be at least 1, got {cfg.budget}")
    if not 0.0 <= cfg.rho <= 1.0:
        raise UsageError(f"rho must lie in [0, 1], got {cfg.rho}")
    if cfg.lambda1 < 0 or cfg.lambda2 < 0:
        raise UsageError("lambda1 and lambda2 must be non-negative")
    if cfg.alpha < 0 or cfg.beta < 0:
        raise UsageError("alpha and beta must be non-negative")
    if not 0.0 < cfg.damping < 1.0:
        raise UsageError(f"damping must lie strictly in (0, 1), got {cfg.damping}")
    if not cfg.tolerance > 0:
        raise UsageError(f"tolerance must be positive, got {cfg.tolerance}")
    if cfg.max_iterations < 1:
        raise UsageError(f"max-iterations must be at least 1, got {cfg.max_iterations}")
    if cfg.method not in METHODS:
        raise UsageError(f"unknown method {cfg.method!r}; expected one of {', '.join(METHODS)}")
    return cfg


def _emit(records: list[dict], table: str, output: str | None) -> None:
    if output == "-":
        for record in records:
            print(json.dumps(record, sort_keys=True))
        return
    if table:
        print(table)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")


def _format_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


def _load_graph(cfg: RunConfig) -> ProductGraph:
    if not cfg.nodes or not cfg.edges:
        raise UsageError("this command needs --nodes and --edges")
    return load_graph(cfg.nodes, cfg.edges)


def _read_query_rows(path: str) -> list[tuple[str, frozenset[str]]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ValueError(f"{path}, line {lineno}: expected 'r<TAB>q1,q2,...'")
            r = fields[0].strip()
            feedback = frozenset(x.strip() for x in fields[1].split(",") if x.strip())
            if not r or not feedback:
                raise ValueError(f"{path}, line {lineno}: empty recommendation or feedback set")
            rows.append((r, feedback))
    if not rows:
        raise ValueError(f"{path}: no queries found")
    return rows


def _read_cases(path: str) -> list[RetrievalCase]:
    cases = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise ValueError(
                    f"{path}, line {lineno}: expected "
                    "'user<TAB>r<TAB>q1,q2,...<TAB>target<TAB>candidate_type'"
                )
            feedback = frozenset(x.strip() for x in fields[2].split(",") if x.strip())
            if not feedback:
                raise ValueError(f"{path}, line {lineno}: empty feedback set")
            cases.append(
                RetrievalCase(
                    user_id=fields[0].strip(),
                    r=fields[1].strip(),
                    feedback=feedback,
                    target=fields[3].strip(),
                    candidate_type=fields[4].strip(),
                )
            )
    if not cases:
        raise ValueError(f"{path}: no cases found")
    return cases


def _queries(cfg: RunConfig) -> list[Query]:
    if cfg.query_file:
        rows = _read_query_rows(cfg.query_file)
    elif cfg.r and cfg.feedback:
        rows = [(cfg.r, frozenset(cfg.feedback))]
    else:
        raise UsageError("provide --r and --feedback, or --query-file")
    return [
        Query(
            r=r,
            feedback=feedback,
            budget=cfg.budget,
            rho=cfg.rho,
            lambda1=cfg.lambda1,
            lambda2=cfg.lambda2,
        )
        for r, feedback in rows
    ]


def _parse_methods(raw: str) -> list[str]:
    names = [x.strip() for x in raw.split(",") if x.strip()]
    if not names:
        raise UsageError("method list is empty")
    for name in names:
        if name not in METHODS:
            raise UsageError(f"unknown method {name!r}; expected one of {', '.join(METHODS)}")
    return names


def cmd_justify(args: argparse.Namespace, cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    queries = _queries(cfg)
    config = cfg.ppr_config()
    records: list[dict] = []
    blocks: list[str] = []
    for query in queries:
        start = time.perf_counter()
        if cfg.method == "nppr":
            report = relevance_report(g, query, config)
            ctx = scoring_context(g, query, config, relevance=report.scores)
            picked = greedy_select(ctx)
            wall = time.perf_counter() - start
            terms = term_breakdown(ctx, picked.attributes)
            records.append(
                {
                    "kind": "justification",
                    "r": query.r,
                    "feedback": sorted(query.feedback),
                    "method": cfg.method,
                    "budget": query.budget,
                    "rho": query.rho,
                    "lambda1": query.lambda1,
                    "lambda2": query.lambda2,
                    "selected": [
                        {
                            "attribute": a,
                            "type": g.type_label(a),
                            "topics": sorted(g.topics_of(a)),
                            "relevance": report.scores[a],
                            "gain": gain,
                        }
                        for a, gain in zip(picked.attributes, picked.gains)
                    ],
                    "objective": picked.score,
                    "terms": terms,
                    "relevance_mass": picked.relevance_mass,
                    "type_count": picked.type_count,
                    "topic_count": picked.topic_count,
                    "feedback_weights": report.feedback_weights,
                    "walk_iterations": report.iterations,
                    "converged": report.converged,
                    "wall_time_s": wall,
                }
            )
            rows = [
                [
                    str(i + 1),
                    a,
                    g.type_label(a),
                    f"{report.scores[a]:.6f}",
                    f"{gain:.6f}",
                    ",".join(sorted(g.topics_of(a))),
                ]
                for i, (a, gain) in enumerate(zip(picked.attributes, picked.gains))
            ]
            blocks.append(
                f"r={query.r}  method={cfg.method}  |Q|={len(query.feedback)}  "
                f"budget={query.budget}  lambda1={query.lambda1}  lambda2={query.lambda2}\n"
                f"objective={picked.score:.6f}  relevance_mass={picked.relevance_mass:.6f}  "
                f"types={picked.type_count}  topics={picked.topic_count}  "
                f"converged={'yes' if report.converged else 'NO'}  wall={wall:.4f}s\n"
                + _format_table(["#", "attribute", "type", "relevance", "gain", "topics"], rows)
            )
        else:
            scores = score_attributes(
                g,
                query.r,
                query.feedback,
                cfg.method,
                config,
                rho=cfg.rho,
                alpha=cfg.alpha,
                beta=cfg.beta,
            )
            wall = time.perf_counter() - start
            ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
            records.append(
                {
                    "kind": "scores",
                    "r": query.r,
                    "feedback": sorted(query.feedback),
                    "method": cfg.method,
                    "scores": dict(ranked),
                    "top": [[a, s] for a, s in ranked[: cfg.budget]],
                    "wall_time_s": wall,
                }
            )
            rows = [
                [str(i + 1), a, g.type_label(a), f"{s:.6g}"]
                for i, (a, s) in enumerate(ranked[: cfg.budget])
            ]
            blocks.append(
                f"r={query.r}  method={cfg.method}  |Q|={len(query.feedback)}  "
                f"(ranked scores; set selection applies to method nppr)  wall={wall:.4f}s\n"
                + _format_table(["#", "attribute", "type", "score"], rows)
            )
    _emit(records, "\n\n".join(blocks), cfg.output)
    return EXIT_OK


def cmd_axioms(args: argparse.Namespace, cfg: RunConfig) -> int:
    config = cfg.ppr_config()
    scorers = default_scorers(config=config, rho=cfg.rho, alpha=cfg.alpha, beta=cfg.beta)
    if args.methods:
        scorers = {name: scorers[name] for name in _parse_methods(args.methods)}
    table = axiom_table(scorers, margin=args.margin)
    records = []
    for scorer, by_case in table.items():
        for case_name, result in by_case.items():
            records.append(
                {
                    "kind": "axiom",
                    "scorer": scorer,
                    "axiom": case_name,
                    "passed": result.passed,
                    "margins": [ineq.margin for ineq in result.inequalities],
                    "error": result.error,
                }
            )
    _emit(records, render_axiom_table(table), cfg.output)
    walk_row = table.get("nppr")
    if walk_row is not None and not all(result.passed for result in walk_row.values()):
        failed = sorted(name for name, result in walk_row.items() if not result.passed)
        print(f"walk-based scorer failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def cmd_eval_mrr(args: argparse.Namespace, cfg: RunConfig) -> int:
    config = cfg.ppr_config()
    if args.cases:
        g = _load_graph(cfg)
        cases = _read_cases(args.cases)
    else:
        g, cases = planted_retrieval_benchmark(n_cases=args.n_cases, seed=cfg.seed)
    records: list[dict] = []
    rows = []
    for method in _parse_methods(args.methods):
        ranks = retrieval_ranks(g, cases, method, config)
        value = mrr(ranks)
        records.append({"kind": "mrr", "method": method, "mrr": value, "cases": len(cases)})
        records.extend(
            {
                "kind": "case",
                "method": method,
                "user_id": case.user_id,
                "r": case.r,
                "target": case.target,
                "rank": rank,
            }
            for case, rank in zip(cases, ranks)
        )
        rows.append([method, f"{value:.6f}", str(len(cases))])
    table = (
        _format_table(["method", "mrr", "cases"], rows)
        + "\n(one known-relevant target per case; reported values are a lower bound)"
    )
    _emit(records, table, cfg.output)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, cfg: RunConfig) -> int:
    config = cfg.ppr_config()
    grid = [float(x) for x in args.lambda1_grid.split(",") if x.strip()]
    if not grid:
        raise UsageError("lambda1 grid is empty")
    if any(x < 0 for x in grid):
        raise UsageError("lambda1 grid values must be non-negative")
    if cfg.query_file:
        g = _load_graph(cfg)
        users = _read_query_rows(cfg.query_file)
    else:
        g, users = mixed_type_fixture(n_users=args.n_users, seed=cfg.seed)
    points = diversity_sweep(g, users, grid, budget=cfg.budget, rho=cfg.rho, config=config)
    records = [
        {
            "kind": "sweep-point",
            "lambda1": p.lambda1,
            "mean_relevance": p.mean_relevance,
            "mean_type_diversity": p.mean_type_diversity,
            "users": len(users),
            "budget": cfg.budget,
        }
        for p in points
    ]
    rows = [
        [f"{p.lambda1:g}", f"{p.mean_relevance:.6f}", f"{p.mean_type_diversity:.6f}"]
        for p in points
    ]
    _emit(records, _format_table(["lambda1", "mean_relevance", "mean_type_diversity"], rows), cfg.output)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, cfg: RunConfig) -> int:
    scales = [int(x) for x in args.scales.split(",") if x.strip()]
    if not scales:
        raise UsageError("scale list is empty")
    config = cfg.ppr_config()
    kernels = available_kernels()
    records: list[dict] = []
    rows = []
    times = []
    for target in scales:
        try:
            g = bench_graph(target, seed=cfg.seed)
        except ValueError as exc:
            raise UsageError(f"scale {target}: {exc}") from None
        query = bench_query(g, n_feedback=args.n_feedback, budget=cfg.budget, seed=cfg.seed)
        wall = justify_wall_time(g, query, config, repeats=args.repeats)
        times.append(wall)
        walk_times = {}
        op = TransitionOperator(g)
        v = personalization(g, {query.r: 1.0})
        for name in sorted(kernels):
            start = time.perf_counter()
            op.solve(v, config, kernel=kernels[name])
            walk_times[name] = time.perf_counter() - start
        records.append(
            {
                "kind": "scale",
                "target_edges": target,
                "edges": g.n_edges,
                "nodes": g.n_nodes,
                "justify_time_s": wall,
                "walk_time_s": walk_times,
            }
        )
        rows.append(
            [str(g.n_edges), str(g.n_nodes), f"{wall:.4f}"]
            + [f"{walk_times[name]:.4f}" for name in sorted(kernels)]
        )
    ratios = [later / earlier for earlier, later in zip(times, times[1:])]
    records.append({"kind": "ratios", "ratios": ratios, "backend": KERNEL_BACKEND})
    table = _format_table(
        ["edges", "nodes", "justify_s"] + [f"walk_s[{name}]" for name in sorted(kernels)], rows
    )
    if ratios:
        table += "\nconsecutive justify ratios: " + ", ".join(f"{r:.2f}" for r in ratios)
    table += f"\nkernel backend in use: {KERNEL_BACKEND}"
    _emit(records, table, cfg.output)
    return EXIT_OK


def cmd_validate_graph(args: argparse.Namespace, cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    products = sum(1 for _ in g.product_ids())
    attributes = sum(1 for _ in g.attribute_ids())
    entities = g.n_nodes - products - attributes
    type_labels = sorted({t for t in g.type_labels if t})
    topic_count = len({topic for topics in g.topics for topic in topics})
    record = {
        "kind": "graph",
        "nodes": g.n_nodes,
        "products": products,
        "attributes": attributes,
        "entities": entities,
        "edges": g.n_edges,
        "attribute_types": type_labels,
        "distinct_topics": topic_count,
    }
    rows = [
        ["nodes", str(g.n_nodes)],
        ["products", str(products)],
        ["attributes", str(attributes)],
        ["entities", str(entities)],
        ["edges", str(g.n_edges)],
        ["attribute types", str(len(type_labels))],
        ["distinct topics", str(topic_count)],
    ]
    _emit([record], _format_table(["field", "value"], rows) + "\nvalidation: OK", cfg.output)
    return EXIT_OK


def build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nodes", help="node file: id<TAB>kind(P/A/E)<TAB>type<TAB>topics")
    common.add_argument("--edges", help="edge file: src<TAB>dst<TAB>weight (weight optional)")
    common.add_argument(
        "--output",
        help="write line-delimited JSON records to this path; '-' prints records instead of the table",
    )
    common.add_argument("--seed", type=int, help="seed for synthetic workloads (default 0)")
    common.add_argument(
        "--print-config", action="store_true", help="echo the effective configuration and exit"
    )

    walk = argparse.ArgumentParser(add_help=False)
    walk.add_argument("--damping", type=float, help="walk damping factor (default 0.85)")
    walk.add_argument("--tolerance", type=float, help="walk L1 convergence tolerance (default 1e-9)")
    walk.add_argument(
        "--max-iterations", type=int, dest="max_iterations", help="walk iteration cap (default 200)"
    )

    select = argparse.ArgumentParser(add_help=False)
    select.add_argument("--budget", type=int, help="justification size budget (default 15)")
    select.add_argument("--rho", type=float, help="recommendation share of the walk seed (default 0.5)")
    select.add_argument("--lambda1", type=float, help="type-diversity weight (default 0)")
    select.add_argument("--lambda2", type=float, help="topic-diversity weight (default 0)")
    select.add_argument("--alpha", type=float, help="adjacency scorer feedback weight (default 0.5)")
    select.add_argument("--beta", type=float, help="adjacency scorer recommendation weight (default 0.5)")

    parser = _Parser(prog="recjustify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser(
        "justify",
        parents=[common, walk, select],
        help="select and explain a justification set for one or more queries",
    )
    p.add_argument("--r", help="recommended product id")
    p.add_argument("--feedback", help="comma-separated positive-feedback product ids")
    p.add_argument("--query-file", dest="query_file", help="file of queries: r<TAB>q1,q2,...")
    p.add_argument("--method", choices=METHODS, help="scoring method (default nppr)")
    p.set_defaults(handler=cmd_justify)

    p = sub.add_parser(
        "axioms",
        parents=[common, walk, select],
        help="grade every scorer against the packaged axiom fixtures",
    )
    p.add_argument("--methods", help="comma-separated scorer subset (default: all)")
    p.add_argument(
        "--margin",
        type=float,
        default=DEFAULT_MARGIN,
        help="minimum strict-inequality margin (default 1e-12)",
    )
    p.set_defaults(handler=cmd_axioms)

    p = sub.add_parser(
        "eval-mrr",
        parents=[common, walk, select],
        help="mean reciprocal rank of planted targets, per scoring method",
    )
    p.add_argument(
        "--methods",
        default="nppr,explod,pagerank",
        help="comma-separated methods (default nppr,explod,pagerank)",
    )
    p.add_argument("--cases", help="case file: user<TAB>r<TAB>q1,q2<TAB>target<TAB>type")
    p.add_argument(
        "--n-cases",
        type=int,
        default=60,
        dest="n_cases",
        help="cases for the built-in planted benchmark (default 60)",
    )
    p.set_defaults(handler=cmd_eval_mrr)

    p = sub.add_parser(
        "sweep",
        parents=[common, walk, select],
        help="trade relevance against type diversity over a weight grid",
    )
    p.add_argument("--query-file", dest="query_file", help="file of users: r<TAB>q1,q2,...")
    p.add_argument(
        "--lambda1-grid",
        dest="lambda1_grid",
        default="0,0.1,0.2,0.3,0.4,0.5,0.6",
        help="comma-separated type-diversity weights (default 0..0.6 step 0.1)",
    )
    p.add_argument(
        "--n-users",
        type=int,
        default=50,
        dest="n_users",
        help="users for the built-in mixed-type fixture (default 50)",
    )
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser(
        "bench",
        parents=[common, walk, select],
        help="time end-to-end justification on a seeded synthetic scale series",
    )
    p.add_argument(
        "--scales",
        default="10000,100000,1000000",
        help="comma-separated edge-count targets (default 10000,100000,1000000)",
    )
    p.add_argument("--repeats", type=int, default=3, help="timing repeats per scale, best kept (default 3)")
    p.add_argument(
        "--n-feedback",
        type=int,
        default=10,
        dest="n_feedback",
        help="feedback products per benchmark query (default 10)",
    )
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser(
        "validate-graph",
        parents=[common],
        help="load and validate node/edge files, print a summary",
    )
    p.set_defaults(handler=cmd_validate_graph)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
        if getattr(args, "print_config", False):
            print(json.dumps(dataclasses.asdict(cfg), sort_keys=True))
            return EXIT_OK
        return args.handler(args, cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, UnknownNodeError, ValueError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"data error: {message}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
