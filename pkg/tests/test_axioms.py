"""Behavioral scorer suite: pinned outcome matrix, fixture integrity, grading."""

from __future__ import annotations

from importlib import resources

import pytest

import helpers
from recjustify.axioms import (
    AXIOM_NAMES,
    DEFAULT_MARGIN,
    KNOWN_OUTCOMES,
    AxiomCase,
    AxiomResult,
    axiom_suite,
    axiom_table,
    check_axiom,
    default_scorers,
    fixture_graph,
    render_axiom_table,
)
from recjustify.baselines import METHODS
from recjustify.graph import load_graph


@pytest.fixture(scope="module")
def table():
    return axiom_table()


def test_known_outcome_matrix_is_reproduced_exactly(table):
    for scorer, expected in KNOWN_OUTCOMES.items():
        passed = {case for case, result in table[scorer].items() if result.passed}
        assert passed == expected, f"{scorer}: {sorted(passed)} != {sorted(expected)}"


def test_walk_scorer_passes_every_case(table):
    assert all(result.passed for result in table["nppr"].values())


def test_pagerank_is_graded_without_expectations(table):
    assert "pagerank" in table
    assert set(table["pagerank"]) == set(AXIOM_NAMES)
    for result in table["pagerank"].values():
        assert result.error == ""
        assert result.inequalities
    assert "pagerank" not in KNOWN_OUTCOMES


def test_table_covers_all_scorers_and_cases(table):
    assert set(table) == set(METHODS)
    for row in table.values():
        assert set(row) == set(AXIOM_NAMES)


def test_suite_shape():
    suite = axiom_suite()
    assert [case.name for case in suite] == list(AXIOM_NAMES)
    by_name = {case.name: case for case in suite}
    scarcity = by_name["product-data-scarcity"]
    assert len(scarcity.graphs) == 2
    assert len(scarcity.expectations) == 4
    for case in suite:
        assert case.description
        assert len(case.graphs) == len(case.queries)
        for g in case.graphs:
            assert g.n_nodes <= 50


@pytest.mark.parametrize("stem", helpers.AXIOM_STEMS)
def test_fixture_files_are_canonical(stem):
    g = fixture_graph(stem)
    root = resources.files("recjustify.fixtures") / "axioms"
    node_text = (root / f"{stem}.nodes.tsv").read_text()
    edge_text = (root / f"{stem}.edges.tsv").read_text()
    assert g.dumps() == (node_text, edge_text)
    reloaded = load_graph(node_text.splitlines(), edge_text.splitlines())
    assert reloaded.dumps() == (node_text, edge_text)


def test_unknown_fixture_stem():
    with pytest.raises(FileNotFoundError):
        fixture_graph("no-such-case")


def scaled_case(case: AxiomCase, factor: float) -> AxiomCase:
    graphs = []
    for g in case.graphs:
        node_text, edge_text = g.dumps()
        scaled = [
            "\t".join((u, v, repr(float(w) * factor)))
            for u, v, w in (line.split("\t") for line in edge_text.splitlines())
        ]
        graphs.append(load_graph(node_text.splitlines(), scaled))
    return AxiomCase(
        name=case.name,
        description=case.description,
        graphs=tuple(graphs),
        queries=case.queries,
        expectations=case.expectations,
    )


@pytest.mark.parametrize("method", ["nppr", "mp-and", "ba-qr-sink", "explod", "pagerank"])
@pytest.mark.parametrize("factor", [0.25, 12.0])
def test_outcomes_survive_uniform_weight_scaling(method, factor):
    scorer = default_scorers()[method]
    for case in axiom_suite():
        original = check_axiom(scorer, case)
        scaled = check_axiom(scorer, scaled_case(case, factor))
        assert scaled.passed == original.passed, f"{method} flipped on {case.name}"


def test_check_axiom_captures_scorer_exceptions():
    def broken(g, r, feedback):
        raise RuntimeError("scorer exploded")

    result = check_axiom(broken, axiom_suite()[0])
    assert isinstance(result, AxiomResult)
    assert not result.passed
    assert "scorer exploded" in result.error
    assert result.inequalities == ()


def test_margin_excludes_exact_ties():
    def constant(g, r, feedback):
        return {a: 0.5 for a in g.attribute_ids()}

    result = check_axiom(constant, axiom_suite()[0], margin=DEFAULT_MARGIN)
    assert not result.passed
    assert all(not ineq.passed and ineq.margin == 0.0 for ineq in result.inequalities)


def test_margin_records_signed_differences(table):
    for row in table.values():
        for result in row.values():
            for ineq in result.inequalities:
                assert ineq.passed == (ineq.margin > DEFAULT_MARGIN)


def test_case_validation():
    g = fixture_graph("proximity")
    with pytest.raises(ValueError, match="at least one expected inequality"):
        AxiomCase("x", "d", (g,), (("r", frozenset({"q"})),), ())
    with pytest.raises(ValueError, match="each graph needs exactly one query"):
        AxiomCase("x", "d", (g,), (), ((((0, "a1"), (0, "a2"))),))
    with pytest.raises(ValueError, match="non-attribute"):
        AxiomCase(
            "x",
            "d",
            (g,),
            (("r", frozenset({"q"})),),
            (((0, "a1"), (0, "r")),),
        )


def test_render_axiom_table(table):
    text = render_axiom_table(table)
    lines = text.splitlines()
    assert lines[0].startswith("scorer")
    for method in METHODS:
        assert any(line.startswith(method) for line in lines)
    nppr_line = next(line for line in lines if line.startswith("nppr"))
    assert nppr_line.count("Y") == len(AXIOM_NAMES)
    assert "1=proximity" in text
    assert render_axiom_table({}) == "(no scorers)"
