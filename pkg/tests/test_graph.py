"""Loading, validation, serialization, and query checks for the product graph."""

from __future__ import annotations

import numpy as np
import pytest

import helpers
from recjustify.graph import (
    ATTRIBUTE,
    ENTITY,
    PRODUCT,
    GraphFormatError,
    Query,
    UnknownNodeError,
    attributes_of,
    graph_from_edges,
    load_graph,
)

NODES = [
    "# products",
    "p1\tP",
    "p2\tP\t\t",
    "",
    "a1\tA\tgenre\tk1,k2",
    "a2\tA\tdirector\t",
    "e1\tE",
]
EDGES = [
    "p1\ta1\t2.0",
    "p2\ta1",
    "p1\ta2\t0.5",
    "e1\ta2\t1.5",
    "# trailing comment",
]


def small() -> object:
    return load_graph(NODES, EDGES)


def test_load_basic_structure():
    g = small()
    assert g.n_nodes == 5
    assert g.n_edges == 4
    assert g.ids == ("p1", "p2", "a1", "a2", "e1")
    assert [int(k) for k in g.kinds] == [PRODUCT, PRODUCT, ATTRIBUTE, ATTRIBUTE, ENTITY]
    assert g.type_label("a1") == "genre"
    assert g.type_label("p1") == ""
    assert g.topics_of("a1") == frozenset({"k1", "k2"})
    assert g.topics_of("a2") == frozenset()
    assert g.kind_letter("e1") == "E"
    assert g.is_product("p1") and not g.is_product("a1")
    assert g.is_attribute("a1") and not g.is_attribute("e1")
    assert list(g.product_ids()) == ["p1", "p2"]
    assert list(g.attribute_ids()) == ["a1", "a2"]


def test_default_weight_is_one():
    g = small()
    i, j = g.index_of("p2"), g.index_of("a1")
    nbr, wts = g.neighbors(i)
    assert list(nbr) == [j]
    assert wts[0] == 1.0


def test_adjacency_is_symmetric_and_sorted():
    g = helpers.random_graph(seed=3, n_products=5, n_attrs=7, n_entities=2)
    w = {}
    for u in range(g.n_nodes):
        nbr, wts = g.neighbors(u)
        assert list(nbr) == sorted(nbr)
        for v, weight in zip(nbr.tolist(), wts.tolist()):
            w[(u, v)] = weight
    assert all(w[(u, v)] == w[(v, u)] for (u, v) in w)
    for u in range(g.n_nodes):
        _, wts = g.neighbors(u)
        assert g.weighted_degree[u] == pytest.approx(float(wts.sum()), abs=1e-15)
        assert g.degree(u) == len(wts)


def test_duplicate_edges_sum_across_directions():
    g = load_graph(["p1\tP", "a1\tA\tt"], ["p1\ta1\t1.0", "a1\tp1\t2.5", "p1\ta1\t0.5"])
    assert g.n_edges == 1
    _, wts = g.neighbors(g.index_of("p1"))
    assert wts[0] == 4.0


def test_arrays_are_read_only():
    g = small()
    for arr in (g.kinds, g.indptr, g.indices, g.weights):
        with pytest.raises((ValueError, RuntimeError)):
            arr[0] = 0


@pytest.mark.parametrize(
    "bad_node, message",
    [
        ("p1\tP\tx", "type/topic fields must be empty"),
        ("e1\tE\t\tk1", "type/topic fields must be empty"),
        ("a9\tA", "needs a non-empty type label"),
        ("a9\tA\t", "needs a non-empty type label"),
        ("x1\tQ", "kind must be one of P/A/E"),
        ("x1", "expected 2-4 tab-separated fields"),
        ("x1\tP\t\tk\textra", "expected 2-4 tab-separated fields"),
        ("\tP", "empty node id"),
    ],
)
def test_node_line_errors(bad_node, message):
    with pytest.raises(GraphFormatError, match=message):
        load_graph(["p0\tP", bad_node], [])


def test_duplicate_node_id_rejected():
    with pytest.raises(GraphFormatError, match="duplicate node id"):
        load_graph(["p1\tP", "p1\tP"], [])


@pytest.mark.parametrize(
    "bad_edge, message",
    [
        ("p1\tp1", "self-loop"),
        ("p1\tmissing", "unknown node id"),
        ("missing\tp1", "unknown node id"),
        ("p1", "expected 2-3 tab-separated fields"),
        ("p1\ta1\t1.0\tx", "expected 2-3 tab-separated fields"),
        ("p1\ta1\theavy", "bad weight"),
        ("p1\ta1\t0", "must be a positive finite number"),
        ("p1\ta1\t-2", "must be a positive finite number"),
        ("p1\ta1\tinf", "must be a positive finite number"),
        ("p1\ta1\tnan", "must be a positive finite number"),
    ],
)
def test_edge_line_errors(bad_edge, message):
    with pytest.raises(GraphFormatError, match=message):
        load_graph(["p1\tP", "p2\tP", "a1\tA\tt"], ["p2\ta1", bad_edge])


def test_error_messages_carry_line_numbers(tmp_path):
    path = tmp_path / "edges.tsv"
    path.write_text("p1\ta1\n\np1\ta1\tbad\n", encoding="utf-8")
    with pytest.raises(GraphFormatError, match=r"edges\.tsv, line 3"):
        load_graph(["p1\tP", "a1\tA\tt"], path)


def test_attribute_requires_product_neighbor():
    with pytest.raises(GraphFormatError, match="has no Product neighbor"):
        load_graph(["p1\tP", "a1\tA\tt", "a2\tA\tt"], ["p1\ta1", "a1\ta2"])
    with pytest.raises(GraphFormatError, match="has no Product neighbor"):
        load_graph(["p1\tP", "a1\tA\tt", "a2\tA\tt", "e1\tE"], ["p1\ta1", "e1\ta2"])


def test_entity_must_not_touch_products():
    with pytest.raises(GraphFormatError, match="must not neighbor a Product"):
        load_graph(["p1\tP", "a1\tA\tt", "e1\tE"], ["p1\ta1", "p1\te1"])


def test_isolated_product_and_lonely_entity_are_fine():
    g = load_graph(["p1\tP", "p2\tP", "a1\tA\tt", "e1\tE"], ["p1\ta1"])
    assert g.degree(g.index_of("p2")) == 0
    assert g.degree(g.index_of("e1")) == 0


def test_unknown_node_lookup():
    g = small()
    with pytest.raises(UnknownNodeError):
        g.index_of("nope")
    assert isinstance(UnknownNodeError("x"), KeyError)
    assert not g.has_node("nope")
    assert g.has_node("p1")


def test_dumps_round_trip_is_byte_stable():
    for seed in range(4):
        g = helpers.random_graph(seed=seed, n_products=4, n_attrs=6, n_entities=2)
        node_text, edge_text = g.dumps()
        reloaded = load_graph(node_text.splitlines(), edge_text.splitlines())
        assert reloaded.dumps() == (node_text, edge_text)


def test_dumps_survives_awkward_float_weights():
    w = 0.1 + 0.2  # not exactly 0.3
    g = graph_from_edges([("p1", "P", "", ()), ("a1", "A", "t", ())], [("p1", "a1", w)])
    node_text, edge_text = g.dumps()
    reloaded = load_graph(node_text.splitlines(), edge_text.splitlines())
    _, wts = reloaded.neighbors(reloaded.index_of("p1"))
    assert wts[0] == w
    assert reloaded.dumps() == (node_text, edge_text)


def test_edgeless_graph_dumps_empty_edge_text():
    g = load_graph(["p1\tP"], [])
    node_text, edge_text = g.dumps()
    assert edge_text == ""
    assert node_text == "p1\tP\t\t\n"


def test_graph_from_edges_matches_file_loading():
    nodes = [("p1", "P", "", ()), ("a1", "A", "genre", ("k2", "k1"))]
    edges = [("p1", "a1", 1.75)]
    g1 = graph_from_edges(nodes, edges)
    g2 = load_graph(["p1\tP\t\t", "a1\tA\tgenre\tk1,k2"], ["p1\ta1\t1.75"])
    assert g1.dumps() == g2.dumps()


def test_load_from_paths(tmp_path):
    g = small()
    node_text, edge_text = g.dumps()
    np_path = tmp_path / "nodes.tsv"
    ep_path = tmp_path / "edges.tsv"
    np_path.write_text(node_text, encoding="utf-8")
    ep_path.write_text(edge_text, encoding="utf-8")
    assert load_graph(np_path, ep_path).dumps() == (node_text, edge_text)
    with open(np_path, encoding="utf-8") as nf, open(ep_path, encoding="utf-8") as ef:
        assert load_graph(nf, ef).dumps() == (node_text, edge_text)


def test_attributes_of():
    g = small()
    assert attributes_of(g, "p1") == ["a1", "a2"]
    assert attributes_of(g, "p2") == ["a1"]
    with pytest.raises(ValueError, match="is not a Product"):
        attributes_of(g, "a1")
    with pytest.raises(UnknownNodeError):
        attributes_of(g, "nope")


def test_query_validation():
    q = Query(r="p1", feedback=frozenset({"p2"}), budget=2)
    q.validate_against(small())
    with pytest.raises(ValueError, match="feedback set must be non-empty"):
        Query(r="p1", feedback=frozenset(), budget=2)
    with pytest.raises(ValueError, match="budget must be a positive integer"):
        Query(r="p1", feedback=frozenset({"p2"}), budget=0)
    with pytest.raises(ValueError, match="rho"):
        Query(r="p1", feedback=frozenset({"p2"}), budget=1, rho=1.5)
    with pytest.raises(ValueError, match="non-negative"):
        Query(r="p1", feedback=frozenset({"p2"}), budget=1, lambda1=-0.1)


def test_query_against_graph_errors():
    g = small()
    with pytest.raises(UnknownNodeError):
        Query(r="ghost", feedback=frozenset({"p2"}), budget=1).validate_against(g)
    with pytest.raises(ValueError, match="is not a Product"):
        Query(r="p1", feedback=frozenset({"a1"}), budget=1).validate_against(g)


def test_query_r_may_appear_in_feedback():
    Query(r="p1", feedback=frozenset({"p1", "p2"}), budget=1).validate_against(small())
