from __future__ import annotations

import random

import pytest

from graphgen import make_node, random_graph
from quarry.errors import DanglingEdgeError, UnknownNodeError, VersionMismatchError
from quarry.graph.extract import extract
from quarry.graph.model import CFG, CG, CodeGraph, FlowEdge, graph_equal
from quarry.store.store import GraphStore, load, save


def test_round_trip_example(example_project, tmp_path):
    graph = extract(example_project)
    save(graph, tmp_path / "snap")
    loaded = load(tmp_path / "snap")
    assert graph_equal(graph, loaded)
    assert loaded.stats == graph.stats


def test_snapshot_stats_match(example_project, tmp_path):
    graph = extract(example_project)
    snapshot = save(graph, tmp_path / "snap")
    assert snapshot.version == graph.version
    assert snapshot.stats["nodes"] == graph.stats["nodes"]


def test_truncated_edges_file(example_project, tmp_path):
    graph = extract(example_project)
    save(graph, tmp_path / "snap")
    edges = tmp_path / "snap" / "edges.jsonl"
    edges.write_bytes(edges.read_bytes()[:-20])
    with pytest.raises(VersionMismatchError):
        load(tmp_path / "snap")


def test_out_of_band_node_edit(example_project, tmp_path):
    graph = extract(example_project)
    save(graph, tmp_path / "snap")
    nodes = tmp_path / "snap" / "nodes.jsonl"
    nodes.write_text(nodes.read_text().replace("printf", "fprintf"))
    with pytest.raises(VersionMismatchError):
        load(tmp_path / "snap")


def test_random_round_trip(tmp_path):
    for seed in range(8):
        rng = random.Random(seed)
        graph = random_graph(rng, max_nodes=60)
        target = tmp_path / f"snap{seed}"
        save(graph, target)
        assert graph_equal(graph, load(target))


def test_large_random_round_trip(tmp_path):
    rng = random.Random(99)
    graph = random_graph(rng, max_nodes=1000)
    save(graph, tmp_path / "big")
    assert graph_equal(graph, load(tmp_path / "big"))


def test_ten_thousand_node_round_trip(tmp_path):
    graph = CodeGraph()
    rng = random.Random(123)
    for uid in range(10_000):
        graph.add_node(make_node(uid, fn=f"fn{uid % 50}", defs=[f"v{uid % 7}"]))
    for uid in range(9_999):
        graph.add_edge(FlowEdge(uid, uid + 1, CFG))
        if uid % 3 == 0:
            target = rng.randrange(10_000)
            graph.add_edge(FlowEdge(uid, target, CG))
    graph.freeze()
    graph.version = "a" * 64
    save(graph, tmp_path / "huge")
    assert graph_equal(graph, load(tmp_path / "huge"))


def test_bulk_upsert_idempotent():
    store = GraphStore()
    nodes = [make_node(1), make_node(2)]
    edges = [FlowEdge(1, 2, CFG)]
    first = store.bulk_upsert(nodes, edges)
    second = store.bulk_upsert(nodes, edges)
    assert first == second
    assert len(store.graph.nodes) == 2
    assert store.graph.edge_count() == 1


def test_bulk_upsert_single_transaction():
    store = GraphStore()
    nodes = [make_node(i) for i in range(10_000)]
    edges = [FlowEdge(i, i + 1, CFG) for i in range(9_999)]
    store.bulk_upsert(nodes, edges)
    assert store.transactions == 1


def test_dangling_edge_rejected():
    store = GraphStore()
    with pytest.raises(DanglingEdgeError):
        store.bulk_upsert([make_node(1)], [FlowEdge(1, 42, CFG)])
    # The failed batch must not partially apply.
    assert len(store.graph.nodes) == 0


def test_edge_endpoint_in_same_batch_is_fine():
    store = GraphStore()
    store.bulk_upsert([make_node(1), make_node(2)], [FlowEdge(2, 1, CFG)])
    assert store.graph.edge_count() == 1


def test_bulk_vs_singleton_equivalence():
    rng = random.Random(7)
    graph = random_graph(rng, max_nodes=40)
    bulk = GraphStore()
    bulk.bulk_upsert(list(graph.nodes.values()), graph.edges())
    single = GraphStore()
    for node in graph.nodes.values():
        single.insert_node(node)
    for edge in graph.edges():
        single.insert_edge(edge)
    bulk.graph.version = single.graph.version = graph.version
    assert graph_equal(bulk.graph, single.graph)
    assert single.transactions > bulk.transactions


def test_successors_and_predecessors(example_project):
    graph = extract(example_project)
    store = GraphStore(graph)
    exit_uid = graph.fn_exit("main")
    assert store.successors(exit_uid, CFG) == []
    pred_uid = next(u for u, n in graph.nodes.items() if n.kind == "predicate")
    assert len(store.successors(pred_uid, CFG)) == 2
    plain = next(u for u, n in graph.nodes.items() if n.code == "int a = 2;")
    assert store.successors(plain, CG) == []
    assert store.predecessors(pred_uid, CFG) == [
        next(u for u, n in graph.nodes.items() if n.code == "int b = a * a;")
    ]


def test_unknown_node():
    store = GraphStore(CodeGraph())
    with pytest.raises(UnknownNodeError):
        store.successors(123, CFG)
