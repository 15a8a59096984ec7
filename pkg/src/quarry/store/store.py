"""Graph persistence and serving.

Snapshots are two line-delimited JSON files (one node or edge per line,
sorted, canonical encoding) plus a meta.json carrying the content
version and stats. The narrow store interface would admit a real graph
database behind it later; here everything is in-process.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from quarry.errors import DanglingEdgeError, VersionMismatchError
from quarry.graph.model import CodeGraph, FlowEdge, StatementNode
from quarry.store.cache import DEFAULT_CAPACITY, QueryCache

NODES_FILE = "nodes.jsonl"
EDGES_FILE = "edges.jsonl"
META_FILE = "meta.json"


@dataclass
class GraphSnapshot:
    nodes_path: Path
    edges_path: Path
    version: str
    stats: dict


def _node_record(node: StatementNode) -> dict:
    return {
        "id": node.uid,
        "file": node.file,
        "line": node.line,
        "kind": node.kind,
        "code": node.code,
        "ast": node.ast,
        "call": node.callees,
        "defs": node.defs,
        "uses": node.uses,
        "fn": node.fn,
    }


def _node_from_record(rec: dict) -> StatementNode:
    return StatementNode(
        uid=rec["id"],
        file=rec["file"],
        line=rec["line"],
        kind=rec["kind"],
        code=rec["code"],
        ast=rec["ast"],
        callees=list(rec["call"]),
        defs=list(rec["defs"]),
        uses=list(rec["uses"]),
        fn=rec["fn"],
    )


def _edge_record(edge: FlowEdge) -> dict:
    rec = {"src": edge.src, "dst": edge.dst, "kind": edge.kind}
    if edge.var is not None:
        rec["var"] = edge.var
    if edge.def_site is not None:
        rec["def"] = edge.def_site
    if edge.branch is not None:
        rec["branch"] = "true" if edge.branch else "false"
    return rec


def _edge_from_record(rec: dict) -> FlowEdge:
    branch = rec.get("branch")
    return FlowEdge(
        src=rec["src"],
        dst=rec["dst"],
        kind=rec["kind"],
        var=rec.get("var"),
        def_site=rec.get("def"),
        branch=None if branch is None else branch == "true",
    )


def _dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def save(graph: CodeGraph, directory: str | Path) -> GraphSnapshot:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    nodes_path = directory / NODES_FILE
    edges_path = directory / EDGES_FILE

    node_lines = [_dumps(_node_record(graph.nodes[uid])) for uid in sorted(graph.nodes)]
    nodes_path.write_text("\n".join(node_lines) + ("\n" if node_lines else ""))
    edge_lines = [
        _dumps(_edge_record(e)) for e in sorted(graph.edges(), key=FlowEdge.sort_key)
    ]
    edges_path.write_text("\n".join(edge_lines) + ("\n" if edge_lines else ""))

    stats = dict(graph.stats)
    stats["checksums"] = {
        "nodes": hashlib.sha256(nodes_path.read_bytes()).hexdigest(),
        "edges": hashlib.sha256(edges_path.read_bytes()).hexdigest(),
    }
    meta = {"version": graph.version, "stats": stats}
    (directory / META_FILE).write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    return GraphSnapshot(nodes_path, edges_path, graph.version, stats)


def load(directory: str | Path) -> CodeGraph:
    directory = Path(directory)
    try:
        meta = json.loads((directory / META_FILE).read_text())
    except FileNotFoundError:
        raise VersionMismatchError(f"no snapshot at {directory}") from None
    stats = dict(meta["stats"])
    checksums = stats.pop("checksums", {})
    graph = CodeGraph()
    for name, attr in ((NODES_FILE, "nodes"), (EDGES_FILE, "edges")):
        path = directory / name
        data = path.read_bytes()
        digest = hashlib.sha256(data).hexdigest()
        if checksums.get(attr) != digest:
            raise VersionMismatchError(f"{path} was modified after the snapshot was written")
    for line in (directory / NODES_FILE).read_text().splitlines():
        if line:
            graph.add_node(_node_from_record(json.loads(line)))
    for line in (directory / EDGES_FILE).read_text().splitlines():
        if line:
            graph.add_edge(_edge_from_record(json.loads(line)))
    graph.freeze()
    graph.version = meta["version"]
    graph.stats = stats
    return graph


class GraphStore:
    """Serving wrapper around a CodeGraph: bulk writes, adjacency
    queries, and a version-keyed result cache."""

    def __init__(
        self,
        graph: CodeGraph | None = None,
        cache_enabled: bool = True,
        cache_capacity: int = DEFAULT_CAPACITY,
        cache_sidecar: Path | None = None,
    ):
        self.graph = graph if graph is not None else CodeGraph()
        self.cache_enabled = cache_enabled
        self.cache = QueryCache(cache_capacity, sidecar=cache_sidecar)
        self.transactions = 0  # storage round-trips issued
        self.evaluations = 0  # predicate evaluations actually run

    # -- writes ----------------------------------------------------------

    def bulk_upsert(
        self, nodes: list[StatementNode], edges: list[FlowEdge]
    ) -> dict:
        """Apply one batch in a single transaction; idempotent."""
        known = set(self.graph.nodes) | {n.uid for n in nodes}
        for edge in edges:
            if edge.src not in known or edge.dst not in known:
                raise DanglingEdgeError(
                    f"edge {edge.src}->{edge.dst} references a missing node"
                )
        existing = {e.sort_key() for e in self.graph.edges()}
        self.transactions += 1
        for node in nodes:
            self.graph.add_node(node)
        for edge in edges:
            key = edge.sort_key()
            if key not in existing:
                existing.add(key)
                self.graph.add_edge(edge)
        self.graph.freeze()
        return self.stats()

    def insert_node(self, node: StatementNode) -> None:
        self.transactions += 1
        self.graph.add_node(node)
        self.graph.freeze()

    def insert_edge(self, edge: FlowEdge) -> None:
        if edge.src not in self.graph.nodes or edge.dst not in self.graph.nodes:
            raise DanglingEdgeError(f"edge {edge.src}->{edge.dst} references a missing node")
        self.transactions += 1
        if edge.sort_key() not in {e.sort_key() for e in self.graph.edges()}:
            self.graph.add_edge(edge)
            self.graph.freeze()

    # -- reads -------------------------------------------------------------

    def successors(self, uid: int, kind: str) -> list[int]:
        return self.graph.successors(uid, kind)

    def predecessors(self, uid: int, kind: str) -> list[int]:
        return self.graph.predecessors(uid, kind)

    def nodes_where(
        self, predicate_key: str, evaluator: Callable[[StatementNode], bool]
    ) -> list[int]:
        """Uids satisfying the evaluator, cached under the canonical key."""
        cache_key = f"{predicate_key}@{self.graph.version}"
        if self.cache_enabled:
            hit = self.cache.get(cache_key)
            if hit is not None:
                return hit
        self.evaluations += 1
        result = sorted(
            uid for uid, node in self.graph.nodes.items() if evaluator(node)
        )
        if self.cache_enabled:
            self.cache.put(cache_key, result)
        return result

    def stats(self) -> dict:
        nodes: dict[str, int] = {}
        for node in self.graph.nodes.values():
            nodes[node.kind] = nodes.get(node.kind, 0) + 1
        edges: dict[str, int] = {}
        for edge in self.graph.edges():
            edges[edge.kind] = edges.get(edge.kind, 0) + 1
        return {"nodes": dict(sorted(nodes.items())), "edges": dict(sorted(edges.items()))}

    def save(self, directory: str | Path) -> GraphSnapshot:
        return save(self.graph, directory)

    @classmethod
    def open(cls, directory: str | Path, **kwargs) -> "GraphStore":
        return cls(load(directory), **kwargs)
