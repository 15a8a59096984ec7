"""Taint reachability over the data-flow and call edges.

The search is data-flow first: a breadth-first walk over value-carrying
DFG edges and CG edges from each source, refusing to travel through
barrier nodes (endpoints may still be barriers), cycle-free by
construction and capped in depth. Declaration-anchor DFG edges are
skipped — they exist for backward resolution and would carry data past
the assignment that overwrote it. Control flow then validates the
endpoints: inside one function the sink must be CFG-reachable from the
source; across functions the call edges on the path are the connection.

One shortest witness is reported per (source, sink) pair,
deterministically (ties broken by uid order).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from quarry.engine.valueflow import ValueFlow
from quarry.graph.model import CFG, CG, DFG, CodeGraph

DEFAULT_DEPTH_CAP = 512

Barrier = Callable[[int], bool]


@dataclass
class FlowWitness:
    path: list[int]
    kinds: list[str]  # per-hop edge kinds, len(path) - 1
    barrier_checked: bool

    @property
    def source(self) -> int:
        return self.path[0]

    @property
    def sink(self) -> int:
        return self.path[-1]

    def validate(self, graph: CodeGraph, barrier: Barrier | None = None) -> None:
        """Re-check the witness invariants against the graph."""
        assert len(self.kinds) == len(self.path) - 1
        assert len(set(self.path)) == len(self.path)
        for (a, b), kind in zip(zip(self.path, self.path[1:]), self.kinds):
            assert any(
                e.dst == b for e in graph.out_edges(a, kind)
            ), f"no {kind} edge {a}->{b}"
        if self.barrier_checked and barrier is not None:
            assert not any(barrier(uid) for uid in self.path[1:-1])


class Reachability:
    """Cached CFG reachability; one BFS per queried start node."""

    def __init__(self, graph: CodeGraph):
        self.graph = graph
        self._reach: dict[int, set[int]] = {}

    def reachable_set(self, start: int) -> set[int]:
        cached = self._reach.get(start)
        if cached is not None:
            return cached
        seen: set[int] = set()
        stack = [e.dst for e in self.graph.out_edges(start, CFG)]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(e.dst for e in self.graph.out_edges(cur, CFG))
        self._reach[start] = seen
        return seen

    def reaches(self, src: int, dst: int) -> bool:
        return dst in self.reachable_set(src)


def taint_reachability(
    sources: Iterable[int],
    sinks: Iterable[int],
    barrier: Barrier | None,
    graph: CodeGraph,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    reach: Reachability | None = None,
    value_flow: ValueFlow | None = None,
) -> list[FlowWitness]:
    sources = sorted(set(sources))
    sink_set = set(sinks)
    if not sources or not sink_set:
        return []
    reach = reach or Reachability(graph)
    value_flow = value_flow or ValueFlow(graph)
    witnesses: list[FlowWitness] = []
    for source in sources:
        parents: dict[int, tuple[int, str] | None] = {source: None}
        depth = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for uid in sorted(frontier):
                if depth[uid] >= depth_cap:
                    continue
                if uid != source and barrier is not None and barrier(uid):
                    continue
                for kind in (DFG, CG):
                    for edge in graph.out_edges(uid, kind):
                        if kind == DFG and not value_flow.is_value_edge(edge):
                            continue
                        if edge.dst not in parents:
                            parents[edge.dst] = (uid, kind)
                            depth[edge.dst] = depth[uid] + 1
                            nxt.append(edge.dst)
            frontier = nxt
        src_fn = graph.nodes[source].fn
        for sink in sorted(sink_set):
            if sink not in parents:
                continue
            if sink != source and graph.nodes[sink].fn == src_fn:
                if not reach.reaches(source, sink):
                    continue
            path = [sink]
            kinds: list[str] = []
            cursor = sink
            while (link := parents[cursor]) is not None:
                cursor, kind = link
                path.append(cursor)
                kinds.append(kind)
            path.reverse()
            kinds.reverse()
            witnesses.append(FlowWitness(path, kinds, barrier is not None))
    return witnesses
