"""Classification of DFG edges into value flow vs declaration anchors.

The graph stores two data-flow flavors: def-to-use edges from reaching
definitions, and declaration-to-use anchors that survive kills so any
occurrence can be traced back to its declaration. Taint traversal must
follow only the first flavor (an anchor would smuggle data past the
assignment that overwrote it), so edges are re-classified here from the
persisted statement facts: an intra-function DFG edge carries a value
exactly when the definition at its source still reaches its target.
Cross-function and module-scope edges (parameter, return, and global
links) always carry values.
"""

from __future__ import annotations

from collections import defaultdict

from quarry.graph.model import CFG, CodeGraph, FlowEdge


class ValueFlow:
    def __init__(self, graph: CodeGraph):
        self.graph = graph
        self._per_fn: dict[str, set[tuple[int, int, str]]] = {}

    def is_value_edge(self, edge: FlowEdge) -> bool:
        src_fn = self.graph.nodes[edge.src].fn
        dst_fn = self.graph.nodes[edge.dst].fn
        if src_fn != dst_fn or src_fn == "":
            return True
        if src_fn not in self._per_fn:
            self._per_fn[src_fn] = self._reaching_edges(src_fn)
        return (edge.src, edge.dst, edge.var) in self._per_fn[src_fn]

    def _reaching_edges(self, fn: str) -> set[tuple[int, int, str]]:
        uids = self.graph.fn_nodes(fn)
        nodes = self.graph.nodes
        succ: dict[int, list[int]] = defaultdict(list)
        pred: dict[int, list[int]] = defaultdict(list)
        for uid in uids:
            for e in self.graph.out_edges(uid, CFG):
                succ[uid].append(e.dst)
                pred[e.dst].append(uid)

        def transfer(inset: dict[str, frozenset[int]], uid: int):
            out = dict(inset)
            for var in nodes[uid].defs:
                out[var] = frozenset((uid,))
            return out

        in_sets: dict[int, dict[str, frozenset[int]]] = {u: {} for u in uids}
        out_sets = {u: transfer({}, u) for u in uids}
        worklist = sorted(uids)
        while worklist:
            uid = worklist.pop(0)
            merged: dict[str, set[int]] = defaultdict(set)
            for p in pred.get(uid, ()):
                for var, defs in out_sets[p].items():
                    merged[var] |= defs
            new_in = {var: frozenset(defs) for var, defs in merged.items()}
            if new_in != in_sets[uid]:
                in_sets[uid] = new_in
                out_sets[uid] = transfer(new_in, uid)
                for s in succ.get(uid, ()):
                    if s not in worklist:
                        worklist.append(s)

        value: set[tuple[int, int, str]] = set()
        for uid in uids:
            for var in nodes[uid].uses:
                for d in in_sets[uid].get(var, ()):
                    value.add((d, uid, var))
        return value
