"""Cross-function edges: call graph plus parameter/return data flow."""

from __future__ import annotations

from quarry.frontend.lowering import RETURN_SLOT, FunctionInfo
from quarry.graph.model import CG, DFG, CodeGraph, FlowEdge, find_calls, idents_in


def build_cg(graph: CodeGraph, fn_table: dict[str, FunctionInfo]) -> list[FlowEdge]:
    """Connect call sites to defined callees.

    Per resolved call: a CG edge from the call site to the callee's
    Entry node, DFG edges from each argument's definition sites to the
    matching parameter declaration, and a DFG edge from every
    value-returning statement of the callee back to the call site.
    `graph` must already hold the intraprocedural DFG so argument
    definition sites can be looked up. Unresolved callees produce no
    edges and are counted by the caller.
    """
    edges: list[FlowEdge] = []
    seen: set[tuple] = set()

    def add(edge: FlowEdge) -> None:
        key = edge.sort_key()
        if key not in seen:
            seen.add(key)
            edges.append(edge)

    for uid in sorted(graph.nodes):
        node = graph.nodes[uid]
        if not node.callees:
            continue
        for callee in node.callees:
            info = fn_table.get(callee)
            if info is None:
                continue
            add(FlowEdge(uid, info.entry_uid, CG))
            for call_ast in find_calls(node.ast, callee):
                args = call_ast.get("children", [])[1:]
                for i, arg in enumerate(args):
                    if i >= len(info.param_uids):
                        break
                    param_uid = info.param_uids[i]
                    for var in idents_in(arg):
                        for e in graph.in_edges(uid, DFG):
                            if e.var == var:
                                add(FlowEdge(e.def_site, param_uid, DFG, var=var, def_site=e.def_site))
            for ret_uid in info.return_uids:
                ret = graph.nodes.get(ret_uid)
                if ret is not None and RETURN_SLOT in ret.defs:
                    add(FlowEdge(ret_uid, uid, DFG, var=RETURN_SLOT, def_site=ret_uid))
    return edges
