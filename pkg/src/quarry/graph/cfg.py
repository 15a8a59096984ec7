"""Statement-level control flow graph construction.

Edges out of a predicate carry a true/false branch label; while loops
get a back edge from the last body statement to the predicate; return
statements jump straight to the synthetic Exit node.
"""

from __future__ import annotations

from quarry.frontend.lowering import IfItem, LoweredFunction, RetItem, StmtItem, WhileItem
from quarry.graph.model import CFG, FlowEdge

# A pending predecessor: (uid, branch label to put on the outgoing edge).
_Pred = tuple[int, bool | None]


def build_cfg(fn: LoweredFunction) -> list[FlowEdge]:
    info = fn.info
    edges: list[FlowEdge] = []

    def link(preds: list[_Pred], dst: int) -> None:
        for src, branch in preds:
            edges.append(FlowEdge(src, dst, CFG, branch=branch))

    def walk(items: list, preds: list[_Pred]) -> list[_Pred]:
        for item in items:
            if isinstance(item, StmtItem):
                link(preds, item.uid)
                preds = [(item.uid, None)]
            elif isinstance(item, RetItem):
                link(preds, item.uid)
                edges.append(FlowEdge(item.uid, info.exit_uid, CFG))
                preds = []
            elif isinstance(item, IfItem):
                link(preds, item.pred_uid)
                then_out = walk(item.then_body, [(item.pred_uid, True)])
                if item.else_body:
                    else_out = walk(item.else_body, [(item.pred_uid, False)])
                else:
                    else_out = [(item.pred_uid, False)]
                preds = then_out + else_out
            elif isinstance(item, WhileItem):
                link(preds, item.pred_uid)
                body_out = walk(item.body, [(item.pred_uid, True)])
                link(body_out, item.pred_uid)  # loop back edges
                preds = [(item.pred_uid, False)]
            else:  # pragma: no cover - lowering emits only the four kinds
                raise TypeError(f"unknown structure item {item!r}")
        return preds

    preds: list[_Pred] = []
    for uid in (info.entry_uid, info.fndecl_uid, *info.param_uids):
        link(preds, uid)
        preds = [(uid, None)]
    preds = walk(fn.body, preds)
    link(preds, info.exit_uid)
    return edges
