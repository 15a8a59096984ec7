from quarry.graph.model import CFG, CG, DFG, AliasSet, CodeGraph, FlowEdge, StatementNode, graph_equal
from quarry.graph.cfg import build_cfg
from quarry.graph.dfg import build_dfg
from quarry.graph.callgraph import build_cg
from quarry.graph.extract import ExtractConfig, extract

__all__ = [
    "CFG",
    "CG",
    "DFG",
    "AliasSet",
    "CodeGraph",
    "FlowEdge",
    "StatementNode",
    "graph_equal",
    "build_cfg",
    "build_dfg",
    "build_cg",
    "ExtractConfig",
    "extract",
]
