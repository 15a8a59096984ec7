"""Node predicate evaluation against graph nodes."""

from __future__ import annotations

import re

from quarry.errors import QueryTypeError
from quarry.dsl.plan import NodePredicate, PAnd, PLeaf, PNot, POr, PTree
from quarry.graph.model import CodeGraph

NODE_TYPE_KINDS = {
    # Statement/Expression bindings cover executable statements; Call
    # narrows to those that invoke something.
    "Statement": ("plain", "predicate"),
    "Expression": ("plain", "predicate"),
    "Call": ("plain", "predicate"),
}


def node_in_context(node, node_type: str) -> bool:
    if node_type not in NODE_TYPE_KINDS:
        raise QueryTypeError(f"unknown binding type {node_type!r}")
    if node.kind not in NODE_TYPE_KINDS[node_type]:
        return False
    if node_type == "Call":
        return bool(node.callees)
    return True


def eval_node_predicate(pred: NodePredicate, uid: int, graph: CodeGraph) -> bool:
    node = graph.require(uid)
    method, args = pred.method, pred.args
    if method == "ContainsFunctionCall":
        return args[0] in node.callees
    if method == "FunctionContains":
        return any(args[0] in callee for callee in node.callees)
    if method == "FunctionMatches":
        return any(re.search(args[0], callee) for callee in node.callees)
    if method == "CodeEquals":
        return node.code == args[0]
    if method == "CodeContains":
        return args[0] in node.code
    if method == "CodeMatches":
        return re.search(args[0], node.code) is not None
    if method == "InFile":
        return node.file == args[0] or node.file.endswith("/" + args[0])
    if method == "LineBetween":
        return args[0] <= node.line <= args[1]
    raise QueryTypeError(f"unknown node predicate {method!r}")


def eval_ptree(tree: PTree, uid: int, graph: CodeGraph) -> bool:
    if isinstance(tree, PLeaf):
        return eval_node_predicate(tree.predicate, uid, graph)
    if isinstance(tree, PNot):
        return not eval_ptree(tree.operand, uid, graph)
    if isinstance(tree, PAnd):
        return eval_ptree(tree.left, uid, graph) and eval_ptree(tree.right, uid, graph)
    if isinstance(tree, POr):
        return eval_ptree(tree.left, uid, graph) or eval_ptree(tree.right, uid, graph)
    raise TypeError(f"not a predicate tree: {tree!r}")
