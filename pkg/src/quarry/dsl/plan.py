"""Executable query plan: context bindings, filters, flows, projection.

Filter trees reference one binding each; anything genuinely spanning
bindings (or a disjunction mixing them) lands in the residual tree and
is evaluated per result combination. Steps are topologically ordered:
contexts first, then filters, then flows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

FLOW_KIND_TAINT = "taint"  # data reaches a sink over DFG/CG, CFG-validated
FLOW_KIND_USAGE = "usage"  # same storage touched again along control flow
FLOW_KIND_UNRELEASED = "unreleased"  # storage never released on some path
FLOW_KINDS = (FLOW_KIND_TAINT, FLOW_KIND_USAGE, FLOW_KIND_UNRELEASED)


@dataclass(frozen=True)
class NodePredicate:
    method: str
    args: tuple = ()


@dataclass(frozen=True)
class PLeaf:
    predicate: NodePredicate


@dataclass(frozen=True)
class PNot:
    operand: "PTree"


@dataclass(frozen=True)
class PAnd:
    left: "PTree"
    right: "PTree"


@dataclass(frozen=True)
class POr:
    left: "PTree"
    right: "PTree"


PTree = Union[PLeaf, PNot, PAnd, POr]


def ptree_key(tree: PTree) -> str:
    """Canonical text of a predicate tree, used as the cache key."""
    if isinstance(tree, PLeaf):
        args = ",".join(repr(a) for a in tree.predicate.args)
        return f"{tree.predicate.method}({args})"
    if isinstance(tree, PNot):
        return f"not({ptree_key(tree.operand)})"
    if isinstance(tree, PAnd):
        return f"and({ptree_key(tree.left)},{ptree_key(tree.right)})"
    return f"or({ptree_key(tree.left)},{ptree_key(tree.right)})"


@dataclass(frozen=True)
class ContextStep:
    binding: str
    node_type: str  # Call | Statement | Expression


@dataclass(frozen=True)
class FilterStep:
    binding: str
    tree: PTree


@dataclass(frozen=True)
class FlowStep:
    source: str
    sink: str | None
    barrier: str | None
    name: str
    kind: str = FLOW_KIND_TAINT


# Residual leaves are either ("filter", binding, PTree) or ("flow", index
# into plan.flows); inner nodes mirror the boolean connectives.


@dataclass(frozen=True)
class RLeaf:
    kind: str  # "filter" | "flow"
    binding: str | None = None
    tree: PTree | None = None
    flow_index: int | None = None


@dataclass(frozen=True)
class RNot:
    operand: "RTree"


@dataclass(frozen=True)
class RAnd:
    left: "RTree"
    right: "RTree"


@dataclass(frozen=True)
class ROr:
    left: "RTree"
    right: "RTree"


RTree = Union[RLeaf, RNot, RAnd, ROr]


@dataclass(frozen=True)
class SelectBinding:
    name: str


@dataclass(frozen=True)
class SelectConst:
    value: str


@dataclass(frozen=True)
class QueryPlan:
    contexts: tuple[ContextStep, ...]
    filters: tuple[FilterStep, ...] = ()
    flows: tuple[FlowStep, ...] = ()
    selects: tuple = ()
    residual: RTree | None = None
