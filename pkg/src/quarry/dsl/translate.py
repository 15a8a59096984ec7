"""Translate a parsed query into an executable QueryPlan.

Node predicate chains normalize to a fixed vocabulary (for example
`x.getFunction().equals("f")` becomes ContainsFunctionCall("f"), the
same filter the fluent builder uses), and each flow chain becomes one
FlowStep regardless of the order its builder methods appear in. Type
errors (flow methods on node bindings and vice versa) are caught here.
"""

from __future__ import annotations

from quarry.errors import QueryTypeError, UnboundNameError
from quarry.dsl.ast import (
    AndExpr,
    BindingRef,
    NotExpr,
    OrExpr,
    PredLeaf,
    Predicate,
    QueryAst,
    SelectLiteral,
    SelectName,
)
from quarry.dsl.plan import (
    ContextStep,
    FilterStep,
    FLOW_KIND_TAINT,
    FLOW_KIND_UNRELEASED,
    FLOW_KINDS,
    FlowStep,
    NodePredicate,
    PAnd,
    PLeaf,
    PNot,
    POr,
    PTree,
    QueryPlan,
    RAnd,
    RLeaf,
    RNot,
    ROr,
    RTree,
    SelectBinding,
    SelectConst,
)

_DIRECT_NODE_METHODS = {
    "equals": ("CodeEquals", (str,)),
    "contains": ("CodeContains", (str,)),
    "matchesRegex": ("CodeMatches", (str,)),
    "inFile": ("InFile", (str,)),
    "lineBetween": ("LineBetween", (int, int)),
    "ContainsFunctionCall": ("ContainsFunctionCall", (str,)),
    "FunctionContains": ("FunctionContains", (str,)),
    "FunctionMatches": ("FunctionMatches", (str,)),
    "CodeEquals": ("CodeEquals", (str,)),
    "CodeContains": ("CodeContains", (str,)),
    "CodeMatches": ("CodeMatches", (str,)),
    "InFile": ("InFile", (str,)),
    "LineBetween": ("LineBetween", (int, int)),
}

_AFTER_GET_FUNCTION = {
    "equals": "ContainsFunctionCall",
    "contains": "FunctionContains",
    "matchesRegex": "FunctionMatches",
}

_FLOW_METHODS = ("source", "sink", "barrier", "exists", "as", "kind")


def _check_args(method: str, args: tuple, shapes: tuple) -> None:
    if len(args) != len(shapes) or any(
        not isinstance(a, shape) for a, shape in zip(args, shapes)
    ):
        raise QueryTypeError(f"bad arguments for {method}()")


def _normalize_node_chain(pred: Predicate) -> NodePredicate:
    chain = pred.chain
    if any(c.name in _FLOW_METHODS for c in chain):
        bad = next(c.name for c in chain if c.name in _FLOW_METHODS)
        raise QueryTypeError(
            f"flow method .{bad}() applied to node binding {pred.receiver!r}"
        )
    if chain[0].name == "getFunction":
        if chain[0].args:
            raise QueryTypeError("getFunction() takes no arguments")
        if len(chain) != 2 or chain[1].name not in _AFTER_GET_FUNCTION:
            raise QueryTypeError(
                "getFunction() must be followed by equals/contains/matchesRegex"
            )
        method = _AFTER_GET_FUNCTION[chain[1].name]
        _check_args(chain[1].name, chain[1].args, (str,))
        return NodePredicate(method, chain[1].args)
    if len(chain) != 1:
        raise QueryTypeError(f"unsupported predicate chain on {pred.receiver!r}")
    call = chain[0]
    if call.name not in _DIRECT_NODE_METHODS:
        raise QueryTypeError(f"unknown node predicate .{call.name}()")
    method, shapes = _DIRECT_NODE_METHODS[call.name]
    _check_args(call.name, call.args, shapes)
    return NodePredicate(method, call.args)


def _normalize_flow_chain(pred: Predicate, node_bindings: set[str]) -> FlowStep:
    source = sink = barrier = None
    name = pred.receiver
    kind = FLOW_KIND_TAINT
    closed = False
    for call in pred.chain:
        if closed:
            raise QueryTypeError("no methods may follow .exists()")
        if call.name in ("source", "sink", "barrier"):
            if len(call.args) != 1 or not isinstance(call.args[0], BindingRef):
                raise QueryTypeError(f".{call.name}() takes one binding")
            ref = call.args[0].name
            if ref not in node_bindings:
                raise QueryTypeError(
                    f".{call.name}({ref}) must reference a node binding"
                )
            if call.name == "source":
                if source is not None:
                    raise QueryTypeError("duplicate .source()")
                source = ref
            elif call.name == "sink":
                if sink is not None:
                    raise QueryTypeError("duplicate .sink()")
                sink = ref
            else:
                if barrier is not None:
                    raise QueryTypeError("duplicate .barrier()")
                barrier = ref
        elif call.name == "kind":
            _check_args("kind", call.args, (str,))
            if call.args[0] not in FLOW_KINDS:
                raise QueryTypeError(f"unknown flow kind {call.args[0]!r}")
            kind = call.args[0]
        elif call.name == "as":
            _check_args("as", call.args, (str,))
            name = call.args[0]
        elif call.name == "exists":
            if call.args:
                raise QueryTypeError("exists() takes no arguments")
            closed = True
        else:
            raise QueryTypeError(
                f"node predicate .{call.name}() applied to flow binding {pred.receiver!r}"
            )
    if not closed:
        raise QueryTypeError("flow predicate chain must end in .exists()")
    if source is None:
        raise QueryTypeError("flow predicate needs a .source()")
    if kind == FLOW_KIND_UNRELEASED:
        if sink is not None:
            raise QueryTypeError("unreleased flows take no .sink()")
    elif sink is None:
        raise QueryTypeError(f"{kind} flows need a .sink()")
    if barrier is not None and kind != FLOW_KIND_TAINT:
        raise QueryTypeError(".barrier() applies to taint flows only")
    return FlowStep(source=source, sink=sink, barrier=barrier, name=name, kind=kind)


def _conjuncts(expr) -> list:
    if isinstance(expr, AndExpr):
        return _conjuncts(expr.left) + _conjuncts(expr.right)
    return [expr]


def _single_binding(expr) -> str | None:
    """The one receiver a subtree touches, or None if mixed/flow."""
    names = set()

    def visit(node) -> bool:
        if isinstance(node, PredLeaf):
            names.add(node.predicate.receiver)
            return True
        if isinstance(node, NotExpr):
            return visit(node.operand)
        if isinstance(node, (AndExpr, OrExpr)):
            return visit(node.left) and visit(node.right)
        return False

    if not visit(expr):
        return None
    return names.pop() if len(names) == 1 else None


def translate(ast: QueryAst) -> QueryPlan:
    flow_bindings = {d.name for d in ast.decls if d.type_name == "TaintFlow"}
    node_bindings = {d.name for d in ast.decls if d.type_name != "TaintFlow"}

    contexts = tuple(
        ContextStep(d.name, d.type_name) for d in ast.decls if d.type_name != "TaintFlow"
    )
    filters: list[FilterStep] = []
    flows: list[FlowStep] = []
    residual_parts: list[RTree] = []

    def to_ptree(expr, binding: str) -> PTree:
        if isinstance(expr, PredLeaf):
            return PLeaf(_normalize_node_chain(expr.predicate))
        if isinstance(expr, NotExpr):
            return PNot(to_ptree(expr.operand, binding))
        if isinstance(expr, AndExpr):
            return PAnd(to_ptree(expr.left, binding), to_ptree(expr.right, binding))
        return POr(to_ptree(expr.left, binding), to_ptree(expr.right, binding))

    def flow_index_for(pred: Predicate) -> int:
        step = _normalize_flow_chain(pred, node_bindings)
        flows.append(step)
        return len(flows) - 1

    def to_rtree(expr) -> RTree:
        if isinstance(expr, PredLeaf):
            pred = expr.predicate
            if pred.receiver in flow_bindings:
                return RLeaf("flow", flow_index=flow_index_for(pred))
            return RLeaf(
                "filter",
                binding=pred.receiver,
                tree=PLeaf(_normalize_node_chain(pred)),
            )
        if isinstance(expr, NotExpr):
            return RNot(to_rtree(expr.operand))
        if isinstance(expr, AndExpr):
            return RAnd(to_rtree(expr.left), to_rtree(expr.right))
        return ROr(to_rtree(expr.left), to_rtree(expr.right))

    if ast.where is not None:
        for conjunct in _conjuncts(ast.where):
            if isinstance(conjunct, PredLeaf) and conjunct.predicate.receiver in flow_bindings:
                flows.append(_normalize_flow_chain(conjunct.predicate, node_bindings))
                continue
            binding = _single_binding(conjunct)
            if binding is not None and binding not in flow_bindings:
                filters.append(FilterStep(binding, to_ptree(conjunct, binding)))
                continue
            residual_parts.append(to_rtree(conjunct))

    residual: RTree | None = None
    for part in residual_parts:
        residual = part if residual is None else RAnd(residual, part)

    flow_names = {f.name for f in flows}
    negated_only = _negated_flow_names(residual, flows) if residual is not None else set()
    selects: list = []
    for item in ast.selects:
        if isinstance(item, SelectLiteral):
            selects.append(SelectConst(item.value))
            continue
        assert isinstance(item, SelectName)
        if item.name in node_bindings:
            selects.append(SelectBinding(item.name))
        elif item.name in flow_names:
            if item.name in negated_only:
                raise QueryTypeError(
                    f"cannot select flow {item.name!r}: it only appears negated"
                )
            selects.append(SelectBinding(item.name))
        elif item.name in flow_bindings:
            raise UnboundNameError(
                f"flow binding {item.name!r} has no predicate and cannot be selected"
            )
        else:
            raise UnboundNameError(f"unbound select name {item.name!r}")

    return QueryPlan(
        contexts=contexts,
        filters=tuple(filters),
        flows=tuple(flows),
        selects=tuple(selects),
        residual=residual,
    )


def _negated_flow_names(residual: RTree, flows) -> set[str]:
    positive: set[int] = set()
    negative: set[int] = set()

    def visit(node, negated: bool) -> None:
        if isinstance(node, RLeaf):
            if node.kind == "flow":
                (negative if negated else positive).add(node.flow_index)
        elif isinstance(node, RNot):
            visit(node.operand, not negated)
        elif isinstance(node, (RAnd, ROr)):
            visit(node.left, negated)
            visit(node.right, negated)

    visit(residual, False)
    return {flows[i].name for i in negative - positive}
