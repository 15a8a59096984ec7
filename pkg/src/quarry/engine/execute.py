"""Query plan execution against a graph store.

Context bindings come from the store's cached predicate lookups;
filters narrow them; flow steps run the matching reachability analysis
and bind witnesses. Result rows enumerate every combination satisfying
all steps, ordered lexicographically by the selected uids.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from quarry.dsl.plan import (
    FLOW_KIND_TAINT,
    FLOW_KIND_UNRELEASED,
    FLOW_KIND_USAGE,
    FlowStep,
    QueryPlan,
    RAnd,
    RLeaf,
    RNot,
    ROr,
    SelectBinding,
    SelectConst,
    ptree_key,
)
from quarry.engine.memflow import MemFlowAnalyzer, MemPolicy
from quarry.engine.predicates import eval_ptree, node_in_context
from quarry.engine.taint import DEFAULT_DEPTH_CAP, FlowWitness, taint_reachability
from quarry.graph.model import CodeGraph
from quarry.store.store import GraphStore


@dataclass
class ResultRow:
    """One query result; values align with the plan's select list."""

    bindings: dict[str, object]
    values: list[object]

    def sort_token(self):
        token = []
        for value in self.values:
            if isinstance(value, FlowWitness):
                token.append((1, tuple(value.path)))
            elif isinstance(value, int):
                token.append((0, (value,)))
            else:
                token.append((2, (str(value),)))
        return token


def _as_store(target: GraphStore | CodeGraph) -> GraphStore:
    if isinstance(target, GraphStore):
        return target
    return GraphStore(target, cache_enabled=False)


def execute(
    plan: QueryPlan,
    target: GraphStore | CodeGraph,
    policy: MemPolicy | None = None,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    analyzer: MemFlowAnalyzer | None = None,
) -> list[ResultRow]:
    store = _as_store(target)
    graph = store.graph

    domains: dict[str, list[int]] = {}
    for ctx in plan.contexts:
        uids = store.nodes_where(
            f"type:{ctx.node_type}", lambda n, t=ctx.node_type: node_in_context(n, t)
        )
        domains[ctx.binding] = uids
    for step in plan.filters:
        key = "pred:" + ptree_key(step.tree)
        matching = set(
            store.nodes_where(key, lambda n, t=step.tree: eval_ptree(t, n.uid, graph))
        )
        domains[step.binding] = [u for u in domains[step.binding] if u in matching]

    # Flow evaluation: map each flow step to its witness pairs.
    flow_pairs: list[dict[tuple[int, int | None], FlowWitness]] = []
    mem: MemFlowAnalyzer | None = analyzer
    for step in plan.flows:
        if step.kind in (FLOW_KIND_USAGE, FLOW_KIND_UNRELEASED) and mem is None:
            mem = MemFlowAnalyzer(graph, policy)
        flow_pairs.append(_run_flow(step, domains, graph, mem, depth_cap))

    # Bindings referenced only as a flow barrier act as a node set and
    # do not multiply result rows.
    barrier_only = {f.barrier for f in plan.flows if f.barrier is not None}
    barrier_only -= {f.source for f in plan.flows}
    barrier_only -= {f.sink for f in plan.flows if f.sink is not None}
    barrier_only -= {
        item.name for item in plan.selects if isinstance(item, SelectBinding)
    }
    barrier_only -= _residual_bindings(plan)
    ordered_bindings = [c.binding for c in plan.contexts if c.binding not in barrier_only]
    flow_optional = _flows_in_residual(plan)

    # Conjunctive flow steps prune their endpoint domains up front.
    for index, step in enumerate(plan.flows):
        if index in flow_optional:
            continue
        pairs = flow_pairs[index]
        sources = {s for s, _ in pairs}
        domains[step.source] = [u for u in domains[step.source] if u in sources]
        if step.sink is not None:
            sinks = {t for _, t in pairs}
            domains[step.sink] = [u for u in domains[step.sink] if u in sinks]

    rows: list[ResultRow] = []
    value_lists = [domains[b] for b in ordered_bindings]
    for combo in product(*value_lists):
        env = dict(zip(ordered_bindings, combo))
        witnesses: dict[str, FlowWitness] = {}
        ok = True
        for index, step in enumerate(plan.flows):
            if index in flow_optional:
                continue
            witness = _flow_witness(step, flow_pairs[index], env)
            if witness is None:
                ok = False
                break
            witnesses[step.name] = witness
        if not ok:
            continue
        if plan.residual is not None and not _eval_residual(
            plan.residual, env, witnesses, plan, flow_pairs, graph
        ):
            continue
        values: list[object] = []
        bindings: dict[str, object] = dict(env)
        bindings.update(witnesses)
        for item in plan.selects:
            if isinstance(item, SelectConst):
                values.append(item.value)
            else:
                assert isinstance(item, SelectBinding)
                values.append(bindings[item.name])
        rows.append(ResultRow(bindings, values))
    rows.sort(key=ResultRow.sort_token)
    return rows


def _flows_in_residual(plan: QueryPlan) -> set[int]:
    found: set[int] = set()

    def visit(node) -> None:
        if isinstance(node, RLeaf):
            if node.kind == "flow":
                found.add(node.flow_index)
        elif isinstance(node, RNot):
            visit(node.operand)
        elif isinstance(node, (RAnd, ROr)):
            visit(node.left)
            visit(node.right)

    if plan.residual is not None:
        visit(plan.residual)
    return found


def _residual_bindings(plan: QueryPlan) -> set[str]:
    names: set[str] = set()

    def visit(node) -> None:
        if isinstance(node, RLeaf):
            if node.kind == "filter":
                names.add(node.binding)
        elif isinstance(node, RNot):
            visit(node.operand)
        elif isinstance(node, (RAnd, ROr)):
            visit(node.left)
            visit(node.right)

    if plan.residual is not None:
        visit(plan.residual)
    return names


def _run_flow(
    step: FlowStep,
    domains: dict[str, list[int]],
    graph: CodeGraph,
    mem: MemFlowAnalyzer | None,
    depth_cap: int,
) -> dict[tuple[int, int | None], FlowWitness]:
    sources = set(domains[step.source])
    sinks = set(domains[step.sink]) if step.sink is not None else None
    pairs: dict[tuple[int, int | None], FlowWitness] = {}
    if step.kind == FLOW_KIND_TAINT:
        barrier = None
        if step.barrier is not None:
            barrier_set = set(domains[step.barrier])
            barrier = barrier_set.__contains__
        assert sinks is not None
        for witness in taint_reachability(sources, sinks, barrier, graph, depth_cap):
            pairs[(witness.source, witness.sink)] = witness
    elif step.kind == FLOW_KIND_USAGE:
        assert mem is not None and sinks is not None
        for pair in mem.usage_pairs(sorted(sources), sinks=sinks):
            kinds = ["CFG"] * (len(pair.path) - 1)
            pairs[(pair.source, pair.sink)] = FlowWitness(pair.path, kinds, True)
    elif step.kind == FLOW_KIND_UNRELEASED:
        assert mem is not None
        for report in mem.leak_reports(sorted(sources)):
            kinds = ["CFG"] * (len(report.path) - 1)
            pairs[(report.alloc, None)] = FlowWitness(report.path, kinds, True)
    return pairs


def _flow_witness(
    step: FlowStep,
    pairs: dict[tuple[int, int | None], FlowWitness],
    env: dict[str, int],
) -> FlowWitness | None:
    sink_value = env[step.sink] if step.sink is not None else None
    return pairs.get((env[step.source], sink_value))


def _eval_residual(node, env, witnesses, plan, flow_pairs, graph) -> bool:
    if isinstance(node, RLeaf):
        if node.kind == "filter":
            return eval_ptree(node.tree, env[node.binding], graph)
        step = plan.flows[node.flow_index]
        witness = _flow_witness(step, flow_pairs[node.flow_index], env)
        if witness is not None:
            witnesses.setdefault(step.name, witness)
            return True
        return False
    if isinstance(node, RNot):
        return not _eval_residual(node.operand, env, witnesses, plan, flow_pairs, graph)
    if isinstance(node, RAnd):
        return _eval_residual(
            node.left, env, witnesses, plan, flow_pairs, graph
        ) and _eval_residual(node.right, env, witnesses, plan, flow_pairs, graph)
    if isinstance(node, ROr):
        return _eval_residual(
            node.left, env, witnesses, plan, flow_pairs, graph
        ) or _eval_residual(node.right, env, witnesses, plan, flow_pairs, graph)
    raise TypeError(f"not a residual tree: {node!r}")
