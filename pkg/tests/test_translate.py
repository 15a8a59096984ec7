from __future__ import annotations

import pytest

from quarry.errors import QueryTypeError, UnboundNameError
from quarry.dsl.parser import parse_query
from quarry.dsl.plan import (
    ContextStep,
    FilterStep,
    FlowStep,
    NodePredicate,
    PLeaf,
    QueryPlan,
    SelectBinding,
)
from quarry.dsl.translate import translate

INJECTION_QUERY = """\
from Call a, Call b, TaintFlow flow
where
  a.getFunction().equals("input") and
  b.getFunction().equals("exec") and
  flow.source(a).sink(b).exists()
select a, b, flow
"""

# Hand-encoded fluent-builder chain the translation must match:
#   open().from("a", Call).from("b", Call)
#         .where(onTable("a"), ContainsFunctionCall("input"))
#         .where(onTable("b"), ContainsFunctionCall("exec"))
#         .where(TaintFlowPredicate.with().source("a").sink("b").as("flow").exists())
#         .select("a", "b", "flow")
FLUENT_CHAIN_PLAN = QueryPlan(
    contexts=(ContextStep("a", "Call"), ContextStep("b", "Call")),
    filters=(
        FilterStep("a", PLeaf(NodePredicate("ContainsFunctionCall", ("input",)))),
        FilterStep("b", PLeaf(NodePredicate("ContainsFunctionCall", ("exec",)))),
    ),
    flows=(FlowStep(source="a", sink="b", barrier=None, name="flow", kind="taint"),),
    selects=(SelectBinding("a"), SelectBinding("b"), SelectBinding("flow")),
    residual=None,
)


def test_injection_golden_plan():
    assert translate(parse_query(INJECTION_QUERY)) == FLUENT_CHAIN_PLAN


def test_select_only_plan():
    plan = translate(parse_query("from Call a select a"))
    assert plan == QueryPlan(
        contexts=(ContextStep("a", "Call"),),
        selects=(SelectBinding("a"),),
    )


def test_builder_order_insensitive():
    reordered = INJECTION_QUERY.replace(
        "flow.source(a).sink(b).exists()", "flow.sink(b).source(a).exists()"
    )
    assert translate(parse_query(reordered)) == FLUENT_CHAIN_PLAN


def test_as_renames_flow():
    renamed = INJECTION_QUERY.replace(
        "flow.source(a).sink(b).exists()", 'flow.source(a).sink(b).as("w").exists()'
    ).replace("select a, b, flow", "select a, b")
    plan = translate(parse_query(renamed))
    assert plan.flows[0].name == "w"


def test_ctor_decl_equivalent_to_where_filter():
    sugar = translate(parse_query('from ContainsFunctionCall("malloc") m select m'))
    spelled = translate(
        parse_query('from Call m where m.getFunction().equals("malloc") select m')
    )
    assert sugar == spelled


def test_source_on_call_binding_is_type_error():
    with pytest.raises(QueryTypeError):
        translate(parse_query("from Call a, Call b where a.source(b).exists() select a"))


def test_node_method_on_flow_binding_is_type_error():
    with pytest.raises(QueryTypeError):
        translate(
            parse_query('from Call a, TaintFlow t where t.contains("x") select a')
        )


def test_flow_chain_requires_exists():
    with pytest.raises(QueryTypeError):
        translate(
            parse_query("from Call a, Call b, TaintFlow t where t.source(a).sink(b) select a")
        )


def test_flow_requires_source():
    with pytest.raises(QueryTypeError):
        translate(parse_query("from Call b, TaintFlow t where t.sink(b).exists() select b"))


def test_unreleased_flow_takes_no_sink():
    plan = translate(
        parse_query(
            'from Call a, TaintFlow t where t.kind("unreleased").source(a).exists() select a, t'
        )
    )
    assert plan.flows[0].kind == "unreleased"
    assert plan.flows[0].sink is None
    with pytest.raises(QueryTypeError):
        translate(
            parse_query(
                "from Call a, Call b, TaintFlow t "
                'where t.kind("unreleased").source(a).sink(b).exists() select a'
            )
        )


def test_unknown_flow_kind():
    with pytest.raises(QueryTypeError):
        translate(
            parse_query(
                'from Call a, Call b, TaintFlow t where t.kind("mystery").source(a).sink(b).exists() select a'
            )
        )


def test_selecting_unconstrained_flow_binding():
    with pytest.raises(UnboundNameError):
        translate(parse_query("from Call a, TaintFlow t select t"))


def test_selecting_negated_flow():
    with pytest.raises(QueryTypeError):
        translate(
            parse_query(
                "from Call a, Call b, TaintFlow t "
                "where not t.source(a).sink(b).exists() select t"
            )
        )


def test_single_binding_disjunction_becomes_filter():
    plan = translate(
        parse_query(
            'from Call a where a.getFunction().equals("malloc") '
            'or a.getFunction().equals("calloc") select a'
        )
    )
    assert len(plan.filters) == 1
    assert plan.residual is None


def test_cross_binding_disjunction_goes_residual():
    plan = translate(
        parse_query(
            'from Call a, Call b where a.inFile("x.c") or b.inFile("y.c") select a, b'
        )
    )
    assert plan.filters == ()
    assert plan.residual is not None


def test_lineBetween_arg_types():
    with pytest.raises(QueryTypeError):
        translate(parse_query('from Call a where a.lineBetween("x", 3) select a'))


def test_every_plan_step_references_declared_bindings():
    import random

    from test_dsl_print import random_query

    rng = random.Random(7)
    checked = 0
    for _ in range(400):
        ast = random_query(rng)
        declared = ast.declared_names()
        try:
            plan = translate(ast)
        except (QueryTypeError, UnboundNameError):
            continue
        checked += 1
        for ctx in plan.contexts:
            assert ctx.binding in declared
        for step in plan.filters:
            assert step.binding in declared
        for flow in plan.flows:
            assert flow.source in declared
            assert flow.sink is None or flow.sink in declared
            assert flow.barrier is None or flow.barrier in declared
    assert checked > 150
