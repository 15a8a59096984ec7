"""parse/print round-trip, including a seeded fuzzer over the grammar."""

from __future__ import annotations

import random

from quarry.dsl.ast import (
    AndExpr,
    BindingRef,
    Decl,
    MethodCall,
    NotExpr,
    OrExpr,
    PredLeaf,
    Predicate,
    QueryAst,
    SelectLiteral,
    SelectName,
)
from quarry.dsl.parser import parse_query
from quarry.dsl.printer import format_query

NODE_TYPES = ("Call", "Statement", "Expression")
STRINGS = ("input", "exec", "free\\(", 'he said "hi"', "a\nb", "path/to/file.c", "")


def _random_node_predicate(rng: random.Random, binding: str) -> Predicate:
    choice = rng.randrange(7)
    arg = rng.choice(STRINGS)
    if choice == 0:
        chain = (MethodCall("getFunction"), MethodCall("equals", (arg,)))
    elif choice == 1:
        chain = (MethodCall("getFunction"), MethodCall("contains", (arg,)))
    elif choice == 2:
        chain = (MethodCall("getFunction"), MethodCall("matchesRegex", (arg,)))
    elif choice == 3:
        chain = (MethodCall("equals", (arg,)),)
    elif choice == 4:
        chain = (MethodCall("contains", (arg,)),)
    elif choice == 5:
        chain = (MethodCall("inFile", (arg,)),)
    else:
        low = rng.randrange(0, 100)
        chain = (MethodCall("lineBetween", (low, low + rng.randrange(0, 50))),)
    return Predicate(binding, chain)


def _random_flow_predicate(rng: random.Random, flow: str, nodes: list[str]) -> Predicate:
    chain = [MethodCall("source", (BindingRef(rng.choice(nodes)),))]
    if rng.random() < 0.9:
        chain.append(MethodCall("sink", (BindingRef(rng.choice(nodes)),)))
    if rng.random() < 0.3:
        chain.append(MethodCall("barrier", (BindingRef(rng.choice(nodes)),)))
    if rng.random() < 0.3:
        chain.append(MethodCall("as", (f"w{rng.randrange(10)}",)))
    rng.shuffle(chain)
    chain.append(MethodCall("exists"))
    return Predicate(flow, tuple(chain))


def random_query(rng: random.Random) -> QueryAst:
    n_nodes = rng.randint(1, 3)
    node_names = [f"b{i}" for i in range(n_nodes)]
    decls = [Decl(rng.choice(NODE_TYPES), name) for name in node_names]
    flow_names: list[str] = []
    if rng.random() < 0.5:
        flow_names = ["t"]
        decls.append(Decl("TaintFlow", "t"))
    rng.shuffle(decls)

    where = None
    if rng.random() < 0.85:
        def leaf():
            if flow_names and rng.random() < 0.3:
                inner = PredLeaf(_random_flow_predicate(rng, flow_names[0], node_names))
            else:
                inner = PredLeaf(_random_node_predicate(rng, rng.choice(node_names)))
            return NotExpr(inner) if rng.random() < 0.25 else inner

        def and_group():
            expr = leaf()
            for _ in range(rng.randrange(0, 3)):
                expr = AndExpr(expr, leaf())
            return expr

        where = and_group()
        for _ in range(rng.randrange(0, 2)):
            where = OrExpr(where, and_group())

    selectable = node_names
    selects: list = [SelectName(rng.choice(selectable))]
    for _ in range(rng.randrange(0, 2)):
        if rng.random() < 0.3:
            selects.append(SelectLiteral(rng.choice(STRINGS)))
        else:
            selects.append(SelectName(rng.choice(selectable)))
    return QueryAst(tuple(decls), where, tuple(selects))


def test_parse_print_identity_fuzzed():
    rng = random.Random(20240601)
    for case in range(600):
        ast = random_query(rng)
        printed = format_query(ast)
        reparsed = parse_query(printed)
        assert reparsed == ast, f"case {case}:\n{printed}"


def test_print_parse_fixed_point():
    text = (
        'from Call a, Call b, TaintFlow flow\n'
        'where\n'
        '  a.getFunction().equals("input")\n'
        '  and b.getFunction().equals("exec")\n'
        '  and flow.source(a).sink(b).exists()\n'
        'select a, b, flow\n'
    )
    ast = parse_query(text)
    assert format_query(ast) == text
    assert parse_query(format_query(ast)) == ast


def test_ctor_sugar_round_trips_desugared():
    ast = parse_query('from ContainsFunctionCall("malloc") m select m')
    again = parse_query(format_query(ast))
    assert again == ast
