from __future__ import annotations

import pytest

from quarry.errors import QuerySyntaxError, UnboundNameError, UnknownTypeError
from quarry.dsl.ast import (
    AndExpr,
    BindingRef,
    Decl,
    MethodCall,
    NotExpr,
    OrExpr,
    PredLeaf,
    Predicate,
    SelectLiteral,
    SelectName,
)
from quarry.dsl.parser import parse_query

INJECTION_QUERY = """\
from Call a, Call b, TaintFlow flow
where
  a.getFunction().equals("input") and
  b.getFunction().equals("exec") and
  flow.source(a).sink(b).exists()
select a, b, flow
"""


def test_injection_query_shape():
    ast = parse_query(INJECTION_QUERY)
    assert ast.decls == (
        Decl("Call", "a"),
        Decl("Call", "b"),
        Decl("TaintFlow", "flow"),
    )
    assert ast.selects == (SelectName("a"), SelectName("b"), SelectName("flow"))
    # Three conjoined predicates, left associative.
    assert isinstance(ast.where, AndExpr)
    assert isinstance(ast.where.left, AndExpr)
    leaves = [ast.where.left.left, ast.where.left.right, ast.where.right]
    assert all(isinstance(leaf, PredLeaf) for leaf in leaves)
    assert leaves[0].predicate == Predicate(
        "a", (MethodCall("getFunction"), MethodCall("equals", ("input",)))
    )
    assert leaves[2].predicate == Predicate(
        "flow",
        (
            MethodCall("source", (BindingRef("a"),)),
            MethodCall("sink", (BindingRef("b"),)),
            MethodCall("exists"),
        ),
    )


def test_minimal_query():
    ast = parse_query("from Call a select a")
    assert ast.where is None
    assert ast.decls == (Decl("Call", "a"),)
    assert ast.selects == (SelectName("a"),)


def test_negation_binds_tighter_than_and():
    ast = parse_query(
        'from Call a where not a.getFunction().equals("free") and a.contains("p") select a'
    )
    assert isinstance(ast.where, AndExpr)
    assert isinstance(ast.where.left, NotExpr)
    assert isinstance(ast.where.right, PredLeaf)


def test_and_binds_tighter_than_or():
    ast = parse_query(
        'from Call a where a.contains("x") or a.contains("y") and a.contains("z") select a'
    )
    assert isinstance(ast.where, OrExpr)
    assert isinstance(ast.where.left, PredLeaf)
    assert isinstance(ast.where.right, AndExpr)


def test_or_left_associative():
    ast = parse_query(
        'from Call a where a.contains("x") or a.contains("y") or a.contains("z") select a'
    )
    assert isinstance(ast.where, OrExpr)
    assert isinstance(ast.where.left, OrExpr)


def test_constructor_declaration_desugars():
    ast = parse_query('from ContainsFunctionCall("malloc") m select m')
    assert ast.decls == (Decl("Call", "m"),)
    assert ast.where == PredLeaf(
        Predicate("m", (MethodCall("ContainsFunctionCall", ("malloc",)),))
    )


def test_select_string_literal():
    ast = parse_query('from Call a select a, "label"')
    assert ast.selects[1] == SelectLiteral("label")


def test_string_escapes():
    ast = parse_query('from Call a where a.contains("say \\"hi\\"\\n") select a')
    leaf = ast.where
    assert isinstance(leaf, PredLeaf)
    assert leaf.predicate.chain[0].args == ('say "hi"\n',)


def test_comments_ignored():
    ast = parse_query("// finds calls\nfrom Call a // binding\nselect a")
    assert ast.decls == (Decl("Call", "a"),)


def test_unknown_type():
    with pytest.raises(UnknownTypeError):
        parse_query("from Widget w select w")


def test_unknown_ctor_type():
    with pytest.raises(UnknownTypeError):
        parse_query('from Frobnicate("x") w select w')


def test_unbound_name_in_where():
    with pytest.raises(UnboundNameError):
        parse_query('from Call a where b.contains("x") select a')


def test_unbound_name_in_select():
    with pytest.raises(UnboundNameError):
        parse_query("from Call a select b")


def test_unbound_binding_argument():
    with pytest.raises(UnboundNameError):
        parse_query("from Call a, TaintFlow t where t.source(zz).exists() select a")


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "select a",
        "from Call a",
        "from Call a where select a",
        "from Call a select",
        "from Call a where a select a",
        'from Call a where a.f("x" select a',
        "from Call a, Call a select a",
    ],
)
def test_syntax_errors(bad):
    with pytest.raises(QuerySyntaxError):
        parse_query(bad)


def test_syntax_error_has_location():
    with pytest.raises(QuerySyntaxError) as err:
        parse_query("from Call a\nwhere !")
    assert err.value.line == 2
