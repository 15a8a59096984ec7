from __future__ import annotations

import pytest

from quarry.errors import NoDeclarationError
from quarry.engine.resolve import DeclarationResolver, freed_variable, kill_statements, resolve_declaration
from quarry.graph.extract import extract

ALIAS_PROGRAM = """\
int main() {
    int *p = malloc(4);
    int *q;
    q = p;
    free(p);
    free(q);
    return 0;
}
"""

# Same aliasing, but the alias member is declared first: the resolved
# declaration must still be identical for both frees.
ALIAS_Q_FIRST = """\
int main() {
    int *q;
    int *p = malloc(4);
    q = p;
    free(p);
    free(q);
    return 0;
}
"""


def build(tmp_path, source):
    proj = tmp_path / "proj"
    proj.mkdir()
    (proj / "m.c").write_text(source)
    return extract(proj)


def uid_of(graph, fragment):
    return next(u for u, n in graph.nodes.items() if fragment in n.code)


def test_alias_frees_resolve_to_same_declaration(tmp_path):
    graph = build(tmp_path, ALIAS_PROGRAM)
    decl_p = uid_of(graph, "int *p = malloc(4);")
    assert resolve_declaration(uid_of(graph, "free(p);"), "p", graph) == decl_p
    assert resolve_declaration(uid_of(graph, "free(q);"), "q", graph) == decl_p


def test_alias_declaration_order_does_not_split(tmp_path):
    graph = build(tmp_path, ALIAS_Q_FIRST)
    r1 = resolve_declaration(uid_of(graph, "free(p);"), "p", graph)
    r2 = resolve_declaration(uid_of(graph, "free(q);"), "q", graph)
    assert r1 == r2 == uid_of(graph, "int *q;")


def test_use_at_declaring_statement(tmp_path):
    graph = build(tmp_path, "int f(int a) { int b = a * a; return b; }")
    decl_b = uid_of(graph, "int b = a * a;")
    assert resolve_declaration(decl_b, "b", graph) == decl_b


def test_example_program_printf_b(tmp_path, example_source):
    graph = build(tmp_path, example_source)
    printf = uid_of(graph, "printf")
    assert resolve_declaration(printf, "b", graph) == uid_of(graph, "int b = a * a;")
    assert resolve_declaration(printf, "a", graph) == uid_of(graph, "int a = 2;")


def test_resolution_through_assignment_chain(tmp_path):
    graph = build(
        tmp_path, "int f() { int x; x = 1; x = 2; int y = x; return y; }"
    )
    y_decl = uid_of(graph, "int y = x;")
    assert resolve_declaration(y_decl, "x", graph) == uid_of(graph, "int x;")


def test_param_resolves_to_param_node(tmp_path):
    graph = build(tmp_path, "int f(int *p) { free(p); return 0; }")
    param = next(u for u, n in graph.nodes.items() if n.ast.get("kind") == "Param")
    assert resolve_declaration(uid_of(graph, "free(p);"), "p", graph) == param


def test_no_declaration_for_extern(tmp_path):
    graph = build(tmp_path, "int f() { return outside; }")
    with pytest.raises(NoDeclarationError):
        resolve_declaration(uid_of(graph, "return outside;"), "outside", graph)


def test_global_resolution(tmp_path):
    graph = build(tmp_path, "int g = 1;\nint f() { return g; }")
    assert resolve_declaration(uid_of(graph, "return g;"), "g", graph) == uid_of(
        graph, "int g = 1;"
    )


def test_kill_statements_reassignment(tmp_path):
    graph = build(
        tmp_path,
        "int main() { int *p = malloc(4); free(p); p = malloc(8); free(p); return 0; }",
    )
    resolver = DeclarationResolver(graph)
    root = resolver.resolve(uid_of(graph, "free(p);"), "p")
    kills = kill_statements(graph, "main", root, resolver)
    assert uid_of(graph, "p = malloc(8);") in kills
    assert uid_of(graph, "free(p);") not in kills


def test_alias_copy_is_not_a_kill(tmp_path):
    graph = build(tmp_path, ALIAS_PROGRAM)
    resolver = DeclarationResolver(graph)
    root = resolver.resolve(uid_of(graph, "free(p);"), "p")
    kills = kill_statements(graph, "main", root, resolver)
    assert uid_of(graph, "q = p;") not in kills
    # The allocating declaration itself re-points the storage.
    assert uid_of(graph, "int *p = malloc(4);") in kills


def test_freed_variable_extraction(tmp_path):
    graph = build(tmp_path, ALIAS_PROGRAM)
    node = graph.nodes[uid_of(graph, "free(q);")]
    assert freed_variable(node, frozenset({"free"})) == "q"
    other = graph.nodes[uid_of(graph, "q = p;")]
    assert freed_variable(other, frozenset({"free"})) is None
