from __future__ import annotations

import pytest

from quarry.graph.extract import extract
from quarry.rules.config import RuleConfig
from quarry.rules.detectors import (
    detect_cwe401,
    detect_cwe415,
    detect_cwe416,
    detect_injection,
    run_rules,
)
from quarry.rules.findings import CONF_MAYBE, CONF_MUST


def build(tmp_path, source):
    proj = tmp_path / "proj"
    proj.mkdir()
    (proj / "m.c").write_text(source)
    return extract(proj)


def line_of(graph, fragment):
    return next(n.line for n in graph.nodes.values() if fragment in n.code)


# -- CWE-401 memory leak ------------------------------------------------


def test_leak_must_when_never_freed(tmp_path):
    graph = build(tmp_path, "int main() { int *p = malloc(4); return 0; }")
    findings = detect_cwe401(graph)
    assert len(findings) == 1
    assert findings[0].confidence == CONF_MUST
    assert findings[0].line == line_of(graph, "malloc(4)")


def test_leak_maybe_when_freed_on_one_branch(tmp_path):
    graph = build(
        tmp_path,
        "int main(int c) { int *p = malloc(4); if (c) { free(p); } return 0; }",
    )
    findings = detect_cwe401(graph)
    assert [f.confidence for f in findings] == [CONF_MAYBE]


def test_no_leak_when_always_freed(tmp_path):
    graph = build(tmp_path, "int main() { int *p = malloc(4); free(p); return 0; }")
    assert detect_cwe401(graph) == []


def test_leak_when_result_dropped(tmp_path):
    graph = build(tmp_path, "int main() { malloc(4); return 0; }")
    findings = detect_cwe401(graph)
    assert [f.confidence for f in findings] == [CONF_MUST]


def test_no_leak_through_freeing_wrapper(tmp_path):
    source = """\
void release(int *x) {
    free(x);
}
int main() {
    int *p = malloc(4);
    release(p);
    return 0;
}
"""
    graph = build(tmp_path, source)
    assert detect_cwe401(graph) == []


def test_leak_of_returned_allocation_in_caller(tmp_path):
    source = """\
int *mk() {
    int *p = malloc(4);
    return p;
}
int main() {
    int *q = mk();
    return 0;
}
"""
    graph = build(tmp_path, source)
    findings = detect_cwe401(graph)
    assert len(findings) == 1
    assert findings[0].confidence == CONF_MUST
    assert findings[0].line == line_of(graph, "malloc(4)")
    assert "main" in findings[0].message


def test_returned_allocation_freed_by_caller(tmp_path):
    source = """\
int *mk() {
    int *p = malloc(4);
    return p;
}
int main() {
    int *q = mk();
    free(q);
    return 0;
}
"""
    graph = build(tmp_path, source)
    assert detect_cwe401(graph) == []


def test_alias_free_releases_the_allocation(tmp_path):
    source = "int main() { int *p = malloc(4); int *q; q = p; free(q); return 0; }"
    graph = build(tmp_path, source)
    assert detect_cwe401(graph) == []


# -- CWE-415 double free ---------------------------------------------------


def test_double_free_must(tmp_path):
    graph = build(
        tmp_path, "int main() { int *p = malloc(4); free(p); free(p); return 0; }"
    )
    findings = detect_cwe415(graph)
    assert len(findings) == 1
    assert findings[0].confidence == CONF_MUST


def test_double_free_via_alias(tmp_path):
    source = """\
int main() {
    int *p = malloc(4);
    int *q;
    q = p;
    free(p);
    free(q);
    return 0;
}
"""
    graph = build(tmp_path, source)
    findings = detect_cwe415(graph)
    assert len(findings) == 1
    assert findings[0].confidence == CONF_MUST
    assert findings[0].line == line_of(graph, "free(p);")


def test_reassignment_barrier_stops_double_free(tmp_path):
    graph = build(
        tmp_path,
        "int main() { int *p = malloc(4); free(p); p = malloc(4); free(p); return 0; }",
    )
    assert detect_cwe415(graph) == []


def test_conditional_second_free_is_maybe(tmp_path):
    graph = build(
        tmp_path,
        "int main(int c) { int *p = malloc(4); free(p); if (c) { free(p); } return 0; }",
    )
    findings = detect_cwe415(graph)
    assert [f.confidence for f in findings] == [CONF_MAYBE]


def test_free_inside_loop(tmp_path):
    graph = build(
        tmp_path,
        "int main(int c) { int *p = malloc(4); while (c) { free(p); } return 0; }",
    )
    findings = detect_cwe415(graph)
    assert len(findings) == 1  # the loop frees the same storage again
    assert findings[0].confidence == CONF_MAYBE


def test_fresh_allocation_inside_loop_is_clean(tmp_path):
    graph = build(
        tmp_path,
        "int main(int c) { int *p; while (c) { p = malloc(4); free(p); } return 0; }",
    )
    assert detect_cwe415(graph) == []


# -- CWE-416 use after free ---------------------------------------------


def test_use_after_free_must(tmp_path):
    graph = build(
        tmp_path, "int main() { int *p = malloc(4); free(p); *p = 1; return 0; }"
    )
    findings = detect_cwe416(graph)
    assert len(findings) == 1
    assert findings[0].confidence == CONF_MUST
    assert findings[0].line == line_of(graph, "free(p)")


def test_conditional_use_after_free_is_maybe(tmp_path):
    graph = build(
        tmp_path,
        "int main(int c) { int *p = malloc(4); free(p); if (c) { int x = *p; } return 0; }",
    )
    findings = detect_cwe416(graph)
    assert [f.confidence for f in findings] == [CONF_MAYBE]


def test_reassignment_clears_use_after_free(tmp_path):
    graph = build(
        tmp_path,
        "int main() { int *p = malloc(4); free(p); p = malloc(4); *p = 1; free(p); return 0; }",
    )
    assert detect_cwe416(graph) == []


def test_use_before_free_in_loop(tmp_path):
    graph = build(
        tmp_path,
        "int main(int c) { int *p = malloc(4); while (c) { int x = *p; free(p); } return 0; }",
    )
    findings = detect_cwe416(graph)
    assert len(findings) == 1  # second iteration reads freed storage
    assert findings[0].confidence == CONF_MAYBE


def test_double_free_is_not_also_use_after_free(tmp_path):
    graph = build(
        tmp_path, "int main() { int *p = malloc(4); free(p); free(p); return 0; }"
    )
    assert detect_cwe416(graph) == []


# -- code injection ------------------------------------------------------


def test_injection_direct(tmp_path):
    graph = build(tmp_path, "int main() { int x = input(); exec(x); return 0; }")
    findings = detect_injection(graph)
    assert len(findings) == 1
    assert findings[0].confidence == CONF_MUST


def test_injection_sanitized(tmp_path):
    graph = build(
        tmp_path,
        "int main() { int x = input(); x = sanitize(x); exec(x); return 0; }",
    )
    cfg = RuleConfig(sanitizers=frozenset({"sanitize"}))
    assert detect_injection(graph, cfg) == []
    assert len(detect_injection(graph)) == 1  # without the sanitizer list


def test_injection_across_functions(tmp_path):
    source = """\
void runit(int v) {
    exec(v);
}
int main() {
    int x = input();
    runit(x);
    return 0;
}
"""
    graph = build(tmp_path, source)
    findings = detect_injection(graph)
    assert len(findings) == 1
    assert findings[0].line == line_of(graph, "input()")


def test_injection_branch_is_maybe(tmp_path):
    graph = build(
        tmp_path,
        "int main(int c) { int x = input(); if (c) { exec(x); } return 0; }",
    )
    findings = detect_injection(graph)
    assert [f.confidence for f in findings] == [CONF_MAYBE]


# -- orchestration -----------------------------------------------------------


def test_run_rules_combined(tmp_path):
    source = """\
int main() {
    int *p = malloc(4);
    int x = input();
    free(p);
    *p = 1;
    exec(x);
    return 0;
}
"""
    graph = build(tmp_path, source)
    findings = run_rules(graph)
    rules = sorted({f.rule_id for f in findings})
    assert rules == ["CODE_INJECTION", "CWE416"]
    assert findings == sorted(findings, key=lambda f: f.sort_key())


def test_run_rules_selection(tmp_path):
    graph = build(tmp_path, "int main() { int *p = malloc(4); return 0; }")
    assert run_rules(graph, rules=["CWE415"]) == []
    assert len(run_rules(graph, rules=["CWE401"])) == 1
    with pytest.raises(ValueError):
        run_rules(graph, rules=["CWE999"])


def test_allocators_and_deallocators_must_be_disjoint():
    with pytest.raises(ValueError):
        RuleConfig(allocators=frozenset({"grab"}), deallocators=frozenset({"grab"}))


def test_must_findings_are_subset_of_all(tmp_path):
    source = """\
int main(int c) {
    int *p = malloc(4);
    free(p);
    if (c) {
        free(p);
    }
    int x = input();
    exec(x);
    return 0;
}
"""
    graph = build(tmp_path, source)
    every = {(f.rule_id, f.line, tuple(f.witness)) for f in run_rules(graph)}
    must = {
        (f.rule_id, f.line, tuple(f.witness))
        for f in run_rules(graph)
        if f.confidence == CONF_MUST
    }
    assert must <= every
