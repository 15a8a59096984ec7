"""Built-in defect detectors.

Each detector is also shipped as a declarative query (rules/vql/); the
two routes share the flow analyses underneath but reach them through
different front halves, and the test suite holds them to identical
results. Confidence is `must` when the defect is on every surviving
path, `maybe` when only on some.
"""

from __future__ import annotations

from importlib import resources

from quarry.engine.memflow import MemFlowAnalyzer
from quarry.engine.taint import taint_reachability
from quarry.graph.model import CodeGraph
from quarry.rules.config import RuleConfig
from quarry.rules.findings import (
    CONF_MAYBE,
    CONF_MUST,
    Finding,
    RULE_CODE_INJECTION,
    RULE_CWE401,
    RULE_CWE415,
    RULE_CWE416,
)

VQL_FILES = {
    RULE_CWE401: "cwe401.vql",
    RULE_CWE415: "cwe415.vql",
    RULE_CWE416: "cwe416.vql",
    RULE_CODE_INJECTION: "code_injection.vql",
}


def vql_text(rule_id: str) -> str:
    """Source text of the shipped declarative rule."""
    return (
        resources.files("quarry.rules").joinpath("vql").joinpath(VQL_FILES[rule_id])
    ).read_text()


def _confidence(must: bool) -> str:
    return CONF_MUST if must else CONF_MAYBE


def _analyzer(graph: CodeGraph, cfg: RuleConfig) -> MemFlowAnalyzer:
    return MemFlowAnalyzer(graph, cfg.mem_policy())


def _location(graph: CodeGraph, uid: int) -> tuple[str, int]:
    node = graph.nodes[uid]
    return node.file, node.line


def detect_cwe401(
    graph: CodeGraph, cfg: RuleConfig | None = None, mem: MemFlowAnalyzer | None = None
) -> list[Finding]:
    cfg = cfg or RuleConfig()
    mem = mem or _analyzer(graph, cfg)
    findings = []
    for report in mem.leak_reports():
        file, line = _location(graph, report.alloc)
        where = f"{file}:{line}"
        if report.must:
            message = f"allocation at {where} is never released"
        else:
            message = f"allocation at {where} is not released on some path"
        if report.context_fn != graph.nodes[report.alloc].fn:
            message += f" (escapes into {report.context_fn})"
        findings.append(
            Finding(RULE_CWE401, _confidence(report.must), report.path, message, file, line)
        )
    return sorted(findings, key=Finding.sort_key)


def _free_sites(graph: CodeGraph, cfg: RuleConfig) -> list[int]:
    return sorted(
        uid
        for uid, node in graph.nodes.items()
        if node.fn and set(node.callees) & cfg.deallocators
    )


def detect_cwe415(
    graph: CodeGraph, cfg: RuleConfig | None = None, mem: MemFlowAnalyzer | None = None
) -> list[Finding]:
    cfg = cfg or RuleConfig()
    mem = mem or _analyzer(graph, cfg)
    frees = _free_sites(graph, cfg)
    findings = []
    for pair in mem.usage_pairs(frees, sinks=set(frees), sinks_must_deallocate=True):
        file, line = _location(graph, pair.source)
        _, again = _location(graph, pair.sink)
        message = f"storage freed at {file}:{line} is freed again at line {again}"
        findings.append(
            Finding(RULE_CWE415, _confidence(pair.must), pair.path, message, file, line)
        )
    return sorted(findings, key=Finding.sort_key)


def detect_cwe416(
    graph: CodeGraph, cfg: RuleConfig | None = None, mem: MemFlowAnalyzer | None = None
) -> list[Finding]:
    cfg = cfg or RuleConfig()
    mem = mem or _analyzer(graph, cfg)
    frees = _free_sites(graph, cfg)
    findings = []
    for pair in mem.usage_pairs(frees, sinks_must_deallocate=False):
        file, line = _location(graph, pair.source)
        _, use_line = _location(graph, pair.sink)
        message = f"storage freed at {file}:{line} is used at line {use_line}"
        findings.append(
            Finding(RULE_CWE416, _confidence(pair.must), pair.path, message, file, line)
        )
    return sorted(findings, key=Finding.sort_key)


def _hop_unavoidable(graph: CodeGraph, mem: MemFlowAnalyzer, src: int, dst: int) -> bool:
    """True when every CFG path from src to its function exit passes dst."""
    fn = graph.nodes[src].fn
    if fn != graph.nodes[dst].fn:
        return True  # cross-function hops are argument/return passing
    return not mem._exit_reachable(fn, src, {dst})


def detect_injection(
    graph: CodeGraph, cfg: RuleConfig | None = None, mem: MemFlowAnalyzer | None = None
) -> list[Finding]:
    cfg = cfg or RuleConfig()
    mem = mem or _analyzer(graph, cfg)
    sources = {
        uid
        for uid, node in graph.nodes.items()
        if node.fn and set(node.callees) & cfg.sources
    }
    sinks = {
        uid
        for uid, node in graph.nodes.items()
        if node.fn and set(node.callees) & cfg.sinks
    }
    barrier = None
    if cfg.sanitizers:
        sanitizers = cfg.sanitizers

        def barrier(uid: int) -> bool:
            return bool(set(graph.nodes[uid].callees) & sanitizers)

    findings = []
    for witness in taint_reachability(sources, sinks, barrier, graph, reach=mem.reach):
        must = all(
            _hop_unavoidable(graph, mem, a, b)
            for a, b in zip(witness.path, witness.path[1:])
        )
        file, line = _location(graph, witness.source)
        _, sink_line = _location(graph, witness.sink)
        message = (
            f"untrusted input at {file}:{line} reaches a sensitive call at line {sink_line}"
        )
        findings.append(
            Finding(
                RULE_CODE_INJECTION,
                _confidence(must),
                witness.path,
                message,
                file,
                line,
            )
        )
    return sorted(findings, key=Finding.sort_key)


DETECTORS = {
    RULE_CWE401: detect_cwe401,
    RULE_CWE415: detect_cwe415,
    RULE_CWE416: detect_cwe416,
    RULE_CODE_INJECTION: detect_injection,
}


def run_rules(
    graph: CodeGraph, cfg: RuleConfig | None = None, rules: list[str] | None = None
) -> list[Finding]:
    cfg = cfg or RuleConfig()
    selected = list(DETECTORS) if rules is None else rules
    unknown = [r for r in selected if r not in DETECTORS]
    if unknown:
        raise ValueError(f"unknown rules: {', '.join(unknown)}")
    mem = _analyzer(graph, cfg)
    findings: list[Finding] = []
    for rule in selected:
        findings.extend(DETECTORS[rule](graph, cfg, mem))
    return sorted(findings, key=Finding.sort_key)
