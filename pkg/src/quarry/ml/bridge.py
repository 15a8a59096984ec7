"""Classifier-guided taint scan.

Statements are classified into sources/sinks, the engine walks
downstream from every predicted source over data and call flow, and
each encountered predicted sink is confirmed with the pairing check
before a finding is emitted. Classifier-born findings never claim more
than `maybe` confidence. If the provider is unreachable the scan
aborts; rule-based results are unaffected.
"""

from __future__ import annotations

from quarry.engine.taint import Reachability, taint_reachability
from quarry.graph.model import CodeGraph
from quarry.ml.providers import (
    ClassifierProvider,
    ClassifierVerdict,
    LABEL_SINK,
    LABEL_SOURCE,
    PairVerdict,
)
from quarry.rules.findings import CONF_MAYBE, Finding, RULE_ML_TAINT


def classify_statements(
    graph: CodeGraph, provider: ClassifierProvider
) -> list[ClassifierVerdict]:
    """One verdict per executable statement (indentation stripped)."""
    items = [
        (uid, node.code.strip())
        for uid, node in sorted(graph.nodes.items())
        if node.kind in ("plain", "predicate")
    ]
    verdicts = provider.classify(items)
    return sorted(verdicts, key=lambda v: v.uid)


def ml_taint_scan(
    graph: CodeGraph,
    provider: ClassifierProvider,
    sanitizers: frozenset[str] = frozenset(),
    reach: Reachability | None = None,
) -> list[Finding]:
    verdicts = classify_statements(graph, provider)
    sources = {v.uid for v in verdicts if v.label == LABEL_SOURCE}
    sinks = {v.uid for v in verdicts if v.label == LABEL_SINK}
    barrier = None
    if sanitizers:

        def barrier(uid: int) -> bool:
            return bool(set(graph.nodes[uid].callees) & sanitizers)

    findings: list[Finding] = []
    pair_cache: dict[tuple[str, str], tuple[bool, float]] = {}
    for witness in taint_reachability(sources, sinks, barrier, graph, reach=reach):
        src = graph.nodes[witness.source]
        dst = graph.nodes[witness.sink]
        key = (src.code.strip(), dst.code.strip())
        if key not in pair_cache:
            pair_cache[key] = provider.pair(*key)
        matched, score = pair_cache[key]
        verdict = PairVerdict(witness.source, witness.sink, matched, score)
        if not verdict.matched:
            continue
        message = (
            f"classifier-paired flow from {src.file}:{src.line} "
            f"to line {dst.line} (score {score:.2f})"
        )
        findings.append(
            Finding(RULE_ML_TAINT, CONF_MAYBE, witness.path, message, src.file, src.line)
        )
    return sorted(findings, key=Finding.sort_key)
