"""Report assembly and rendering.

The JSON report is canonical: fixed key order, sorted findings, no
volatile fields. Phase timings are recorded separately (timings file /
stderr) so re-running an unchanged snapshot yields byte-identical
report output. The schema is documented in docs/report_schema.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import quarry
from quarry.rules.findings import Finding


@dataclass
class Report:
    findings: list[Finding]
    graph_version: str
    graph_stats: dict
    rules: list[str]
    ml_enabled: bool = False
    ml_findings: list[Finding] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    tool_version: str = quarry.__version__

    def to_json_obj(self) -> dict:
        return {
            "findings": [f.to_json() for f in sorted(self.findings, key=Finding.sort_key)],
            "graph": {"stats": self.graph_stats, "version": self.graph_version},
            "ml": {
                "enabled": self.ml_enabled,
                "findings": [
                    f.to_json() for f in sorted(self.ml_findings, key=Finding.sort_key)
                ],
            },
            "rules": sorted(self.rules),
            "tool": {"name": "quarry", "version": self.tool_version},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2) + "\n"

    def timings_json(self) -> str:
        return json.dumps(
            {"timings": {k: round(v, 6) for k, v in sorted(self.timings.items())}},
            sort_keys=True,
            indent=2,
        ) + "\n"

    def render_text(self) -> str:
        lines = []
        nodes = sum(self.graph_stats.get("nodes", {}).values())
        edges = sum(self.graph_stats.get("edges", {}).values())
        lines.append(f"graph: {nodes} nodes, {edges} edges (version {self.graph_version[:12]})")
        lines.append(f"rules: {', '.join(sorted(self.rules))}")
        every = list(self.findings) + list(self.ml_findings)
        if not every:
            lines.append("no findings")
        for finding in sorted(every, key=Finding.sort_key):
            lines.append(
                f"{finding.file}:{finding.line}: [{finding.rule_id}/{finding.confidence}] "
                f"{finding.message}"
            )
        return "\n".join(lines) + "\n"


def finding_from_json(obj: dict) -> Finding:
    return Finding(
        rule_id=obj["rule"],
        confidence=obj["confidence"],
        witness=list(obj["witness"]),
        message=obj["message"],
        file=obj["file"],
        line=obj["line"],
    )
