"""Finding records produced by the built-in rules."""

from __future__ import annotations

from dataclasses import dataclass

from quarry.frontend.tokens import Span

RULE_CWE401 = "CWE401"
RULE_CWE415 = "CWE415"
RULE_CWE416 = "CWE416"
RULE_CODE_INJECTION = "CODE_INJECTION"
RULE_ML_TAINT = "ML_TAINT"
RULE_IDS = (RULE_CWE401, RULE_CWE415, RULE_CWE416, RULE_CODE_INJECTION, RULE_ML_TAINT)

CONF_MUST = "must"
CONF_MAYBE = "maybe"


@dataclass
class Finding:
    rule_id: str
    confidence: str  # must | maybe
    witness: list[int]  # node uids; the head is the allocation/source
    message: str
    file: str
    line: int

    @property
    def primary_location(self) -> Span:
        return Span(self.file, self.line, 1)

    def sort_key(self):
        return (self.rule_id, self.file, self.line, self.confidence, tuple(self.witness))

    def to_json(self) -> dict:
        return {
            "rule": self.rule_id,
            "confidence": self.confidence,
            "file": self.file,
            "line": self.line,
            "message": self.message,
            "witness": list(self.witness),
        }
