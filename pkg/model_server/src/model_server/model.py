"""Lexical keyword model.

Stands in for a learned classifier behind the same interface: a
statement is a source/sink when a known keyword appears in call
position (argv counts as a bare word), and a (source, sink) pair
matches when the keyword combination is a known defect pattern. A
trained model can replace this class without touching the protocol:
anything exposing classify_one/pair_score plugs into the server.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

LABEL_SOURCE = "source"
LABEL_SINK = "sink"
LABEL_NONE = "none"

DEFAULT_SOURCE_WEIGHTS = {
    "input": 0.9,
    "gets": 0.9,
    "recv": 0.9,
    "fgets": 0.9,
    "argv": 0.9,
}
DEFAULT_SINK_WEIGHTS = {
    "exec": 0.9,
    "system": 0.9,
    "popen": 0.9,
    "eval": 0.9,
}
# Keywords that denote data rather than a call; matched as bare words.
WORD_KEYWORDS = frozenset({"argv"})

DEFAULT_PAIR_COMPATIBILITY = {
    ("input", "exec"): 0.95,
    ("input", "system"): 0.9,
    ("input", "eval"): 0.9,
    ("input", "popen"): 0.8,
    ("gets", "exec"): 0.9,
    ("gets", "system"): 0.9,
    ("gets", "eval"): 0.7,
    ("gets", "popen"): 0.7,
    ("recv", "exec"): 0.85,
    ("recv", "system"): 0.85,
    ("recv", "eval"): 0.7,
    ("recv", "popen"): 0.7,
    ("fgets", "exec"): 0.8,
    ("fgets", "system"): 0.8,
    ("argv", "exec"): 0.8,
    ("argv", "system"): 0.85,
    ("argv", "eval"): 0.6,
    ("argv", "popen"): 0.6,
}

NONE_SCORE = 0.6
MISMATCH_SCORE = 0.1
MATCH_THRESHOLD = 0.5


def _pattern(keyword: str) -> re.Pattern:
    if keyword in WORD_KEYWORDS:
        return re.compile(rf"\b{re.escape(keyword)}\b")
    return re.compile(rf"\b{re.escape(keyword)}\s*\(")


@dataclass
class KeywordModel:
    source_keywords: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_SOURCE_WEIGHTS)
    )
    sink_keywords: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_SINK_WEIGHTS)
    )
    pair_compatibility: dict[tuple[str, str], float] = field(
        default_factory=lambda: dict(DEFAULT_PAIR_COMPATIBILITY)
    )

    def __post_init__(self):
        self._source_patterns = {kw: _pattern(kw) for kw in self.source_keywords}
        self._sink_patterns = {kw: _pattern(kw) for kw in self.sink_keywords}

    def _best(self, code: str, patterns: dict, weights: dict) -> tuple[str | None, float]:
        best_kw, best_score = None, 0.0
        for keyword in sorted(patterns):
            if patterns[keyword].search(code) and weights[keyword] > best_score:
                best_kw, best_score = keyword, weights[keyword]
        return best_kw, best_score

    def classify_one(self, code: str) -> tuple[str, float]:
        """Highest-scoring label; sinks outrank sources on ties."""
        _, source_score = self._best(code, self._source_patterns, self.source_keywords)
        _, sink_score = self._best(code, self._sink_patterns, self.sink_keywords)
        scored = (
            (sink_score, LABEL_SINK),
            (source_score, LABEL_SOURCE),
            (NONE_SCORE, LABEL_NONE),
        )
        score, label = max(scored, key=lambda pair: pair[0])
        return label, score

    def pair_score(self, source_code: str, sink_code: str) -> float:
        src, _ = self._best(source_code, self._source_patterns, self.source_keywords)
        dst, _ = self._best(sink_code, self._sink_patterns, self.sink_keywords)
        if src is None or dst is None:
            return MISMATCH_SCORE
        return self.pair_compatibility.get((src, dst), MISMATCH_SCORE)

    def pair_matches(self, source_code: str, sink_code: str) -> tuple[bool, float]:
        score = self.pair_score(source_code, sink_code)
        return score >= MATCH_THRESHOLD, score
