"""Precision/recall scoring of detector output against labeled cases.

    precision = positives / (positives + false positives) * 100
    recall    = positives / (total vulnerabilities) * 100

Both a must-only and a must+maybe variant are reported, per rule and
overall. A finding matches a labeled defect when case, rule, and line
agree.
"""

from __future__ import annotations

from dataclasses import dataclass

from quarry.errors import UnknownCaseError
from quarry.rules.findings import CONF_MUST, Finding

_Key = tuple[str, str, int]  # (case id, rule id, line)


@dataclass
class RuleScore:
    positives: int
    false_positives: int
    total: int

    @property
    def precision(self) -> float:
        reported = self.positives + self.false_positives
        if reported == 0:
            return 100.0
        return self.positives / reported * 100.0

    @property
    def recall(self) -> float:
        if self.total == 0:
            return 100.0
        return self.positives / self.total * 100.0

    def to_json(self) -> dict:
        return {
            "positives": self.positives,
            "false_positives": self.false_positives,
            "total": self.total,
            "precision": round(self.precision, 2),
            "recall": round(self.recall, 2),
        }


def _score(got: set[_Key], expected: set[_Key], rules: list[str]) -> dict[str, RuleScore]:
    scores: dict[str, RuleScore] = {}
    for rule in rules:
        g = {k for k in got if k[1] == rule}
        e = {k for k in expected if k[1] == rule}
        hit = len(g & e)
        scores[rule] = RuleScore(hit, len(g - e), len(e))
    scores["overall"] = RuleScore(
        len(got & expected), len(got - expected), len(expected)
    )
    return scores


def score_corpus(
    findings_by_case: dict[str, list[Finding]],
    ground_truth: dict[str, dict],
) -> dict[str, dict[str, RuleScore]]:
    """Score findings against the labeled corpus.

    `ground_truth` maps case id to {"findings": [{"rule", "line"}, ...]};
    findings for a case id absent from the truth raise UnknownCaseError.
    """
    for case_id in findings_by_case:
        if case_id not in ground_truth:
            raise UnknownCaseError(f"case {case_id!r} is not in the ground truth")

    expected: set[_Key] = set()
    rules: set[str] = set()
    for case_id, entry in ground_truth.items():
        for item in entry.get("findings", ()):
            expected.add((case_id, item["rule"], item["line"]))
            rules.add(item["rule"])

    got_all: set[_Key] = set()
    got_must: set[_Key] = set()
    for case_id, findings in findings_by_case.items():
        for finding in findings:
            key = (case_id, finding.rule_id, finding.line)
            rules.add(finding.rule_id)
            got_all.add(key)
            if finding.confidence == CONF_MUST:
                got_must.add(key)

    ordered = sorted(rules)
    return {
        "all": _score(got_all, expected, ordered),
        "must": _score(got_must, expected, ordered),
    }
