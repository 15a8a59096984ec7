from quarry.rules.config import RuleConfig
from quarry.rules.findings import (
    CONF_MAYBE,
    CONF_MUST,
    RULE_CODE_INJECTION,
    RULE_CWE401,
    RULE_CWE415,
    RULE_CWE416,
    RULE_ML_TAINT,
    RULE_IDS,
    Finding,
)
from quarry.rules.detectors import (
    detect_cwe401,
    detect_cwe415,
    detect_cwe416,
    detect_injection,
    run_rules,
    vql_text,
)
from quarry.rules.scoring import score_corpus

__all__ = [
    "RuleConfig",
    "Finding",
    "CONF_MUST",
    "CONF_MAYBE",
    "RULE_CWE401",
    "RULE_CWE415",
    "RULE_CWE416",
    "RULE_CODE_INJECTION",
    "RULE_ML_TAINT",
    "RULE_IDS",
    "detect_cwe401",
    "detect_cwe415",
    "detect_cwe416",
    "detect_injection",
    "run_rules",
    "vql_text",
    "score_corpus",
]
