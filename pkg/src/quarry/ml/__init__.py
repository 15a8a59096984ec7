from quarry.ml.providers import (
    ClassifierVerdict,
    HeuristicClassifier,
    HttpClassifier,
    LABEL_NONE,
    LABEL_SINK,
    LABEL_SOURCE,
    PairVerdict,
)
from quarry.ml.bridge import classify_statements, ml_taint_scan

__all__ = [
    "ClassifierVerdict",
    "PairVerdict",
    "HeuristicClassifier",
    "HttpClassifier",
    "LABEL_SOURCE",
    "LABEL_SINK",
    "LABEL_NONE",
    "classify_statements",
    "ml_taint_scan",
]
