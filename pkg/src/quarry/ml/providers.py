"""Statement classifiers: the in-process keyword heuristic and the HTTP
client for an external model server.

Both speak the same two-call protocol: classify a batch of statements
into source/sink/none, and decide whether a concrete (source, sink)
pair belongs to the same defect pattern.
"""

from __future__ import annotations

import json
import re
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Protocol

from quarry.errors import ProviderUnavailableError

LABEL_SOURCE = "source"
LABEL_SINK = "sink"
LABEL_NONE = "none"


@dataclass(frozen=True)
class ClassifierVerdict:
    uid: int
    label: str
    score: float


@dataclass(frozen=True)
class PairVerdict:
    source_uid: int
    sink_uid: int
    matched: bool
    score: float


class ClassifierProvider(Protocol):
    def classify(self, items: list[tuple[int, str]]) -> list[ClassifierVerdict]: ...

    def pair(self, source_code: str, sink_code: str) -> tuple[bool, float]: ...


# Keyword tables for the reference heuristic. Call-shaped keywords must
# appear as an invocation; argv matches as a bare word.
SOURCE_CALLS = ("input", "gets", "recv", "fgets")
SOURCE_WORDS = ("argv",)
SINK_CALLS = ("exec", "system", "popen", "eval")

PAIR_SCORES = {
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
PAIR_MISMATCH_SCORE = 0.1
PAIR_THRESHOLD = 0.5


def _call_pattern(keyword: str) -> re.Pattern:
    return re.compile(rf"\b{re.escape(keyword)}\s*\(")


_SOURCE_PATTERNS = [(kw, _call_pattern(kw)) for kw in SOURCE_CALLS] + [
    (kw, re.compile(rf"\b{re.escape(kw)}\b")) for kw in SOURCE_WORDS
]
_SINK_PATTERNS = [(kw, _call_pattern(kw)) for kw in SINK_CALLS]


def source_keyword(code: str) -> str | None:
    for keyword, pattern in _SOURCE_PATTERNS:
        if pattern.search(code):
            return keyword
    return None


def sink_keyword(code: str) -> str | None:
    for keyword, pattern in _SINK_PATTERNS:
        if pattern.search(code):
            return keyword
    return None


class HeuristicClassifier:
    """Deterministic lexical stand-in for a learned classifier."""

    def classify(self, items: list[tuple[int, str]]) -> list[ClassifierVerdict]:
        verdicts = []
        for uid, code in items:
            if sink_keyword(code) is not None:
                verdicts.append(ClassifierVerdict(uid, LABEL_SINK, 0.9))
            elif source_keyword(code) is not None:
                verdicts.append(ClassifierVerdict(uid, LABEL_SOURCE, 0.9))
            else:
                verdicts.append(ClassifierVerdict(uid, LABEL_NONE, 0.6))
        return verdicts

    def pair(self, source_code: str, sink_code: str) -> tuple[bool, float]:
        src = source_keyword(source_code)
        dst = sink_keyword(sink_code)
        if src is None or dst is None:
            return False, PAIR_MISMATCH_SCORE
        score = PAIR_SCORES.get((src, dst), PAIR_MISMATCH_SCORE)
        return score >= PAIR_THRESHOLD, score


class HttpClassifier:
    """Client for the model-server wire protocol.

    POST /classify {"items": [{"id": int, "code": str}]}
        -> {"verdicts": [{"id": int, "label": str, "score": float}]}
    POST /pair {"source": str, "sink": str}
        -> {"match": bool, "score": float}
    """

    def __init__(
        self,
        base_url: str,
        timeout: float = 5.0,
        retries: int = 3,
        backoff: float = 0.2,
        batch_size: int = 256,
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.batch_size = batch_size

    def _post(self, endpoint: str, payload: dict) -> dict:
        body = json.dumps(payload).encode("utf-8")
        request = urllib.request.Request(
            f"{self.base_url}{endpoint}",
            data=body,
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        last_error: Exception | None = None
        for attempt in range(self.retries):
            try:
                with urllib.request.urlopen(request, timeout=self.timeout) as response:
                    return json.loads(response.read().decode("utf-8"))
            except (urllib.error.URLError, OSError, json.JSONDecodeError) as err:
                last_error = err
                if attempt + 1 < self.retries:
                    time.sleep(self.backoff * (2**attempt))
        raise ProviderUnavailableError(
            f"model server at {self.base_url} unavailable: {last_error}"
        )

    def classify(self, items: list[tuple[int, str]]) -> list[ClassifierVerdict]:
        verdicts: list[ClassifierVerdict] = []
        for start in range(0, len(items), self.batch_size):
            batch = items[start : start + self.batch_size]
            payload = {"items": [{"id": uid, "code": code} for uid, code in batch]}
            data = self._post("/classify", payload)
            for entry in data.get("verdicts", ()):
                verdicts.append(
                    ClassifierVerdict(
                        int(entry["id"]), str(entry["label"]), float(entry["score"])
                    )
                )
        return verdicts

    def pair(self, source_code: str, sink_code: str) -> tuple[bool, float]:
        data = self._post("/pair", {"source": source_code, "sink": sink_code})
        return bool(data["match"]), float(data["score"])
