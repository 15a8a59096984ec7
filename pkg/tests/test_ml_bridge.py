from __future__ import annotations

import http.server
import json
import threading

import pytest

from quarry.errors import ProviderUnavailableError
from quarry.graph.extract import extract
from quarry.ml.bridge import classify_statements, ml_taint_scan
from quarry.ml.providers import (
    ClassifierVerdict,
    HeuristicClassifier,
    HttpClassifier,
    LABEL_NONE,
    LABEL_SINK,
    LABEL_SOURCE,
)
from quarry.rules.findings import CONF_MAYBE, RULE_ML_TAINT


def build(tmp_path, source):
    proj = tmp_path / "proj"
    proj.mkdir()
    (proj / "m.c").write_text(source)
    return extract(proj)


def verdict_for(graph, verdicts, fragment):
    uid = next(u for u, n in graph.nodes.items() if fragment in n.code)
    return next(v for v in verdicts if v.uid == uid)


def test_heuristic_labels(tmp_path):
    graph = build(
        tmp_path,
        "int main() { int a = 2; int x = input(); exec(x); return 0; }",
    )
    verdicts = classify_statements(graph, HeuristicClassifier())
    assert verdict_for(graph, verdicts, "int a = 2;").label == LABEL_NONE
    assert verdict_for(graph, verdicts, "input()").label == LABEL_SOURCE
    assert verdict_for(graph, verdicts, "exec(x)").label == LABEL_SINK
    plain = [n for n in graph.nodes.values() if n.kind in ("plain", "predicate")]
    assert len(verdicts) == len(plain)
    assert all(0.0 <= v.score <= 1.0 for v in verdicts)


def test_scan_finds_matched_pair(tmp_path):
    graph = build(tmp_path, "int main() { int x = input(); exec(x); return 0; }")
    findings = ml_taint_scan(graph, HeuristicClassifier())
    assert len(findings) == 1
    assert findings[0].rule_id == RULE_ML_TAINT
    assert findings[0].confidence == CONF_MAYBE  # classifier results never claim must


def test_scan_no_downstream_sink(tmp_path):
    graph = build(tmp_path, "int main() { int x = input(); return x; }")
    assert ml_taint_scan(graph, HeuristicClassifier()) == []


def test_scan_sink_upstream_of_source(tmp_path):
    graph = build(tmp_path, "int main() { int y = 1; exec(y); int x = input(); return x; }")
    assert ml_taint_scan(graph, HeuristicClassifier()) == []


def test_incompatible_pair_rejected(tmp_path):
    graph = build(tmp_path, "int main() { int x = input(); exec(x); return 0; }")

    class NoPair(HeuristicClassifier):
        def pair(self, source_code, sink_code):
            return False, 0.1

    assert ml_taint_scan(graph, NoPair()) == []


def test_provider_swap_invariance(tmp_path):
    graph = build(
        tmp_path,
        "int main() { int x = input(); int y = x; system(y); return 0; }",
    )
    reference = HeuristicClassifier()

    class Recorder:
        def classify(self, items):
            return reference.classify(items)

        def pair(self, a, b):
            return reference.pair(a, b)

    mine = ml_taint_scan(graph, reference)
    other = ml_taint_scan(graph, Recorder())
    assert [f.to_json() for f in mine] == [f.to_json() for f in other]


def test_indentation_stripped_before_submission(tmp_path):
    graph = build(tmp_path, "int main(int c) { if (c) { exec(c); } return 0; }")
    captured: list[str] = []

    class Capture(HeuristicClassifier):
        def classify(self, items):
            captured.extend(code for _, code in items)
            return super().classify(items)

    classify_statements(graph, Capture())
    assert captured
    assert all(code == code.strip() for code in captured)


class _StubHandler(http.server.BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers["Content-Length"])
        payload = json.loads(self.rfile.read(length))
        if self.path == "/classify":
            body = {
                "verdicts": [
                    {
                        "id": item["id"],
                        "label": "source" if "input" in item["code"] else "none",
                        "score": 0.75,
                    }
                    for item in payload["items"]
                ]
            }
        elif self.path == "/pair":
            body = {"match": True, "score": 0.8}
        else:
            self.send_error(404)
            return
        data = json.dumps(body).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


def test_http_classifier_round_trip(stub_server):
    client = HttpClassifier(stub_server, timeout=2.0)
    verdicts = client.classify([(1, "int x = input();"), (2, "int a = 2;")])
    assert verdicts == [
        ClassifierVerdict(1, "source", 0.75),
        ClassifierVerdict(2, "none", 0.75),
    ]
    assert client.pair("int x = input();", "exec(x);") == (True, 0.8)


def test_http_classifier_unavailable():
    client = HttpClassifier("http://127.0.0.1:9", timeout=0.2, retries=2, backoff=0.0)
    with pytest.raises(ProviderUnavailableError):
        client.classify([(1, "x")])
