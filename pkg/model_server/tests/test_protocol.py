"""Wire-protocol conformance against the shared golden fixtures."""

from __future__ import annotations

import json
import threading
import urllib.error
import urllib.request
from pathlib import Path

import pytest

from model_server.server import create_server

FIXTURES = Path(__file__).resolve().parent.parent.parent / "fixtures" / "ml_protocol"


@pytest.fixture(scope="module")
def base_url():
    server = create_server(port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


def post(base_url, endpoint, payload: bytes):
    request = urllib.request.Request(
        base_url + endpoint,
        data=payload,
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    with urllib.request.urlopen(request, timeout=5) as response:
        return response.status, json.loads(response.read())


def golden(name: str) -> bytes:
    return (FIXTURES / name).read_bytes()


def test_classify_golden(base_url):
    status, body = post(base_url, "/classify", golden("classify_request.json"))
    assert status == 200
    assert body == json.loads(golden("classify_response.json"))


def test_pair_golden_match(base_url):
    status, body = post(base_url, "/pair", golden("pair_request_match.json"))
    assert status == 200
    assert body == json.loads(golden("pair_response_match.json"))


def test_pair_golden_mismatch(base_url):
    status, body = post(base_url, "/pair", golden("pair_request_mismatch.json"))
    assert status == 200
    assert body == json.loads(golden("pair_response_mismatch.json"))


def test_empty_items(base_url):
    status, body = post(base_url, "/classify", b'{"items": []}')
    assert status == 200
    assert body == {"verdicts": []}


def _expect_400(base_url, endpoint, payload: bytes):
    with pytest.raises(urllib.error.HTTPError) as err:
        post(base_url, endpoint, payload)
    assert err.value.code == 400
    assert "error" in json.loads(err.value.read())


def test_malformed_json(base_url):
    _expect_400(base_url, "/classify", b"{nope")


def test_missing_pair_field(base_url):
    _expect_400(base_url, "/pair", b'{"source": "x = input();"}')


def test_bad_item_shape(base_url):
    _expect_400(base_url, "/classify", b'{"items": [{"code": 5}]}')


def test_unknown_endpoint(base_url):
    with pytest.raises(urllib.error.HTTPError) as err:
        post(base_url, "/predict", b"{}")
    assert err.value.code == 404


def test_identical_requests_identical_responses(base_url):
    payload = golden("classify_request.json")
    first = post(base_url, "/classify", payload)
    second = post(base_url, "/classify", payload)
    assert first == second
