"""HTTP endpoints for the classify/pair protocol.

POST /classify {"items": [{"id": int, "code": str}]}
    -> 200 {"verdicts": [{"id": int, "label": "source|sink|none", "score": float}]}
POST /pair {"source": str, "sink": str}
    -> 200 {"match": bool, "score": float}

Malformed bodies get a 400 with {"error": reason}. Handling is
stateless, so the threading server serves concurrent requests safely.
"""

from __future__ import annotations

import argparse
import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from model_server.model import KeywordModel


class ProtocolError(Exception):
    pass


def classify_payload(model: KeywordModel, payload) -> dict:
    if not isinstance(payload, dict) or not isinstance(payload.get("items"), list):
        raise ProtocolError("body must be {\"items\": [...]}")
    verdicts = []
    for item in payload["items"]:
        if (
            not isinstance(item, dict)
            or not isinstance(item.get("id"), int)
            or isinstance(item.get("id"), bool)
            or not isinstance(item.get("code"), str)
        ):
            raise ProtocolError("each item needs an int \"id\" and a string \"code\"")
        label, score = model.classify_one(item["code"])
        verdicts.append({"id": item["id"], "label": label, "score": score})
    return {"verdicts": verdicts}


def pair_payload(model: KeywordModel, payload) -> dict:
    if (
        not isinstance(payload, dict)
        or not isinstance(payload.get("source"), str)
        or not isinstance(payload.get("sink"), str)
    ):
        raise ProtocolError("body must be {\"source\": str, \"sink\": str}")
    match, score = model.pair_matches(payload["source"], payload["sink"])
    return {"match": match, "score": score}


class _Handler(BaseHTTPRequestHandler):
    model: KeywordModel  # set by create_server

    def _send(self, status: int, body: dict) -> None:
        data = json.dumps(body, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_POST(self):
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length))
        except (ValueError, json.JSONDecodeError):
            self._send(400, {"error": "request body is not valid JSON"})
            return
        try:
            if self.path == "/classify":
                self._send(200, classify_payload(self.model, payload))
            elif self.path == "/pair":
                self._send(200, pair_payload(self.model, payload))
            else:
                self._send(404, {"error": f"no such endpoint {self.path}"})
        except ProtocolError as err:
            self._send(400, {"error": str(err)})

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass


def create_server(
    host: str = "127.0.0.1", port: int = 0, model: KeywordModel | None = None
) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"model": model or KeywordModel()})
    return ThreadingHTTPServer((host, port), handler)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="model-server", description="Source/sink classifier service."
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8731)
    args = parser.parse_args(argv)
    server = create_server(args.host, args.port)
    host, port = server.server_address[:2]
    print(f"model-server listening on http://{host}:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
