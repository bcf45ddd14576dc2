"""Serve mode: the remote-scorer wire protocol over HTTP.

POST a JSON body {"pairs": [{"premise": ..., "hypothesis": ...}, ...]}
and receive {"scores": [{"entail": e, "contradict": c, "neutral": n},
...]}, one triple per pair in request order. Malformed requests get a
4xx with a structured {"error": ...} body. Scores are identical to file
mode for identical pairs since both run the same fixed-weights model.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from .model_runner import AdapterConfig, NLIScorer


class _BadRequest(ValueError):
    pass


def parse_request_body(body: bytes) -> list[tuple[str, str]]:
    try:
        payload = json.loads(body)
    except json.JSONDecodeError as exc:
        raise _BadRequest(f"body is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "pairs" not in payload:
        raise _BadRequest('body must be an object with a "pairs" list')
    raw_pairs = payload["pairs"]
    if not isinstance(raw_pairs, list):
        raise _BadRequest('"pairs" must be a list')
    pairs = []
    for i, entry in enumerate(raw_pairs):
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("premise"), str)
            or not isinstance(entry.get("hypothesis"), str)
        ):
            raise _BadRequest(f'pair {i} must carry string "premise" and "hypothesis"')
        pairs.append((entry["premise"], entry["hypothesis"]))
    return pairs


def make_handler(scorer: NLIScorer):
    class ScorerHandler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, status: int, payload: dict) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            if self.path == "/health":
                self._send_json(200, {"status": "ok", "model": scorer.config.model})
            else:
                self._send_json(404, {"error": {"message": "POST /score with a pairs body"}})

        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            body = self.rfile.read(length)
            try:
                pairs = parse_request_body(body)
            except _BadRequest as exc:
                self._send_json(400, {"error": {"message": str(exc)}})
                return
            try:
                triples = scorer.score_batch(pairs)
            except Exception as exc:  # surface scoring failures as 500s
                self._send_json(500, {"error": {"message": f"scoring failed: {exc}"}})
                return
            self._send_json(
                200,
                {
                    "scores": [
                        {"entail": t[0], "contradict": t[1], "neutral": t[2]}
                        for t in triples
                    ]
                },
            )

    return ScorerHandler


def build_server(
    config: AdapterConfig, scorer: Optional[NLIScorer] = None, host: str = "127.0.0.1"
) -> ThreadingHTTPServer:
    """A ready-to-serve HTTP server; callers own serve_forever/shutdown."""
    scorer = scorer or NLIScorer(config)
    return ThreadingHTTPServer((host, config.port), make_handler(scorer))


def serve(config: AdapterConfig, host: str = "0.0.0.0") -> None:
    server = build_server(config, host=host)
    try:
        server.serve_forever()
    finally:
        server.server_close()
