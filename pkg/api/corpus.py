# api/corpus.py

from http.server import BaseHTTPRequestHandler
import json
import logging

from cli import run_corpus

logger = logging.getLogger("api.corpus")
logger.setLevel(logging.INFO)


class handler(BaseHTTPRequestHandler):
    def do_GET(self):
        """
        GET /api/corpus

        Runs every pinned regression instance and returns per-instance results.
        """
        try:
            report = run_corpus()
            status = 200 if report["status"] == "success" else 207
            payload = {
                "status": report["status"],
                "source": "corpus",
                "message": "Ran all pinned instances (see per-instance results).",
                "instances": report["instances"],
            }
        except Exception as e:
            logger.exception("Error in /api/corpus: %s", e)
            status = 500
            payload = {"status": "error", "source": "corpus", "message": str(e)}

        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)
