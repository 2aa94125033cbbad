# api/cohomology.py

from http.server import BaseHTTPRequestHandler
from urllib.parse import parse_qs, urlparse
import json
import logging

from cli import JobSpec, JobSpecError, cmd_cohomology

logger = logging.getLogger("api.cohomology")
logger.setLevel(logging.INFO)


class handler(BaseHTTPRequestHandler):
    def do_GET(self):
        """
        GET /api/cohomology?surface=F1&div=1,0[&oracle=cech]

        h⁰, h¹, h² of one line bundle.
        """
        params = {k: v[0] for k, v in parse_qs(urlparse(self.path).query).items()}
        try:
            spec = JobSpec(
                command="cohomology",
                surface=params.get("surface", ""),
                divisor=params.get("div", ""),
                oracle=params.get("oracle", "closed"),
                format="json",
            )
            spec.validate()
            result = json.loads(cmd_cohomology(spec))
            status = 200
            payload = {"status": "success", "source": "cohomology", **result}
        except JobSpecError as e:
            status = 400
            payload = {"status": "error", "source": "cohomology", "message": str(e)}
        except Exception as e:
            logger.exception("Error in /api/cohomology: %s", e)
            status = 500
            payload = {"status": "error", "source": "cohomology", "message": str(e)}

        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)
