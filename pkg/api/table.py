# api/table.py

from http.server import BaseHTTPRequestHandler
from urllib.parse import parse_qs, urlparse
import json
import logging

from cli import JobSpec, JobSpecError, cmd_table

logger = logging.getLogger("api.table")
logger.setLevel(logging.INFO)


class handler(BaseHTTPRequestHandler):
    def do_GET(self):
        """
        GET /api/table?surface=F2&bundle=ext:0,-2/0,0%230&window=-2,2,-2,2

        Cohomology table of a rank-2 bundle (same JSON as `cli.py table`).
        The `#` of a cocycle seed must be sent URL-encoded as %23.
        """
        params = {k: v[0] for k, v in parse_qs(urlparse(self.path).query).items()}
        try:
            spec = JobSpec(
                command="table",
                surface=params.get("surface", ""),
                bundle=params.get("bundle", ""),
                window=params.get("window", ""),
                oracle=params.get("oracle", "closed"),
                format="json",
            )
            spec.validate()
            status = 200
            payload = {"status": "success", "source": "table", "table": json.loads(cmd_table(spec))}
        except JobSpecError as e:
            status = 400
            payload = {"status": "error", "source": "table", "message": str(e)}
        except Exception as e:
            logger.exception("Error in /api/table: %s", e)
            status = 500
            payload = {"status": "error", "source": "table", "message": str(e)}

        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)
