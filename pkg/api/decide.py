# api/decide.py

from http.server import BaseHTTPRequestHandler
from urllib.parse import parse_qs, urlparse
import json
import logging

from cli import JobSpec, JobSpecError, cmd_decide

logger = logging.getLogger("api.decide")
logger.setLevel(logging.INFO)


class handler(BaseHTTPRequestHandler):
    def do_GET(self):
        """
        GET /api/decide?surface=F0&bundle=ext:0,0/2,-1%230[&against=sum:...]

        Splitting verdict plus the CLI exit code it corresponds to.
        """
        params = {k: v[0] for k, v in parse_qs(urlparse(self.path).query).items()}
        try:
            spec = JobSpec(
                command="decide",
                surface=params.get("surface", ""),
                bundle=params.get("bundle", ""),
                against=params.get("against", ""),
                oracle=params.get("oracle", "closed"),
                format="json",
            )
            spec.validate()
            text, code = cmd_decide(spec)
            status = 200
            payload = {"status": "success", "source": "decide", "exit_code": code, **json.loads(text)}
        except JobSpecError as e:
            status = 400
            payload = {"status": "error", "source": "decide", "message": str(e)}
        except Exception as e:
            logger.exception("Error in /api/decide: %s", e)
            status = 500
            payload = {"status": "error", "source": "decide", "message": str(e)}

        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)
