# logging_utils.py
"""
Lightweight structured logging helper shared by the engine, the CLI and the api handlers.

Events go to the "hirzebruch_split" logger as one JSON line each, so stdout stays
reserved for command output (tables and verdicts must be byte-stable).
"""

from __future__ import annotations

import json
import logging
import os
from datetime import datetime, timezone
from typing import Any, Dict

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()

logger = logging.getLogger("hirzebruch_split")
logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))


def configure_logging() -> None:
    """
    Attach a stderr handler once. Called by the CLI entrypoint; library code
    never configures handlers itself.
    """
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(
            level=getattr(logging, LOG_LEVEL, logging.INFO),
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)


def log_event(source: str, event: str, **kwargs: Any) -> None:
    """
    Log a structured event. Safe no-op if anything goes wrong.

    Example:
        log_event("cech_engine", "truncation_unstable", surface="F2", bound=9)
    """
    try:
        payload: Dict[str, Any] = {
            "ts": datetime.now(timezone.utc).isoformat(),
            "source": source,
            "event": event,
        }
        if kwargs:
            payload.update({k: _jsonable(v) for k, v in kwargs.items()})

        logger.info("[EVENT] %s", json.dumps(payload, ensure_ascii=False))
    except Exception as e:
        # Never break a computation because of logging
        logger.warning("log_event failed: %s", e)
