"""
Logging setup shared by the CLI and the HTTP service.
"""

import logging
from datetime import datetime
from pathlib import Path
from typing import Optional

try:
    from pythonjsonlogger.json import JsonFormatter
except ImportError:  # python-json-logger < 3.1
    from pythonjsonlogger.jsonlogger import JsonFormatter

CONSOLE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
JSON_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s %(module)s %(funcName)s %(lineno)d"


def _json_formatter() -> JsonFormatter:
    return JsonFormatter(
        JSON_FORMAT,
        rename_fields={
            "asctime": "timestamp",
            "levelname": "level",
            "funcName": "function",
            "lineno": "line",
        },
    )


def configure_logging(
    level: str = "INFO",
    fmt: str = "console",
    logs_dir: Optional[str] = None,
) -> logging.Logger:
    """
    Install handlers on the root logger.

    Args:
        level: Log level name
        fmt: "console" for plain text, "json" for JSON lines
        logs_dir: When set, also write JSON lines to a dated file there

    Returns:
        The configured root logger
    """
    root = logging.getLogger()
    root.setLevel(getattr(logging, level.upper(), logging.INFO))
    root.handlers.clear()

    console_handler = logging.StreamHandler()
    if fmt == "json":
        console_handler.setFormatter(_json_formatter())
    else:
        console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    root.addHandler(console_handler)

    if logs_dir:
        path = Path(logs_dir)
        path.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(path / f"quench_{datetime.now().strftime('%Y%m%d')}.log")
        file_handler.setFormatter(_json_formatter())
        root.addHandler(file_handler)

    return root
