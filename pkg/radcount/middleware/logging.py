"""Structured per-command logging with run ids."""
import argparse
import logging
import sys
import time
import uuid
from typing import Callable

from pydantic import ValidationError

from radcount.config import settings
from radcount.schemas.errors import RadcountError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Route all records to standard error so standard output carries only results."""
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper()),
        format=LOG_FORMAT,
        stream=sys.stderr,
    )


class CommandLoggingMiddleware:
    """Wraps a command handler with start/completion/failure records."""

    def __init__(self, service: str = "radcount"):
        self.service = service

    def dispatch(self, args: argparse.Namespace, call_next: Callable[[argparse.Namespace], int]) -> int:
        """Run call_next(args), logging around it; exceptions are logged and re-raised."""
        start_time = time.time()
        run_id = str(uuid.uuid4())
        args.run_id = run_id
        command = getattr(args, "command", None) or "unknown"

        logger.info(
            "Command started",
            extra={"run_id": run_id, "command": command, "service": self.service},
        )
        try:
            exit_code = call_next(args)
            duration_ms = int((time.time() - start_time) * 1000)
            logger.info(
                "Command completed",
                extra={
                    "run_id": run_id,
                    "command": command,
                    "exit_code": exit_code,
                    "duration_ms": duration_ms,
                    "service": self.service,
                },
            )
            return exit_code
        except Exception as e:
            duration_ms = int((time.time() - start_time) * 1000)
            logger.error(
                "Command failed",
                extra={
                    "run_id": run_id,
                    "command": command,
                    "duration_ms": duration_ms,
                    "error": str(e),
                    "service": self.service,
                },
                exc_info=not isinstance(e, (RadcountError, ValidationError)),
            )
            raise
