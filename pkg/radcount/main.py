"""Command-line entry point for radcount."""
import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from radcount.commands import count, formula, poly, reduce, verify
from radcount.config import settings
from radcount.middleware.logging import CommandLoggingMiddleware, configure_logging
from radcount.schemas.errors import RadcountError, create_error_response

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radcount",
        description="Exact counts of commuting pairs in radicals of quiver endomorphism algebras",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    parser.add_argument("--log-level", dest="log_level", help="Logging level (default: RADCOUNT_LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (count, reduce, poly, verify, formula):
        command.register(subparsers)
    return parser


def _report_error(args: argparse.Namespace, detail: str, exit_code: int, code: str, errors=None) -> int:
    if getattr(args, "json_output", False):
        body = create_error_response(detail=detail, exit_code=exit_code, code=code, errors=errors)
        sys.stdout.write(json.dumps(body, indent=2) + "\n")
    else:
        sys.stderr.write(f"error: {detail}\n")
    return exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the subcommand and map failures to exit codes.

    0 success, 1 verification failure or internal error, 2 invalid input,
    3 budget or path cap exceeded, 4 too few samples.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    middleware = CommandLoggingMiddleware(service=settings.app_name)
    try:
        return middleware.dispatch(args, args.handler)
    except ValidationError as e:
        errors = json.loads(e.json(include_url=False))
        detail = "; ".join(error["msg"] for error in errors)
        return _report_error(args, detail, 2, "VALIDATION_ERROR", errors)
    except RadcountError as e:
        return _report_error(args, e.detail, e.exit_code, e.code)
    except Exception as e:
        logger.error(f"Unhandled exception: {e}", exc_info=True)
        return _report_error(args, "internal error", 1, "INTERNAL_ERROR")


if __name__ == "__main__":
    sys.exit(main())
