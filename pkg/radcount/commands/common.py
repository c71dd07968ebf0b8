"""Helpers shared by the subcommands."""
import argparse
import sys
from typing import Type, TypeVar

from pydantic import BaseModel

from radcount.services.counting import PairCounter

RequestT = TypeVar("RequestT", bound=BaseModel)


def build_request(model: Type[RequestT], args: argparse.Namespace) -> RequestT:
    """Validate parsed arguments against a request model; unset flags fall back to model defaults."""
    values = {
        name: getattr(args, name)
        for name in model.model_fields
        if getattr(args, name, None) is not None
    }
    return model(**values)


def add_engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--jobs", type=int, help="Worker processes (default: RADCOUNT_JOBS or CPU count)")
    parser.add_argument("--budget", type=int, help="Maximum enumerated elements per count")


def add_json_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", dest="json_output", action="store_true", help="Emit JSON")


def make_counter(request: BaseModel) -> PairCounter:
    return PairCounter(budget=getattr(request, "budget", None), jobs=getattr(request, "jobs", None))


def emit(text: str) -> None:
    sys.stdout.write(text + "\n")


def emit_json(model: BaseModel) -> None:
    emit(model.model_dump_json(indent=2))
