"""count: exact number of commuting pairs for one quiver and field."""
import argparse
import logging

from radcount.clients.cache import ResultCache, cache_key
from radcount.commands.common import (
    add_engine_flags,
    add_json_flag,
    build_request,
    emit,
    emit_json,
    make_counter,
)
from radcount.graph.graph import dispatch_count
from radcount.graph.quiver import load_quiver
from radcount.schemas.requests import CountRequest
from radcount.schemas.responses import CountResult

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("count", help="Count commuting pairs exactly")
    parser.add_argument("--quiver", required=True, help="Quiver JSON file")
    parser.add_argument("--q", type=int, required=True, help="Field size")
    parser.add_argument("--mode", choices=["radical", "overline", "weakened"])
    parser.add_argument("--l", type=int, help="Radical power of the pair space (weakened)")
    parser.add_argument("--m", type=int, help="Radical power of the commutator (weakened)")
    parser.add_argument("--engine", choices=["brute", "dispatch", "naive"])
    parser.add_argument("--cache", help="Result cache file (default: RADCOUNT_CACHE)")
    add_engine_flags(parser)
    add_json_flag(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    """
    Count, print the decimal value and record it in the cache.

    Args:
        args: Parsed count arguments

    Returns:
        Exit code
    """
    request = build_request(CountRequest, args)
    quiver, d = load_quiver(request.quiver)
    params = {"l": request.l, "m": request.m} if request.mode == "weakened" else {}

    cache = ResultCache(request.cache)
    cached = cache.get(cache_key(quiver, d, request.mode, params, request.q)) if cache.enabled else None
    if cached is not None:
        logger.info("Cache hit", extra={"key": cached.key, "mode": cached.mode, "q": cached.q})
        result = CountResult(
            value=int(cached.value),
            q=cached.q,
            dim_enumerated=0,
            mode=cached.mode,
            l=request.l,
            m=request.m,
            engine="cache",
            elapsed=0.0,
        )
    else:
        counter = make_counter(request)
        if request.engine == "dispatch":
            result = dispatch_count(quiver, d, request.q, counter=counter)
        elif request.engine == "naive":
            result = counter.naive_pair_count(quiver, d, request.q, request.mode, request.l, request.m)
            result = result.model_copy(update={"mode": request.mode})
        else:
            result = counter.count(quiver, d, request.q, request.mode, request.l, request.m)
        cache.put(quiver, d, result, params)

    if request.json_output:
        emit_json(result)
    else:
        emit(str(result.value))
    return 0
