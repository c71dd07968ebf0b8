"""verify: randomized metamorphic suites and the cache audit."""
import argparse

from radcount.clients.cache import ResultCache
from radcount.commands.common import add_engine_flags, add_json_flag, emit, emit_json, make_counter
from radcount.schemas.errors import InvalidRequestError
from radcount.schemas.requests import VerifyRequest
from radcount.schemas.responses import SuiteReport
from radcount.services.verification import VerificationSuites


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("verify", help="Run a verification suite or audit the cache")
    parser.add_argument(
        "--suite", choices=["ops", "oracle", "burnside", "injectivity", "positivity"]
    )
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument(
        "--q",
        dest="qs",
        help="Comma-separated field sizes (default 2,3; positivity uses every supported size)",
    )
    parser.add_argument(
        "--cache",
        nargs="?",
        const="",
        help="Audit the result cache (default path: RADCOUNT_CACHE)",
    )
    add_engine_flags(parser)
    add_json_flag(parser)
    parser.set_defaults(handler=run)


def _request(args: argparse.Namespace) -> VerifyRequest:
    values = {
        name: getattr(args, name)
        for name in ("suite", "trials", "seed", "qs", "jobs", "budget", "json_output")
        if getattr(args, name, None) is not None
    }
    if args.cache is not None:
        values["audit_cache"] = True
        if args.cache:
            values["cache"] = args.cache
    return VerifyRequest(**values)


def format_report(report: SuiteReport) -> list[str]:
    lines = []
    for trial in report.trials:
        status = "SKIP" if trial.skipped else ("PASS" if trial.passed else "FAIL")
        lines.append(f"{status} {trial.name} {trial.detail}".rstrip())
    failed = sum(not t.passed for t in report.trials)
    skipped = sum(t.skipped for t in report.trials)
    passed = len(report.trials) - failed - skipped
    lines.append(f"{report.suite}: {passed} passed, {failed} failed, {skipped} skipped")
    if report.reproducer:
        lines.append(f"reproducer: {report.reproducer}")
    return lines


def run(args: argparse.Namespace) -> int:
    """Exit 0 iff every trial passes (skips count as passing)."""
    request = _request(args)
    suites = VerificationSuites(make_counter(request))
    if request.audit_cache:
        cache = ResultCache(request.cache)
        if not cache.enabled:
            raise InvalidRequestError("no cache to audit: pass --cache PATH or set RADCOUNT_CACHE")
        report = suites.audit_cache(cache, seed=request.seed)
    else:
        report = suites.run(request.suite, request.trials, request.seed, request.qs)

    if request.json_output:
        emit_json(report)
    else:
        for line in format_report(report):
            emit(line)
    return 0 if report.passed else 1
