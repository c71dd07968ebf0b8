"""poly: interpolate exact counts as a polynomial in q."""
import argparse
import logging

from radcount.commands.common import (
    add_engine_flags,
    add_json_flag,
    build_request,
    emit,
    emit_json,
    make_counter,
)
from radcount.graph.quiver import load_quiver
from radcount.schemas.errors import InsufficientSamplesError
from radcount.schemas.requests import PolyRequest
from radcount.schemas.responses import FitReportOut
from radcount.services.poly_lab import (
    fit_degree_bound,
    interpolate,
    sample_counts,
    screen_conjectures,
)

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("poly", help="Fit counts at several q to a polynomial")
    parser.add_argument("--quiver", required=True, help="Quiver JSON file")
    parser.add_argument("--qs", required=True, help="Comma-separated field sizes, e.g. 2,3,4,5")
    parser.add_argument("--mode", choices=["radical", "overline", "weakened"])
    parser.add_argument("--l", type=int)
    parser.add_argument("--m", type=int)
    parser.add_argument("--engine", choices=["brute", "dispatch"])
    parser.add_argument("--screen", action="store_true", help="Fit radical and overline counts together")
    add_engine_flags(parser)
    add_json_flag(parser)
    parser.set_defaults(handler=run)


def format_fit(fit: FitReportOut) -> list[str]:
    """Table of samples and hold-out checks, ending with the polynomial or NO FIT."""
    lines = [f"mode {fit.mode}, degree bound {fit.degree_bound}", "q\tcount"]
    lines += [f"{q}\t{value}" for q, value in fit.samples]
    for point in fit.holdout:
        status = "OK" if point.match else "MISMATCH"
        lines.append(f"holdout q={point.q}: predicted {point.predicted}, actual {point.actual} {status}")
    if fit.polynomial is None:
        lines.append("NO FIT")
    else:
        lines.append(fit.polynomial)
    return lines


def run(args: argparse.Namespace) -> int:
    """
    Sample, fit and print; exit 1 when a hold-out point contradicts the fit.

    Args:
        args: Parsed poly arguments

    Returns:
        Exit code
    """
    request = build_request(PolyRequest, args)
    quiver, d = load_quiver(request.quiver)
    counter = make_counter(request)

    if request.screen:
        report = screen_conjectures(quiver, d, request.qs, counter=counter)
        if request.json_output:
            emit_json(report)
        else:
            emit(f"canonical hash {report.canonical_hash}")
            for fit in report.fits:
                for line in format_fit(fit):
                    emit(line)
            emit(report.verdict)
        return 0 if all(fit.polynomial is not None for fit in report.fits) else 1

    bound = fit_degree_bound(quiver, d, request.mode, request.l, request.m)
    if len(request.qs) < bound + 2:
        raise InsufficientSamplesError(bound + 2, len(request.qs))

    samples = sample_counts(
        quiver, d, request.qs, request.mode, request.l, request.m, request.engine, counter
    )
    fit = interpolate(samples, bound, request.mode).to_output()
    if request.json_output:
        emit_json(fit)
    else:
        for line in format_fit(fit):
            emit(line)
    return 0 if fit.polynomial is not None else 1
