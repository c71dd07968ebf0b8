"""reduce: normalize a quiver and report how it decomposes."""
import argparse
import json

from radcount.commands.common import add_json_flag, build_request, emit, emit_json
from radcount.graph.graph import normalize
from radcount.graph.quiver import dump_quiver, load_quiver, quiver_to_file
from radcount.graph.state import Instance, ReductionStep, ReductionTrace
from radcount.schemas.requests import ReduceRequest
from radcount.schemas.responses import LeafOut, ReductionReport, ReductionStepOut


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("reduce", help="Apply the count-preserving rewrite strategy")
    parser.add_argument("--quiver", required=True, help="Quiver JSON file")
    parser.add_argument("--show-steps", dest="show_steps", action="store_true", help="Print every applied rule")
    add_json_flag(parser)
    parser.set_defaults(handler=run)


def _instance_out(instance: Instance) -> dict:
    return quiver_to_file(*instance).model_dump(mode="json")


def _step_out(step: ReductionStep) -> ReductionStepOut:
    return ReductionStepOut(
        rule=step.rule.value,
        detail=step.detail,
        before=_instance_out(step.before),
        after=[_instance_out(after) for after in step.after],
    )


def build_report(trace: ReductionTrace, show_steps: bool) -> ReductionReport:
    return ReductionReport(
        summary=trace.summary,
        leaves=[
            LeafOut(classification=leaf.classification.label, quiver=_instance_out((leaf.quiver, leaf.d)))
            for leaf in trace.leaves
        ],
        steps=[_step_out(step) for step in trace.steps] if show_steps else None,
    )


def _format_detail(detail: dict) -> str:
    return " ".join(f"{key}={json.dumps(value, separators=(',', ':'))}" for key, value in detail.items())


def run(args: argparse.Namespace) -> int:
    request = build_request(ReduceRequest, args)
    quiver, d = load_quiver(request.quiver)
    trace = normalize(quiver, d)

    if request.json_output:
        emit_json(build_report(trace, request.show_steps))
        return 0

    emit(trace.summary)
    if request.show_steps:
        for number, step in enumerate(trace.steps, start=1):
            emit(f"{number}. {step.rule.value} {_format_detail(step.detail)}".rstrip())
            emit(f"   before: {dump_quiver(*step.before)}")
            for after in step.after:
                emit(f"   after:  {dump_quiver(*after)}")
        for leaf in trace.leaves:
            emit(f"leaf {leaf.classification.label}: {dump_quiver(leaf.quiver, leaf.d)}")
    return 0
