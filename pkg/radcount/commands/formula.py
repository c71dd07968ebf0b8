"""formula: closed-form count for equioriented A3 with multiplicities (l, d, m)."""
import argparse

from radcount.commands.common import add_json_flag, build_request, emit, emit_json
from radcount.schemas.requests import FormulaRequest
from radcount.schemas.responses import FormulaResponse
from radcount.services.closed_form import a3_count_poly


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("formula", help="Print the A3 closed-form polynomial")
    parser.add_argument("--l", type=int, required=True)
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--q", type=int, help="Also evaluate at this field size")
    add_json_flag(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    request = build_request(FormulaRequest, args)
    poly = a3_count_poly(request.l, request.d, request.m)
    value = None
    if request.q is not None:
        value = poly.evaluate(request.q)

    if request.json_output:
        emit_json(
            FormulaResponse(
                l=request.l,
                d=request.d,
                m=request.m,
                polynomial=str(poly),
                coefficients=poly.to_json_map(),
                q=request.q,
                value=str(value) if value is not None else None,
            )
        )
        return 0

    emit(str(poly))
    if value is not None:
        emit(str(value))
    return 0
