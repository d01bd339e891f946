"""Command-line harness over the operator library.

Commands::

    volterra check      --operator FILE --face 1..5 [--samples N --seed S --margin EPS]
    volterra pair-check --operator FILE --face 1..5 [--samples N --seed S]
    volterra apply      --operator FILE --point FILE
    volterra simulate   --operator FILE --point FILE --steps T
    volterra invert     --operator FILE --point FILE [--tol T --max-iter N --damping L]
    volterra builtin    --name example31|example32|sine [--dimension N]

All inputs and reports are JSON (trajectories are JSON Lines).  Exit
codes: 0 success/pass, 1 validation or condition failure, 2
non-convergence, 3 malformed input.  VOLTERRA_SEED overrides the
default seed; an explicit --seed wins over both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .cubic import (
    example31,
    example31_tensor,
    example32,
    operator_from_tensor,
    sine_example,
    tensor_to_obj,
    validate_tensor,
)
from .dynamics import iterate
from .errors import NonConvergence, TrajectoryError, ValidationError
from .generating import (
    VolterraOperator,
    apply,
    check_conditions,
    check_pair_condition,
    compose,
    convex_combination,
)
from .inversion import InversionResult, invert_fixed_point, invert_triangular
from .quadratic import quadratic_operator, validate_matrix
from .simplex import FaceSpec, SparsePoint, point_from_obj, point_to_obj


class MalformedInput(Exception):
    """Unreadable or structurally invalid input; maps to exit code 3."""


def _load_json(path: str):
    try:
        with Path(path).open("r", encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read JSON from {path}: {exc}") from exc


def build_operator(obj) -> VolterraOperator:
    """Construct an operator from a tagged spec object.

    Validation failures of the payload (non-skew matrix, bad tensor,
    ...) propagate as ValidationError; structural problems (unknown
    tag, missing fields) raise MalformedInput.
    """
    try:
        tag = obj["type"]
        if tag == "quadratic":
            return quadratic_operator(validate_matrix(obj["matrix"]))
        if tag == "cubic_tensor":
            return operator_from_tensor(validate_tensor(obj["triples"]))
        if tag == "example31":
            dimension = obj.get("dimension")
            return example31(None if dimension is None else int(dimension))
        if tag == "example32":
            return example32()
        if tag == "sine":
            return sine_example()
        if tag == "compose":
            first, second = obj["operators"]
            return compose(build_operator(first), build_operator(second))
        if tag == "convex":
            first, second = obj["operators"]
            return convex_combination(
                build_operator(first), build_operator(second), float(obj["lambda"])
            )
        raise MalformedInput(f"unknown operator type {tag!r}")
    except ValidationError:
        raise
    except MalformedInput:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad operator spec: {exc}") from exc


def _load_operator(path: str) -> tuple[dict, VolterraOperator]:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise MalformedInput("operator spec must be a JSON object")
    return obj, build_operator(obj)


def _load_point(path: str) -> SparsePoint:
    obj = _load_json(path)
    try:
        return point_from_obj(obj)
    except (ValidationError, ValueError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"bad point file {path}: {exc}") from exc


def _parse_face(text: str) -> FaceSpec:
    try:
        return FaceSpec.parse(text)
    except ValueError as exc:
        raise MalformedInput(f"bad face {text!r}: {exc}") from exc


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("VOLTERRA_SEED", "0"))


def _emit(payload, output: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


def cmd_check(args) -> int:
    _, op = _load_operator(args.operator)
    face = _parse_face(args.face)
    seed = _resolve_seed(args)
    report = check_conditions(
        op, face, samples=args.samples, seed=seed, margin=args.margin
    )
    payload = {
        "command": "check",
        "version": __version__,
        "operator": op.label,
        **report.to_obj(),
    }
    _emit(payload, args.output)
    return 0 if report.all_passed else 1


def cmd_pair_check(args) -> int:
    _, op = _load_operator(args.operator)
    face = _parse_face(args.face)
    seed = _resolve_seed(args)
    report = check_pair_condition(op, face, samples=args.samples, seed=seed)
    payload = {
        "command": "pair-check",
        "version": __version__,
        "operator": op.label,
        **report.to_obj(),
    }
    _emit(payload, args.output)
    return 0 if report.passed else 1


def cmd_apply(args) -> int:
    _, op = _load_operator(args.operator)
    x = _load_point(args.point)
    image = apply(op, x)
    _emit(point_to_obj(image), args.output)
    return 0


def cmd_simulate(args) -> int:
    _, op = _load_operator(args.operator)
    x = _load_point(args.point)
    trajectory = iterate(op, x, args.steps)
    lines = [json.dumps(record) for record in trajectory.to_records()]
    if args.output:
        Path(args.output).write_text("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)
    return 0


def cmd_invert(args) -> int:
    obj, op = _load_operator(args.operator)
    y = _load_point(args.point)
    triangular = obj.get("type") == "example32"
    try:
        if triangular:
            result = invert_triangular(y, residual_tol=args.tol)
        else:
            result = invert_fixed_point(
                op, y, tol=args.tol, max_iter=args.max_iter, damping=args.damping
            )
    except NonConvergence as exc:
        result = InversionResult(
            preimage=exc.best,
            residual=exc.residual,
            iterations=exc.iterations,
            method="triangular" if triangular else "fixed_point",
            converged=False,
        )
        _emit({"version": __version__, **result.to_obj()}, args.output)
        return 2
    _emit({"version": __version__, **result.to_obj()}, args.output)
    return 0


def cmd_builtin(args) -> int:
    if args.name == "example31":
        spec: dict = {"type": "example31"}
        if args.dimension is not None:
            spec["dimension"] = args.dimension
            spec["tensor"] = tensor_to_obj(example31_tensor(args.dimension))
    elif args.name == "example32":
        spec = {"type": "example32"}
    elif args.name == "sine":
        spec = {"type": "sine"}
    else:
        raise MalformedInput(f"unknown builtin {args.name!r}")
    _emit(spec, args.output)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # malformed command line maps to exit 3
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(3)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="volterra", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, face=False, point=False, sampling=False):
        p.add_argument("--operator", required=True, help="operator spec JSON file")
        if face:
            p.add_argument("--face", required=True, help='face, e.g. "1..5" or "1,3,7"')
        if point:
            p.add_argument("--point", required=True, help="point JSON file")
        if sampling:
            p.add_argument("--samples", type=int, default=1000)
            p.add_argument("--seed", type=int, default=None)
        p.add_argument("--output", default=None, help="write the report here instead of stdout")

    check = sub.add_parser("check", help="sampled validity-condition check on a face")
    common(check, face=True, sampling=True)
    check.add_argument("--margin", type=float, default=1e-9)
    check.set_defaults(func=cmd_check)

    pair = sub.add_parser("pair-check", help="sampled pairwise bijectivity condition")
    common(pair, face=True, sampling=True)
    pair.set_defaults(func=cmd_pair_check)

    app = sub.add_parser("apply", help="apply the operator to a point")
    common(app, point=True)
    app.set_defaults(func=cmd_apply)

    sim = sub.add_parser("simulate", help="iterate the operator, emitting JSONL")
    common(sim, point=True)
    sim.add_argument("--steps", type=int, default=100)
    sim.set_defaults(func=cmd_simulate)

    inv = sub.add_parser("invert", help="find the preimage of a point")
    common(inv, point=True)
    inv.add_argument("--tol", type=float, default=1e-10)
    inv.add_argument("--max-iter", type=int, default=10_000)
    inv.add_argument("--damping", type=float, default=0.5)
    inv.set_defaults(func=cmd_invert)

    builtin = sub.add_parser("builtin", help="emit a builtin operator spec")
    builtin.add_argument("--name", required=True)
    builtin.add_argument("--dimension", type=int, default=None)
    builtin.add_argument("--output", default=None)
    builtin.set_defaults(func=cmd_builtin)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, TrajectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
