"""Command-line front end: read a problem file, run one stage, write a report.

Subcommands ``closure``, ``analyze`` and ``disintegrate`` all take a JSON
problem file. Complex matrices are nested lists of ``[re, im]`` pairs.
Reports are JSON with sorted keys and shortest round-trip floats, so equal
inputs, flags and tool version give equal bytes.

Exit codes: 0 success, 2 invalid input, 3 closure cap reached,
4 computed results contradict the equivalence theorem.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

import jsonschema
import jsonschema.exceptions
import numpy as np

from . import __version__, _backend
from .controllability import (
    IndirectProblem,
    analyze,
    build_generators,
    control_generates_su,
    disintegrate,
    is_completely_controllable,
)
from .errors import (
    ClosureCapError,
    DisintegrationFailure,
    HypothesisError,
    IndControlError,
    ValidationError,
)
from .lie import lie_closure
from .linalg import DEFAULT_TOL, BipartiteDims, DensityMatrix

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_INCONSISTENT = 4

SCHEMA_VERSION = 1

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _COMPLEX}}

PROBLEM_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "dims", "K", "L", "couplings", "control_algebra"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "dims": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n_s", "n_a"],
            "properties": {
                "n_s": {"type": "integer", "minimum": 2},
                "n_a": {"type": "integer", "minimum": 2},
            },
        },
        "K": _MATRIX,
        "L": _MATRIX,
        "couplings": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["S", "sigma"],
                "properties": {"S": _MATRIX, "sigma": _MATRIX},
            },
        },
        "control_algebra": {"type": "array", "items": _MATRIX},
        "tolerances": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"tol": {"type": "number", "exclusiveMinimum": 0}},
        },
        "seeds": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"seed": {"type": "integer", "minimum": 0}},
        },
    },
}

STATE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "rho"],
    "properties": {"schema_version": {"const": SCHEMA_VERSION}, "rho": _MATRIX},
}


# -- parsing -------------------------------------------------------------------


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def _finite_float(text):
    x = float(text)
    if not math.isfinite(x):
        raise ValueError(f"number {text} overflows to a non-finite value")
    return x


def _format_path(parts):
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def parse_json(text: str, schema: dict, source="<input>"):
    """Decode ``text`` and check it against ``schema``.

    Errors carry a locator: ``line:col`` for syntax problems, the field path
    for schema violations.
    """
    try:
        data = json.loads(text, parse_constant=_reject_constant, parse_float=_finite_float)
    except json.JSONDecodeError as e:
        raise ValidationError(f"invalid JSON: {e.msg}", f"{source}:{e.lineno}:{e.colno}") from None
    except ValueError as e:
        raise ValidationError(str(e), source) from None
    validator = jsonschema.Draft7Validator(schema)
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        raise ValidationError(err.message, f"{source}: {_format_path(err.absolute_path)}")
    return data


def matrix_from_json(rows, path) -> np.ndarray:
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValidationError(f"row has {len(row)} entries, matrix needs {n}", f"{path}[{i}]")
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=np.complex128)


def matrix_to_json(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def problem_from_json(data: dict, tol=None) -> IndirectProblem:
    dims = BipartiteDims(data["dims"]["n_s"], data["dims"]["n_a"])
    if tol is None:
        tol = data.get("tolerances", {}).get("tol", DEFAULT_TOL)
    couplings = tuple(
        (
            matrix_from_json(c["S"], f"couplings[{j}].S"),
            matrix_from_json(c["sigma"], f"couplings[{j}].sigma"),
        )
        for j, c in enumerate(data["couplings"])
    )
    control = tuple(
        matrix_from_json(b, f"control_algebra[{i}]") for i, b in enumerate(data["control_algebra"])
    )
    return IndirectProblem(
        dims,
        drift_k=matrix_from_json(data["K"], "K"),
        drift_l=matrix_from_json(data["L"], "L"),
        couplings=couplings,
        control_algebra=control,
        tol=tol,
    )


def problem_to_json(p: IndirectProblem, tol=None, seed=None) -> dict:
    """Inverse of :func:`problem_from_json`; ``tol`` and ``seed`` are optional extras."""
    out = {
        "schema_version": SCHEMA_VERSION,
        "dims": {"n_s": p.dims.n_s, "n_a": p.dims.n_a},
        "K": matrix_to_json(p.drift_k),
        "L": matrix_to_json(p.drift_l),
        "couplings": [{"S": matrix_to_json(s), "sigma": matrix_to_json(g)} for s, g in p.couplings],
        "control_algebra": [matrix_to_json(b) for b in p.control_algebra],
    }
    if tol is not None:
        out["tolerances"] = {"tol": tol}
    if seed is not None:
        out["seeds"] = {"seed": seed}
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _read(path):
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as e:
        raise ValidationError(f"cannot read file: {e.strerror}", path) from None


def _decode(raw, path):
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        raise ValidationError("file is not valid UTF-8", path) from None


# -- commands ------------------------------------------------------------------


class _Run:
    """Parsed inputs shared by every subcommand."""

    def __init__(self, args):
        raw = _read(args.input)
        self.digest = hashlib.sha256(raw).hexdigest()
        data = parse_json(_decode(raw, args.input), PROBLEM_SCHEMA, args.input)
        self.tol = args.tol if args.tol is not None else data.get("tolerances", {}).get("tol", DEFAULT_TOL)
        self.seed = args.seed if args.seed is not None else data.get("seeds", {}).get("seed", 0)
        self.max_dim = args.max_dim
        try:
            self.problem = problem_from_json(data, self.tol)
        except ValidationError as e:
            raise ValidationError(str(e), args.input) from None
        self.dims = self.problem.dims

    def header(self, command):
        return {
            "command": command,
            "tool": {"name": "indcontrol", "version": __version__, "backend": _backend.BACKEND},
            "input_sha256": self.digest,
            "dims": {"n_s": self.dims.n_s, "n_a": self.dims.n_a},
            "tol": self.tol,
        }


def cmd_closure(args):
    run = _Run(args)
    basis = lie_closure(build_generators(run.problem), run.tol, run.max_dim, run.dims)
    report = run.header("closure")
    report.update(
        algebra_dim=basis.dim,
        full_dim=run.dims.n**2 - 1,
        closure_depth=basis.depth_reached,
        completely_controllable=is_completely_controllable(basis, run.dims),
        max_dim=run.max_dim,
    )
    return report, EXIT_OK


def cmd_disintegrate(args):
    run = _Run(args)
    if not control_generates_su(run.problem, run.tol):
        raise ValidationError("control_algebra does not generate su(n_A); no disintegration", "control_algebra")
    basis = lie_closure(build_generators(run.problem), run.tol, run.max_dim, run.dims)
    sb = disintegrate(basis, run.dims, run.tol)
    blocks = sb.block_dims()
    report = run.header("disintegrate")
    report.update(
        algebra_dim=basis.dim,
        closure_depth=basis.depth_reached,
        block_dims=blocks,
        block_sum=sb.total(),
        s=sb.s,
        d_s=run.dims.d_s,
        case_label=str(sb.case_label),
    )
    # disintegrate() already raises on a mismatch; this guards the report itself
    if report["block_sum"] != report["algebra_dim"]:
        raise DisintegrationFailure(f"block sum {sb.total()} != dim L {basis.dim}")
    return report, EXIT_OK


def _load_rho_a(source, n_a, tol):
    if source == "mixed":
        return None, "mixed"
    raw = _read(source)
    data = parse_json(_decode(raw, source), STATE_SCHEMA, source)
    try:
        mat = matrix_from_json(data["rho"], "rho")
        if mat.shape[0] != n_a:
            raise ValidationError(f"state has size {mat.shape[0]}, expected n_a = {n_a}", "rho")
        rho = DensityMatrix(mat, tol=max(tol, 1e-12))
    except ValidationError as e:
        msg = str(e) if e.path else f"rho: {e}"
        raise ValidationError(msg, source) from None
    return rho, {"sha256": hashlib.sha256(raw).hexdigest()}


def cmd_analyze(args):
    run = _Run(args)
    rho_a, rho_src = _load_rho_a(args.rho_a, run.dims.n_a, run.tol)
    r = analyze(run.problem, run.tol, run.seed, run.max_dim, rho_a)
    report = run.header("analyze")
    ce = None
    if r.counterexample_state is not None:
        ce = {
            "state": matrix_to_json(r.counterexample_state.mat),
            "criterion": r.counterexample_verdict,
            "note": r.counterexample_note,
        }
    report.update(
        seed=run.seed,
        rho_a=rho_src,
        mode=r.mode,
        algebra_dim=r.algebra_dim,
        full_dim=run.dims.n**2 - 1,
        closure_depth=r.closure_depth,
        completely_controllable=r.completely_controllable,
        case_label=None if r.case_label is None else str(r.case_label),
        block_dims=r.block_dims,
        block_sum=None if r.structured is None else r.structured.total(),
        indirect_criterion_holds=r.indirect_criterion_holds,
        generic_verdicts=list(r.generic_verdicts),
        counterexample=ce,
        inconsistencies=list(r.inconsistencies),
        notes=list(r.notes),
    )
    return report, EXIT_INCONSISTENT if r.inconsistencies else EXIT_OK


COMMANDS = {"closure": cmd_closure, "analyze": cmd_analyze, "disintegrate": cmd_disintegrate}


# -- output ----------------------------------------------------------------------


def _text_value(v):
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, dict):
        return ", ".join(f"{k}={_text_value(x)}" for k, x in sorted(v.items()))
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    return str(v)


def render_text(report: dict) -> str:
    lines = []
    for key in sorted(report):
        val = report[key]
        if key == "counterexample" and val is not None:
            lines.append(f"counterexample: criterion={_text_value(val['criterion'])}")
            lines.append(f"  {val['note']}")
            for row in val["state"]:
                lines.append("  " + "  ".join(f"{re:+.6f}{im:+.6f}j" for re, im in row))
        elif key in ("notes", "inconsistencies"):
            lines.append(f"{key}: {len(val)}")
            lines.extend(f"  - {x}" for x in val)
        else:
            lines.append(f"{key}: {_text_value(val)}")
    return "\n".join(lines) + "\n"


def build_parser():
    ap = argparse.ArgumentParser(
        prog="indcontrol",
        description="Lie-algebraic controllability analysis of a system steered through an auxiliary.",
        epilog="exit codes: 0 ok, 2 invalid input, 3 closure cap reached, 4 theorem inconsistency",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    helps = {
        "closure": "dimension and depth of the dynamical Lie algebra",
        "analyze": "full pipeline with the equivalence cross-check",
        "disintegrate": "tensor-block dimensions and case label",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("input", help="problem file (JSON)")
        p.add_argument("--tol", type=float, default=None, help=f"rank tolerance (default {DEFAULT_TOL:g})")
        p.add_argument("--seed", type=int, default=None, help="seed for the generic states (default 0)")
        p.add_argument("--max-dim", type=int, default=None, help="abort the closure beyond this dimension")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        p.add_argument("--output", "-o", default=None, help="also write the JSON report here")
        if name == "analyze":
            p.add_argument("--rho-a", default="mixed", help="'mixed' or a JSON state file")
    return ap


def _check_flags(args):
    if args.tol is not None and not (math.isfinite(args.tol) and args.tol > 0):
        raise ValidationError("must be a positive finite number", "--tol")
    if args.seed is not None and args.seed < 0:
        raise ValidationError("must be non-negative", "--seed")
    if args.max_dim is not None and args.max_dim < 1:
        raise ValidationError("must be at least 1", "--max-dim")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _check_flags(args)
        report, code = COMMANDS[args.command](args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except HypothesisError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ClosureCapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except DisintegrationFailure as e:
        print(f"error: inconsistent disintegration: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except IndControlError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT
    report["exit_code"] = code
    text = dumps(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    sys.stdout.write(text if args.format == "machine" else render_text(report))
    if code == EXIT_INCONSISTENT:
        print("error: results contradict the equivalence theorem; see inconsistencies", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
