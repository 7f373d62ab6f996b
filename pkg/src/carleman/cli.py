"""Command-line front end: load a problem file, run a command, print a JSON report."""
import argparse
import csv
import json
import sys
import warnings

import numpy as np

from .errors import (CarlemanError, InconclusiveIndexError, NotNoetherianError, ParityError,
                     ProblemError, ResolutionError)
from .fredholm import index_report, noether_check
from .numerics import null_count, solve
from .problem import load_problem
from .shift_system import GridOperators, assemble_operator
from .verify import SUITES, run_suite

COMMANDS = ("check", "index", "solve", "verify", "spectrum")

EXIT_CODES = {"noetherian": 0, "verification_failed": 1, "violated": 2, "inconclusive": 3,
              "input_error": 4}

_NUM_OR_NULL = {"type": ["number", "null"]}
_INT_OR_NULL = {"type": ["integer", "null"]}
_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["command", "verdict", "gamma", "noether", "index", "diagnostics"],
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "verdict": {"enum": list(EXIT_CODES)},
        "gamma": {"enum": [1, -1, None]},
        "noether": {"type": "object"},
        "index": {
            "type": "object",
            "required": ["ind_M", "ind_L", "max_phase_jump"],
            "properties": {"ind_M": _INT_OR_NULL, "ind_L": _INT_OR_NULL, "ind_K": _INT_OR_NULL,
                           "max_phase_jump": _NUM_OR_NULL, "reason": {"type": "string"}}},
        "nullspace": {
            "type": "object",
            "required": ["l1", "l1_star"],
            "properties": {"l1": {"type": "integer"}, "l1_star": {"type": "integer"}}},
        "solve": {
            "type": "object",
            "required": ["residual", "solvable", "conditions"],
            "properties": {"residual": {"type": "number"}, "solvable": {"type": "boolean"},
                           "conditions": {"type": "array", "items": _COMPLEX}}},
        "verification": {"type": "object"},
        "spectrum": {"type": "object"},
        "error": {"type": "object"},
        "diagnostics": {"type": "object"},
        "null_reasons": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}


def _sanitize(obj, path, reasons):
    """Plain JSON types; non-finite numbers become null with a recorded reason."""
    if isinstance(obj, dict):
        return {str(k): _sanitize(v, f"{path}/{k}", reasons) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_sanitize(v, f"{path}/{i}", reasons) for i, v in enumerate(obj)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_sanitize(obj.real, f"{path}/0", reasons), _sanitize(obj.imag, f"{path}/1", reasons)]
    if isinstance(obj, (float, np.floating)):
        if np.isfinite(obj):
            return float(obj)
        reasons[path] = f"non-finite value ({obj})"
        return None
    return obj


def finalize(report):
    reasons = dict(report.get("null_reasons", {}))
    out = _sanitize({k: v for k, v in report.items() if k != "null_reasons"}, "", reasons)
    if reasons:
        out["null_reasons"] = reasons
    return out


def _null_index(reason):
    return {"ind_M": None, "ind_L": None, "ind_K": None, "max_phase_jump": None, "reason": reason}


class _Context:
    def __init__(self, spec):
        self.spec = spec
        self.coeffs = spec.coefficients()
        self.grid = self.coeffs.grid
        self.ops = GridOperators(self.coeffs, spec.cauchy_mode)
        self.fields = self.ops.fields
        self.tol = spec.tolerances

    def operator(self, kind):
        return assemble_operator(self.coeffs, kind, self.spec.modes, ops=self.ops)


def _diagnostics(spec, ctx, caught):
    d = {"modes": spec.modes, "collocation": spec.collocation,
         "cauchy_mode": ctx.ops.mode if ctx else spec.cauchy_mode,
         "tolerances": spec.tolerances.as_dict(), "warnings": [str(w.message) for w in caught]}
    if ctx is not None:
        d["involution_error"] = ctx.coeffs.shift.involution_error
        d["band_limited"] = ctx.coeffs.band_limited
        d["shift"] = ctx.coeffs.shift.kind
    return d


def _noether_section(ctx, noether):
    sec = {"verdict": noether.verdict, "min_abs": noether.min_abs, "thresholds": noether.thresholds,
           "tol_det": noether.tol_det}
    if not noether.noetherian:
        sec["violating_nodes"] = noether.violating_nodes(ctx.grid)
    return sec


def _index_section(ctx):
    rep = index_report(ctx.fields, ctx.tol.phase_margin, ctx.tol.tol_det)
    return rep, {"ind_M": rep.ind_M, "ind_L": rep.ind_L, "ind_K": rep.ind_K,
                 "max_phase_jump": rep.max_phase_jump, "windings": rep.windings,
                 "degenerate_shift": rep.degenerate_shift}


def _nullspace_section(ctx):
    reports = {key: null_count(ctx.operator(kind), ctx.tol, warn=False)
               for key, kind in (("l1", "M"), ("l1_star", "M_union"),
                                 ("l2", "K_accomp"), ("l2_star", "K_union"))}
    sec = {k: r.dimension for k, r in reports.items()}
    sec["gap_ratios"] = {k: r.gap_ratio for k, r in reports.items()}
    sec["reliable"] = all(r.reliable for r in reports.values())
    sec["numerical_index"] = sec["l1"] - sec["l1_star"]
    return reports, sec


def _write_csv(path, ctx):
    f, grid = ctx.fields, ctx.grid
    columns = {"theta": grid.theta, "t_re": grid.nodes.real, "t_im": grid.nodes.imag}
    series = dict(f.named)
    series["det_C"], series["det_D"] = f.det_C, f.det_D
    for name, v in series.items():
        columns[f"{name}_re"] = v.real
        columns[f"{name}_im"] = v.imag
        columns[f"{name}_abs"] = np.abs(v)
        columns[f"{name}_phase"] = np.angle(v)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in zip(*columns.values()):
            writer.writerow([f"{x:.17g}" for x in row])


def run_command(command, spec, csv_path=None, suite="all", seed=0):
    """Run ``command`` on a validated problem; returns ``(exit_code, report)``."""
    report = {"command": command, "gamma": None}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ctx = None
        try:
            ctx = _Context(spec)
            report["gamma"] = ctx.coeffs.shift.gamma
            _dispatch(command, ctx, report, csv_path, suite, seed)
        except ProblemError as exc:
            report.update(verdict="input_error", error={"message": str(exc), "pointer": exc.pointer})
        except (ResolutionError, InconclusiveIndexError, ParityError) as exc:
            report["verdict"] = "inconclusive"
            report["error"] = {"type": type(exc).__name__, "message": str(exc)}
            report.setdefault("index", _null_index(str(exc)))
        report.setdefault("noether", {})
        report.setdefault("index", _null_index("not computed"))
        report["diagnostics"] = _diagnostics(spec, ctx, caught)
    return EXIT_CODES[report["verdict"]], finalize(report)


def _dispatch(command, ctx, report, csv_path, suite, seed):
    if csv_path:
        _write_csv(csv_path, ctx)
    noether = noether_check(ctx.fields, ctx.tol.tol_det)
    report["noether"] = _noether_section(ctx, noether)
    if not noether.noetherian:
        report["verdict"] = noether.verdict
        report["index"] = _null_index(f"Noether conditions {noether.verdict}")
        return
    report["verdict"] = "noetherian"
    if command == "check":
        report["noether"].update(min_abs=noether.min_abs)
        try:
            _, report["index"] = _index_section(ctx)
        except (ResolutionError, ParityError) as exc:
            report["index"] = _null_index(str(exc))
        return

    analytic, report["index"] = _index_section(ctx)
    if command == "index":
        nulls, report["nullspace"] = _nullspace_section(ctx)
        if not report["nullspace"]["reliable"]:
            raise InconclusiveIndexError("null counts are not gap-reliable")
        if report["nullspace"]["numerical_index"] != analytic.ind_M:
            report["verdict"] = "verification_failed"
    elif command == "solve":
        nulls, report["nullspace"] = _nullspace_section(ctx)
        res = solve(ctx.operator("M"), ctx.coeffs.g.values, nulls["l1_star"], ctx.tol)
        report["solve"] = {"residual": res.residual, "solvable": res.solvable,
                           "conditions": res.conditions,
                           "classifications_agree": res.classifications_agree,
                           "solution_modes": list(range(-ctx.spec.modes, ctx.spec.modes + 1)),
                           "solution": res.solution}
    elif command == "spectrum":
        report["spectrum"] = {kind: np.linalg.svd(ctx.operator(kind).matrix, compute_uv=False)
                              for kind in ("M", "M_union", "K_accomp", "K_union",
                                           "L_system", "L_union_system")}
    elif command == "verify":
        try:
            ver = run_suite(ctx.spec, suite, seed)
        except NotNoetherianError as exc:
            report["verdict"] = "violated"
            report["error"] = {"message": str(exc)}
            return
        report["verification"] = ver.as_dict()
        if ver.inconclusive:
            report["verdict"] = "inconclusive"
        elif not ver.passed:
            report["verdict"] = "verification_failed"


def _parse_resolution(text):
    try:
        m, n = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected <m>,<N>")
    return m, n


def _parse_tol(text):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected <name>=<value>")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance value {value!r} is not a number")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="carleman",
        description="Noether checks, index computation and solvability for singular "
                    "integral equations with a Carleman shift.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("problem", help="problem description (JSON)")
    parser.add_argument("--csv", metavar="PATH", help="write sampled determinant fields to CSV")
    parser.add_argument("--resolution", type=_parse_resolution, metavar="m,N",
                        help="trial modes and collocation nodes")
    parser.add_argument("--tol", type=_parse_tol, action="append", default=[],
                        metavar="NAME=VALUE", help="override a tolerance (repeatable)")
    parser.add_argument("--suite", default="all", choices=SUITES + ("all",),
                        help="verification suite (verify only)")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    parser.add_argument("--indent", type=int, default=2)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = load_problem(args.problem)
        if args.tol:
            try:
                spec = spec.with_tolerances(**dict(args.tol))
            except KeyError as exc:
                raise ProblemError(exc.args[0], "/tolerances") from exc
        if args.resolution:
            spec = spec.with_resolution(*args.resolution)
    except ProblemError as exc:
        report = {"command": args.command, "verdict": "input_error", "gamma": None, "noether": {},
                  "index": _null_index("input error"), "diagnostics": {},
                  "error": {"message": exc.reason, "pointer": exc.pointer, "offset": exc.offset}}
        print(json.dumps(finalize(report), indent=args.indent))
        return EXIT_CODES["input_error"]
    except CarlemanError as exc:
        report = {"command": args.command, "verdict": "input_error", "gamma": None, "noether": {},
                  "index": _null_index("input error"), "diagnostics": {},
                  "error": {"message": str(exc), "pointer": "", "offset": None}}
        print(json.dumps(finalize(report), indent=args.indent))
        return EXIT_CODES["input_error"]
    code, report = run_command(args.command, spec, args.csv, args.suite, args.seed)
    print(json.dumps(report, indent=args.indent))
    return code


if __name__ == "__main__":
    sys.exit(main())
