"""Command-line front end.

Subcommands:

* ``compute``: one quantity of one or two matrices read from JSON files.
* ``check``: a randomized verification campaign; writes a JSON report
  and a CSV margin table, exit 1 on any violation.
* ``replay``: regenerate the worst trial of a report row from its stored
  digest and reprint the evaluation.

Matrix files are JSON objects {"n": int, "re": [[...]], "im": [[...]]};
floats are serialized with shortest round-trip decimal representation
(at most 17 significant digits), so write/read round-trips are exact.
stdout carries machine-readable JSON; diagnostics go to stderr.

Exit codes: 0 success, 1 inequality violation, 2 malformed input or
flags, 3 domain error (e.g. a non-accretive matrix where accretivity is
required).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .errors import DomainError, MatrixDomainError
from .harness import (
    DEFAULT_ALPHAS,
    DEFAULT_DIMS,
    DEFAULT_TRIALS,
    Campaign,
    evaluate_check,
    get_check,
    prepare_trial,
    registry_ids,
    run_trials,
)
from .linalg import Tolerances, spectral_norm
from .matfun import fractional_power
from .means import geometric_mean, harmonic_mean, heinz_mean, logarithmic_mean
from .numrange import numerical_radius, sectorial_index

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


class _UsageError(Exception):
    pass


def read_matrix(path: str) -> np.ndarray:
    """Load a matrix file, validating shape and finiteness."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read matrix file {path}: {exc}") from exc
    if not isinstance(payload, dict) or not {"n", "re", "im"} <= payload.keys():
        raise _UsageError(f"{path}: expected keys n, re, im")
    n = payload["n"]
    try:
        re = np.asarray(payload["re"], dtype=float)
        im = np.asarray(payload["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise _UsageError(f"{path}: entries must be numbers: {exc}") from exc
    if not (isinstance(n, int) and n >= 1):
        raise _UsageError(f"{path}: n must be a positive integer")
    if re.shape != (n, n) or im.shape != (n, n):
        raise _UsageError(
            f"{path}: arrays must be {n}x{n}, got re {re.shape}, im {im.shape}"
        )
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise _UsageError(f"{path}: entries must be finite")
    return re + 1j * im


def matrix_payload(m: np.ndarray) -> dict:
    return {
        "n": m.shape[0],
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def write_matrix(path: str, m: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(matrix_payload(m), handle)
        handle.write("\n")


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _parse_op(op: str):
    parts = op.split(":")
    head = parts[0]
    if head in ("radius", "norm", "sector") and len(parts) == 1:
        return head, ()
    if head == "power" and len(parts) == 2:
        try:
            return "power", (float(parts[1]),)
        except ValueError as exc:
            raise _UsageError(f"bad power exponent {parts[1]!r}") from exc
    if head == "mean" and len(parts) in (2, 3):
        kind = parts[1]
        if kind not in ("harmonic", "geometric", "heinz", "log"):
            raise _UsageError(f"unknown mean kind {kind!r}")
        if kind == "log":
            if len(parts) == 3:
                raise _UsageError("mean:log takes no weight parameter")
            return "mean", ("log", None)
        if len(parts) != 3:
            raise _UsageError(f"mean:{kind} needs a weight, e.g. mean:{kind}:0.5")
        try:
            return "mean", (kind, float(parts[2]))
        except ValueError as exc:
            raise _UsageError(f"bad mean weight {parts[2]!r}") from exc
    raise _UsageError(
        f"unknown op {op!r}; expected radius, norm, sector, power:T or mean:KIND:T"
    )


def _cmd_compute(args) -> int:
    head, extra = _parse_op(args.op)
    a = read_matrix(args.matrix)
    if head == "mean":
        if not args.second:
            raise _UsageError("mean ops need --second MATRIX")
        b = read_matrix(args.second)
    elif args.second:
        raise _UsageError(f"op {args.op!r} takes a single matrix")
    if head == "radius":
        _emit({"value": numerical_radius(a)})
    elif head == "norm":
        _emit({"value": spectral_norm(a)})
    elif head == "sector":
        _emit({"alpha": sectorial_index(a)})
    elif head == "power":
        _emit({"matrix": matrix_payload(fractional_power(a, extra[0]))})
    else:
        kind, t = extra
        if kind == "harmonic":
            out = harmonic_mean(a, b, t)
        elif kind == "geometric":
            out = geometric_mean(a, b, t)
        elif kind == "heinz":
            out = heinz_mean(a, b, t)
        else:
            out = logarithmic_mean(a, b)
        _emit({"matrix": matrix_payload(out)})
    return EXIT_OK


def _parse_checks(text: str) -> tuple[str, ...]:
    if text.strip().lower() == "all":
        return registry_ids()
    wanted = tuple(part.strip() for part in text.split(",") if part.strip())
    known = set(registry_ids())
    bad = [w for w in wanted if w not in known]
    if bad:
        raise _UsageError(f"unknown checks: {', '.join(bad)}")
    if not wanted:
        raise _UsageError("empty check list")
    return wanted


def _csv_path(out: str) -> str:
    return out[: -len(".json")] + ".csv" if out.endswith(".json") else out + ".csv"


def write_report(report, out: str) -> None:
    payload = report.to_json_dict()
    with open(out, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=1)
        handle.write("\n")
    with open(_csv_path(out), "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["check", "dim", "alpha", "trials", "passes", "errors",
             "worst_margin", "worst_trial", "worst_seed"]
        )
        for c in payload["cells"]:
            writer.writerow(
                [c["check"], c["dim"], repr(c["alpha"]), c["trials"], c["passes"],
                 c["errors"],
                 "" if c["worst_margin"] is None else repr(c["worst_margin"]),
                 "" if c["worst_trial"] is None else c["worst_trial"],
                 "" if c["worst_seed"] is None else c["worst_seed"]]
            )


def _cmd_check(args) -> int:
    campaign = Campaign(
        checks=_parse_checks(args.checks),
        dims=tuple(args.dims),
        alphas=tuple(args.alphas),
        trials_per_cell=args.trials,
        seed=args.seed,
        mode=args.mode,
        condition_cap=args.condition_cap,
    )
    report = run_trials(campaign, jobs=args.jobs)
    write_report(report, args.out)
    summary = {
        "verdict": report.verdict,
        "violations": report.violations,
        "errors": report.errors,
        "cells": len(report.cells),
        "report": args.out,
    }
    _emit(summary)
    return EXIT_OK if report.verdict == "pass" else EXIT_VIOLATION


def _cmd_replay(args) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read report {args.report}: {exc}") from exc
    cells = payload.get("cells", [])
    if not 0 <= args.row < len(cells):
        raise _UsageError(f"row {args.row} outside report ({len(cells)} cells)")
    cell = cells[args.row]
    if cell["check"] != args.check_id:
        raise _UsageError(
            f"row {args.row} belongs to check {cell['check']!r}, not {args.check_id!r}"
        )
    if cell.get("worst_trial") is None:
        raise _UsageError(f"row {args.row} has no replayable trial digest")
    defn = get_check(args.check_id)
    seed = payload["seed"]
    trial = cell["worst_trial"]
    inputs, params, key = prepare_trial(
        defn, seed, cell["dim"], cell["alpha"], trial,
        payload["campaign"]["condition_cap"],
    )
    if key != cell["worst_seed"]:
        raise _UsageError(
            f"digest mismatch: derived key {key} != stored {cell['worst_seed']}"
        )
    if defn.positive_inputs:
        alpha_used = 0.0
    elif payload["mode"] == "tight":
        alpha_used = max(sectorial_index(m) for m in inputs[: defn.arity])
    else:
        alpha_used = float(cell["alpha"])
    tol = Tolerances(payload["campaign"]["atol"], payload["campaign"]["rtol"])
    result = evaluate_check(defn, inputs, alpha_used, params, tol)
    _emit({
        "check": defn.id,
        "statement": defn.statement,
        "stored": {"worst_margin": cell["worst_margin"],
                   "worst_trial": trial, "worst_seed": cell["worst_seed"]},
        "recomputed": {"lhs": result.lhs, "rhs": result.rhs,
                       "margin": result.margin, "pass": result.passed},
        "params": {"t": params.t, "lam": params.lam, "rep": params.rep_name,
                   "alpha_used": alpha_used},
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sectorial",
        description="Numerical radii and verified inequalities of accretive matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="compute one quantity")
    p_compute.add_argument("matrix", help="matrix JSON file")
    p_compute.add_argument("--op", required=True,
                           help="radius | norm | sector | power:T | mean:KIND:T")
    p_compute.add_argument("--second", help="second matrix file for mean ops")
    p_compute.set_defaults(func=_cmd_compute)

    p_check = sub.add_parser("check", help="run a verification campaign")
    p_check.add_argument("--checks", default="all",
                         help="comma-separated check ids or 'all'")
    p_check.add_argument("--dims", type=int, nargs="+", default=list(DEFAULT_DIMS))
    p_check.add_argument("--alphas", type=float, nargs="+",
                         default=list(DEFAULT_ALPHAS))
    p_check.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p_check.add_argument("--seed", type=int, default=1)
    p_check.add_argument("--mode", choices=("certified", "tight"),
                         default="certified")
    p_check.add_argument("--condition-cap", type=float, default=100.0)
    p_check.add_argument("--jobs", type=int, default=None,
                         help="worker processes (report is identical either way)")
    p_check.add_argument("--out", default="report.json")
    p_check.set_defaults(func=_cmd_check)

    p_replay = sub.add_parser("replay", help="replay one report row")
    p_replay.add_argument("report", help="report JSON file")
    p_replay.add_argument("check_id")
    p_replay.add_argument("row", type=int, help="index into the report's cells")
    p_replay.set_defaults(func=_cmd_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": {"type": "usage", "message": str(exc)}})
        return EXIT_USAGE
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": {"type": "parameter", "message": str(exc)}})
        return EXIT_USAGE
    except MatrixDomainError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
