"""``czsplit`` command line.

Exit codes: 0 success, 1 a verification check failed, 2 bad input,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from . import verify
from .cz import (
    InvariantViolation,
    SplitExhausted,
    SplitOutcome,
    SplitProblem,
    Strategy,
    edf,
    factor,
)
from .gf import FieldError, parse_field_spec
from .kernels import backend_name
from .oracle import expected_attempts_sim
from .poly import Polynomial, format_poly, parse_poly

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

STRATEGIES = {
    "classic": Strategy.CLASSIC,
    "improved": Strategy.IMPROVED,
    "coset": Strategy.COSET,
    "direct": Strategy.DIRECT,
}

DEFAULT_FIELDS = {
    "n-small": "gf(2,4)",
    "n-bounds": "gf(2,10)",
    "m": "gf(2,4)",
    "t0": "gf(2,4)",
    "na": "gf(2,4)",
    "charsum": "gf(2,4)",
    "attempts": "gf(2,8)",
}


class InputError(Exception):
    pass


def _outcome_json(out: SplitOutcome) -> dict:
    d = {"status": out.status.value}
    if out.parts:
        d["parts"] = [format_poly(p) for p in out.parts]
    if out.observed_coset is not None:
        d["observed_coset"] = out.observed_coset
    return d


def _trace_json(trace) -> dict:
    return {
        "attempts": [
            {"node": r.node, "sigma": format_poly(r.sigma), "test_poly": format_poly(r.test_poly), **_outcome_json(r.outcome)}
            for r in trace.attempts
        ],
        "total": trace.total_attempts,
        "coset_restricted": trace.coset_restricted,
    }


def _field(args):
    try:
        return parse_field_spec(args.field)
    except (FieldError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _poly(args, fld) -> Polynomial:
    if args.poly is None:
        raise InputError("--poly is required")
    try:
        f = parse_poly(args.poly, fld)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if f.degree < 1:
        raise InputError("polynomial must be non-constant")
    return f


def cmd_factor(args) -> tuple[int, dict, list[list]]:
    fld = _field(args)
    f = _poly(args, fld)
    res = factor(f, args.seed, STRATEGIES[args.strategy])
    body = {
        "field": fld.spec,
        "input": format_poly(f),
        "leading": res.leading,
        "factors": [{"poly": format_poly(g), "mult": k} for g, k in res.factors],
        "trace": _trace_json(res.trace),
        "strategy": STRATEGIES[args.strategy].value,
        "seed": args.seed,
    }
    rows = [["poly", "mult"]] + [[format_poly(g), k] for g, k in res.factors]
    return EXIT_OK, body, rows


def cmd_split(args) -> tuple[int, dict, list[list]]:
    fld = _field(args)
    f = _poly(args, fld)
    if not f.is_monic():
        raise InputError("split needs a monic polynomial")
    problem = SplitProblem(f, args.s, args.q, STRATEGIES[args.strategy], validate=True)
    try:
        factors, trace = edf(problem, args.seed)
    except (ValueError, FieldError) as exc:
        raise InputError(str(exc)) from None
    body = {
        "field": fld.spec,
        "input": format_poly(f),
        "s": args.s,
        "factors": [format_poly(g) for g in factors],
        "trace": _trace_json(trace),
        "strategy": problem.strategy.value,
        "seed": args.seed,
    }
    rows = [["factor"]] + [[format_poly(g)] for g in factors]
    return EXIT_OK, body, rows


def _run_experiment(name: str, args):
    fld = parse_field_spec(args.field or DEFAULT_FIELDS[name])
    if name == "n-small":
        return verify.n_small(fld, args.t or 2, args.budget, args.threads)
    if name == "n-bounds":
        rs = (args.t,) if args.t else (2, 3, 4, 5)
        return verify.n_bounds(fld, rs, args.trials or 10_000, args.seed, args.budget, args.threads)
    if name == "m":
        return verify.m_suite(fld)
    if name == "t0":
        return verify.t0_suite(fld)
    if name == "na":
        return verify.na_suite(fld, args.s if args.s > 1 else 2, args.budget)
    if name == "charsum":
        return verify.charsum_suite(fld)
    if name == "attempts":
        return verify.attempts_suite(fld, args.t or 2, args.trials or 10_000, args.seed or 1, args.q, STRATEGIES[args.strategy])
    raise InputError(f"unknown experiment {name!r}")


def cmd_verify(args) -> tuple[int, dict, list[list]]:
    try:
        rep = _run_experiment(args.experiment, args)
    except (FieldError, ValueError) as exc:
        raise InputError(str(exc)) from None
    rows = [["check", "result", "detail"]] + [[c.name, "PASS" if c.passed else "FAIL", c.detail] for c in rep.checks]
    return (EXIT_OK if rep.passed else EXIT_FAIL), rep.to_json(), rows


def cmd_charsum(args) -> tuple[int, dict, list[list]]:
    fld = _field(args)
    try:
        body = {"field": fld.spec, **verify.charsum_values(fld, args.q)}
    except (FieldError, ValueError) as exc:
        raise InputError(str(exc)) from None
    rows = [["quantity", "value"], ["total", json.dumps(body["total"])]]
    rows += [[f"pair_sum={k}", v] for k, v in body["pair_sum_values"].items()]
    if "gauss" in body:
        rows.append(["gauss", json.dumps(body["gauss"])])
    return EXIT_OK, body, rows


def cmd_simulate(args) -> tuple[int, dict, list[list]]:
    fld = _field(args)
    try:
        st = expected_attempts_sim(fld, args.t or 2, STRATEGIES[args.strategy], args.trials or 10_000, args.seed or 1, args.q)
    except (FieldError, ValueError) as exc:
        raise InputError(str(exc)) from None
    body = st.to_json()
    rows = [["attempts", "count"]] + [[k, v] for k, v in body["histogram"].items()]
    return EXIT_OK, body, rows


COMMANDS = {
    "factor": cmd_factor,
    "split": cmd_split,
    "verify": cmd_verify,
    "charsum": cmd_charsum,
    "simulate": cmd_simulate,
}


def _pretty(command: str, code: int, body: dict) -> str:
    lines = []
    if command == "factor":
        lines.append(f"{body['input']} over {body['field']}")
        lead = body["leading"]
        fs = " * ".join(f"({f['poly']})" + (f"^{f['mult']}" if f["mult"] > 1 else "") for f in body["factors"])
        lines.append(f"= {lead if lead != 1 else ''}{' * ' if lead != 1 else ''}{fs}")
        lines.append(f"attempts: {body['trace']['total']}")
    elif command == "split":
        lines.append(f"{body['input']} over {body['field']} -> " + ", ".join(body["factors"]))
        lines.append(f"attempts: {body['trace']['total']}")
    elif command == "verify":
        lines.append(f"{body['experiment']} on {body['field']}: {body['target']}")
        for c in body["checks"]:
            lines.append(f"  {'PASS' if c['passed'] else 'FAIL'}  {c['name']}" + (f"  ({c['detail']})" if c["detail"] else ""))
        lines.append("PASS" if body["passed"] else "FAIL")
    else:
        for k, v in body.items():
            lines.append(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="field spec, e.g. gf(2,4) or gf(7)")
    common.add_argument("--poly", default=None, help="coefficients c0,c1,... or z^2+3*z+1")
    common.add_argument("--t", type=int, default=None, help="degree / tuple size")
    common.add_argument("--s", type=int, default=1, help="common factor degree")
    common.add_argument("--q", type=int, default=None, help="splitting modulus (prime dividing p^m-1)")
    common.add_argument("--strategy", choices=sorted(STRATEGIES), default="improved")
    common.add_argument("--seed", type=int, default=0, help="0 = deterministic enumeration")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--budget", type=int, default=None, help="step budget for exhaustive sweeps")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sweeps (0 = auto)")
    common.add_argument("--output", choices=("json", "csv", "pretty"), default="json")

    ap = argparse.ArgumentParser(prog="czsplit", description="Cantor-Zassenhaus splitting with linear tests")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("factor", parents=[common], help="factor a polynomial")
    sub.add_parser("split", parents=[common], help="equal-degree split of a squarefree polynomial")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("experiment", choices=verify.EXPERIMENTS)
    sub.add_parser("charsum", parents=[common], help="character sums of a field")
    sub.add_parser("simulate", parents=[common], help="attempt statistics on random inputs")
    return ap


def _render(args, code: int, body: dict, rows: list[list], meta: dict) -> str:
    if args.output == "json":
        doc = {"schema": SCHEMA, "command": args.command, "exit_code": code, "result": body, "meta": meta}
        return json.dumps(doc, indent=2, sort_keys=False)
    if args.output == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue().rstrip("\n")
    return _pretty(args.command, code, body)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads == 0:
        args.threads = os.cpu_count() or 1
    if args.field is None and args.command != "verify":
        args.field = "gf(2,4)"
    t0 = time.perf_counter()
    try:
        code, body, rows = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"czsplit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantViolation, SplitExhausted) as exc:
        print(f"czsplit: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    meta = {"elapsed_ms": round((time.perf_counter() - t0) * 1000, 3), "backend": backend_name()}
    print(_render(args, code, body, rows, meta))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
