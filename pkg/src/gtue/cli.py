"""Command-line front end.

Subcommands:

* ``eval``              conditional upper (or lower) expectation of a
                        finitary variable or a monotone sequence template,
                        with an optional brute-force cross-check;
* ``check``             supermartingale verification of a process file,
                        and/or an axiom audit of the tree's local models;
* ``doob-certificate``  the additive upcrossing transform plus its cuts
                        and verification summary;
* ``levy-certificate``  the multiplicative transform likewise.

Exit codes: 0 success, 1 input or usage error, 2 a verification check
failed, 3 iteration budget exhausted.  Reports go to stdout as a single
JSON document; parse failures print only to stderr.

Setting GTUE_RATIONAL=1 switches to exact rational arithmetic: numeric
literals in input files are taken exactly and outputs are emitted as
exact decimal (or p/q) strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import jsonio
from .audit import audit_axioms, upper_envelope
from .constructions import (
    doob_gain_checks,
    doob_transform,
    levy_bound_checks,
    levy_transform,
)
from .errors import GTUEError, SchemaError
from .evaluate import (
    STATUS_BUDGET,
    STATUS_EXACT,
    eval_finitary,
    eval_limit,
    eval_lower_finitary,
)
from .oracle import brute_force_upper, selection_count
from .process import check_supermartingale
from .tree import FinitarySequence, FinitaryVariable
from .xreal import xr

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILED_CHECK = 2
EXIT_BUDGET = 3


@dataclass
class RunConfig:
    tol: object = 1e-9
    budget: int = 64
    rational_mode: bool = False
    seed: int = 0
    oracle_cap: int = 10**7

    def __post_init__(self):
        if xr(self.tol) < 0:
            raise ValueError("tol must be non-negative")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")


def _config_from_args(args) -> RunConfig:
    rational = os.environ.get("GTUE_RATIONAL", "") == "1" or getattr(args, "rational", False)
    tol = args.tol
    if tol is None:
        tol = 0 if rational else 1e-9
    return RunConfig(tol=tol, budget=args.budget, rational_mode=rational,
                     seed=args.seed, oracle_cap=args.oracle_cap)


def _emit(document, rational: bool):
    print(json.dumps(document, indent=2))


def _encode(value, rational: bool):
    return jsonio.encode_number(xr(value), rational)


def cmd_eval(args) -> int:
    config = _config_from_args(args)
    tree = jsonio.load_tree(args.tree, config.rational_mode)
    subject = jsonio.load_variable_or_sequence(args.variable, tree.space, config.rational_mode)
    situation = jsonio.situation_from_text(tree.space, args.situation)
    rational = config.rational_mode

    if isinstance(subject, FinitarySequence):
        if args.lower:
            raise SchemaError("--lower applies to finitary variables, not sequences")
        result = eval_limit(tree, subject, situation, tol=config.tol, budget=config.budget)
        report = {"value": _encode(result.value, rational), "status": result.status,
                  "iterations": result.iterations}
        if result.bound_direction:
            report["bound_direction"] = result.bound_direction
        _emit(report, rational)
        return EXIT_BUDGET if result.status == STATUS_BUDGET else EXIT_OK

    assert isinstance(subject, FinitaryVariable)
    if args.lower:
        value = eval_lower_finitary(tree, subject, situation)
    else:
        value = eval_finitary(tree, subject, situation)
    report = {"value": _encode(value, rational), "status": STATUS_EXACT, "iterations": 0}
    exit_code = EXIT_OK
    if args.oracle:
        if args.lower:
            raise SchemaError("--oracle cross-checks the upper expectation only")
        report["selection_count"] = selection_count(tree, subject.depth)
        oracle_value = brute_force_upper(tree, subject, situation, cap=config.oracle_cap)
        if rational or not (oracle_value.is_finite and xr(value).is_finite):
            matches = oracle_value == value
        else:
            matches = abs(oracle_value.as_float() - xr(value).as_float()) <= 1e-9
        report["oracle_value"] = _encode(oracle_value, rational)
        report["oracle_match"] = matches
        if not matches:
            exit_code = EXIT_FAILED_CHECK
    _emit(report, rational)
    return exit_code


def cmd_check(args) -> int:
    config = _config_from_args(args)
    tree = jsonio.load_tree(args.tree, config.rational_mode)
    rational = config.rational_mode
    report = {}
    ok = True

    if args.process is not None:
        process = jsonio.load_process(args.process, tree.space, config.rational_mode)
        verdict = check_supermartingale(tree, process, tol=config.tol)
        entry = {"is_supermartingale": verdict.is_supermartingale,
                 "is_bounded_below": verdict.is_bounded_below}
        if verdict.worst_violation is not None:
            situation, gap = verdict.worst_violation
            entry["worst_violation"] = {
                "situation": jsonio.situation_to_text(tree.space, situation),
                "gap": _encode(gap, rational)}
        report["supermartingale"] = entry
        ok = ok and verdict.is_supermartingale
    elif not args.axioms:
        raise SchemaError("check needs a process file, --axioms, or both")

    if args.axioms:
        audits = []
        for model in tree.distinct_models():
            audit = audit_axioms(upper_envelope(model), tree.space,
                                 trials=args.trials, seed=config.seed,
                                 tol=float(config.tol))
            audits.append({
                "all_passed": audit.all_passed,
                "alternative_characterisation_consistent":
                    audit.alt_characterisation_consistent,
                "failures": [{"axiom": r.name, "counterexample": r.counterexample}
                             for r in audit.failures()]})
            ok = ok and audit.all_passed
        report["axioms"] = audits

    _emit(report, rational)
    return EXIT_OK if ok else EXIT_FAILED_CHECK


def cmd_certify(args) -> int:
    config = _config_from_args(args)
    tree = jsonio.load_tree(args.tree, config.rational_mode)
    rational = config.rational_mode
    space = tree.space
    root = jsonio.situation_from_text(space, args.situation)

    if args.kind == "doob":
        process = jsonio.load_process(args.subject, space, config.rational_mode)
        transform = doob_transform(tree, process, root, args.a, args.b)
        checks = doob_gain_checks(process, transform)
        check_rows = [{"situation": jsonio.situation_to_text(space, c.situation),
                       "upcrossings": c.upcrossings,
                       "gain": _encode(c.gain, rational),
                       "passed": c.passed} for c in checks]
    else:
        variable = jsonio.load_variable_or_sequence(args.subject, space, config.rational_mode)
        if not isinstance(variable, FinitaryVariable):
            raise SchemaError("levy-certificate expects a finitary variable file")
        transform = levy_transform(tree, variable, root, args.a, args.b, args.delta)
        checks = levy_bound_checks(transform)
        check_rows = [{"situation": jsonio.situation_to_text(space, c.situation),
                       "upcrossings": c.upcrossings,
                       "value": _encode(c.value, rational),
                       "threshold": _encode(c.threshold, rational),
                       "passed": c.passed} for c in checks]

    verdict = check_supermartingale(tree, transform.process, tol=config.tol)
    all_ok = verdict.is_supermartingale and all(c.passed for c in checks)
    summary = {"is_supermartingale": verdict.is_supermartingale,
               "realized_checks": check_rows,
               "all_checks_passed": all_ok}
    if verdict.worst_violation is not None:
        situation, gap = verdict.worst_violation
        summary["worst_violation"] = {
            "situation": jsonio.situation_to_text(space, situation),
            "gap": _encode(gap, rational)}

    process_doc = jsonio.dump_process(transform.process, space, rational)
    cuts_doc = jsonio.dump_cuts(transform.cuts, space)
    if args.out_process:
        with open(args.out_process, "w", encoding="utf-8") as handle:
            json.dump(process_doc, handle, indent=2)
    if args.out_cuts:
        with open(args.out_cuts, "w", encoding="utf-8") as handle:
            json.dump(cuts_doc, handle, indent=2)
    _emit({"process": process_doc, "cuts": cuts_doc, "summary": summary}, rational)
    return EXIT_OK if all_ok else EXIT_FAILED_CHECK


def _add_common(parser):
    parser.add_argument("--tol", type=float, default=None,
                        help="comparison tolerance (default 1e-9, or 0 in rational mode)")
    parser.add_argument("--budget", type=int, default=64,
                        help="iteration budget for sequence limits")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized audits")
    parser.add_argument("--oracle-cap", type=int, default=10**7,
                        help="refusal cap on brute-force selections")
    parser.add_argument("--rational", action="store_true",
                        help="exact rational arithmetic (same as GTUE_RATIONAL=1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtue",
        description="Game-theoretic upper expectations on imprecise probability trees")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a variable or sequence")
    p_eval.add_argument("tree")
    p_eval.add_argument("variable")
    p_eval.add_argument("--situation", default="",
                        help="dot-separated state labels; empty for the initial situation")
    p_eval.add_argument("--lower", action="store_true", help="conjugate lower expectation")
    p_eval.add_argument("--oracle", action="store_true",
                        help="cross-check against the brute-force oracle")
    _add_common(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_check = sub.add_parser("check", help="verify a supermartingale / audit axioms")
    p_check.add_argument("tree")
    p_check.add_argument("process", nargs="?", default=None)
    p_check.add_argument("--axioms", action="store_true",
                         help="audit the tree's local models")
    p_check.add_argument("--trials", type=int, default=200,
                         help="audit trials per local model")
    _add_common(p_check)
    p_check.set_defaults(func=cmd_check)

    for kind, help_text, subject_help in (
            ("doob", "additive upcrossing certificate", "base process file"),
            ("levy", "multiplicative growth certificate", "finitary gamble file")):
        p_cert = sub.add_parser(f"{kind}-certificate", help=help_text)
        p_cert.add_argument("tree")
        p_cert.add_argument("subject", help=subject_help)
        p_cert.add_argument("--situation", default="", help="transform root situation")
        p_cert.add_argument("--a", required=True, help="lower window level (rational)")
        p_cert.add_argument("--b", required=True, help="upper window level (rational)")
        if kind == "levy":
            p_cert.add_argument("--delta", default="1",
                                help="positive shift above the infimum (rational)")
        p_cert.add_argument("--out-process", default=None,
                            help="also write the transform process JSON here")
        p_cert.add_argument("--out-cuts", default=None,
                            help="also write the cuts JSON here")
        _add_common(p_cert)
        p_cert.set_defaults(func=cmd_certify, kind=kind)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GTUEError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
