"""Command-line interface.

Exit codes: 0 success, 1 invalid input or failed validation, 2 a theorem's
hypothesis does not hold (e.g. pair recurrence on a non-ergodic system),
3 internal inconsistency (two routes that must agree did not).  Errors are
written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .algebra import CONTRACTION_TOL, validate_system
from .appendix import appendix_density, appendix_fixed_dims, appendix_operator
from .ergodic import AVERAGING_BUDGET, AVERAGING_TOL, METHODS, ergodicity_verdicts
from .errors import (
    ConsistencyError,
    ConvergenceError,
    HypothesisError,
    InvalidSystemError,
    PreconditionError,
)
from .gns import FIX_TOL, GRAM_TOL, gns_construct
from .measure import pair_recurrence_report, is_ergodic_measure, khintchine_report
from .recurrence import recurrence_set_khintchine, recurrence_set_pair
from .specio import parse_element, parse_system

EXIT_OK, EXIT_INVALID, EXIT_HYPOTHESIS, EXIT_CONSISTENCY = 0, 1, 2, 3


def _emit_error(exc, code):
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, ConvergenceError):
        err["best_residual"] = exc.best_residual
    if isinstance(exc, InvalidSystemError) and exc.report is not None:
        err["validation"] = exc.report.to_dict()
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def _load(args):
    return parse_system(args.spec)


def _gns(args, system):
    return gns_construct(system, gram_tol=args.gram_tol, fix_tol=args.fix_tol)


def cmd_validate(args):
    system, fms = _load(args)
    report = validate_system(system, tol=args.tol)
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=True, indent=2))
    else:
        for c in report.checks:
            mark = "PASS" if c.passed else "FAIL"
            print(f"{mark}  {c.name:<18} residual={c.residual:.3e}  {c.detail}".rstrip())
        print("valid" if report.passed else "INVALID")
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_gns(args):
    system, _ = _load(args)
    rep = _gns(args, system)
    dg = rep.diagnostics
    out = {
        "quotient_dimension": rep.d,
        "algebra_dimension": system.kind.dim,
        "omega_norm": dg["omega_norm"],
        "U_norm": dg["U_norm"],
        "fixed_dimension": rep.fixed_dimension,
        "fixed_margin": dg["fixed_margin"],
        "consistency_residual": dg["consistency_residual"],
        "U_omega_residual": dg["U_omega_residual"],
        "P_idempotent": dg["P_idempotent"],
        "P_hermitian": dg["P_hermitian"],
        "UP_residual": dg["UP_residual"],
        "PU_residual": dg["PU_residual"],
        "gram_tol": rep.gram_tol,
        "fix_tol": rep.fix_tol,
    }
    if args.json:
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        for k, v in out.items():
            print(f"{k:<22} {v:.6g}" if isinstance(v, float) else f"{k:<22} {v}")
    return EXIT_OK


def cmd_ergodic(args):
    system, fms = _load(args)
    rep = _gns(args, system)
    methods = [args.method] if args.method else list(METHODS)
    verdicts = ergodicity_verdicts(system, rep, methods, tol=args.tol, n_budget=args.budget)
    if fms is not None and "projector" in verdicts:
        # raises ConsistencyError on a cycle-count mismatch
        is_ergodic_measure(fms)
    answers = {v["ergodic"] for v in verdicts.values()}
    out = {"verdicts": verdicts, "tol": args.tol, "n_budget": args.budget, "fix_tol": rep.fix_tol}
    if len(answers) == 1:
        out["ergodic"] = answers.pop()
    if args.json:
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        for name, v in verdicts.items():
            extra = ", ".join(f"{k}={v[k]}" for k in v if k != "ergodic")
            print(f"{name:<10} {'ergodic' if v['ergodic'] else 'not ergodic'}  ({extra})")
    if "ergodic" not in out:
        raise ConsistencyError(f"ergodicity tests disagree: {verdicts}")
    if not args.json:
        print("verdict:", "ergodic" if out["ergodic"] else "not ergodic")
    return EXIT_OK


def cmd_recur(args):
    system, fms = _load(args)
    A, A_pts = parse_element(args.A, system)
    B, B_pts = parse_element(args.B, system) if args.B is not None else (None, None)
    oracle = fms is not None and A_pts is not None and (args.B is None or B_pts is not None)
    if oracle and B is None:
        report = khintchine_report(fms, A_pts, args.epsilon, args.horizon)
    elif oracle:
        report = pair_recurrence_report(fms, A_pts, B_pts, args.epsilon, args.horizon, force=args.force)
    else:
        rep = _gns(args, system)
        if B is None:
            report = recurrence_set_khintchine(system, rep, A, args.epsilon, args.horizon)
        else:
            report = recurrence_set_pair(system, rep, A, B, args.epsilon, args.horizon, force=args.force)

    if args.out:
        path = Path(args.out)
        text = report.to_csv() if path.suffix.lower() == ".csv" else report.to_json()
        path.write_text(text)
    print(f"kind        {report.kind}")
    print(f"epsilon     {report.epsilon:g}")
    print(f"threshold   {report.threshold:.12g}")
    print(f"horizon     {report.horizon}")
    print(f"window      {report.window}{'' if report.certified else ' (not certified for this threshold)'}")
    print(f"|E|         {len(report.E)}")
    print(f"max_gap     {report.max_gap}")
    print(f"dense       {report.relatively_dense}")
    if report.oracle_max_error is not None:
        print(f"oracle_err  {report.oracle_max_error:.3e}")
    if report.borderline:
        print(f"borderline  {report.borderline[:20]}")
    head = report.E[:30]
    print(f"E           {head}{' ...' if len(report.E) > len(head) else ''}")
    return EXIT_OK


def _parse_range(text):
    try:
        a, b = text.split("..")
        a, b = int(a), int(b)
    except ValueError:
        raise PreconditionError(f"range must look like a..b, got {text!r}")
    if a < 1 or b < a:
        raise PreconditionError(f"invalid range {text!r}")
    return a, b


def cmd_appendix(args):
    a, b = _parse_range(args.m_range)
    dims = ["m,dim_H_fixed,dim_G_fixed"]
    for m in range(a, b + 1):
        h, g = appendix_fixed_dims(appendix_operator(m))
        dims.append(f"{m},{h},{g}")
    shift = appendix_operator(args.density_max)
    dens = ["n,density,density_times_sqrt_n"]
    for n in range(1, args.density_max + 1):
        v = appendix_density(n, shift)
        dens.append(f"{n},{v!r},{v * math.sqrt(n)!r}")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "appendix_fixed_dims.csv").write_text("\n".join(dims) + "\n")
        (out / "appendix_density.csv").write_text("\n".join(dens) + "\n")
        print(f"wrote {out / 'appendix_fixed_dims.csv'} and {out / 'appendix_density.csv'}")
    else:
        print("\n".join(dims))
        print()
        print("\n".join(dens))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="starergodic", description="Ergodicity and recurrence for finite *-dynamical systems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def with_spec(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("spec", help="system specification (JSON file or inline JSON)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    def with_gns(sp):
        sp.add_argument("--gram-tol", type=float, default=GRAM_TOL)
        sp.add_argument("--fix-tol", type=float, default=FIX_TOL)

    sp = with_spec("validate", "check the state, unit preservation and contraction axioms")
    sp.add_argument("--tol", type=float, default=CONTRACTION_TOL, help="relative contraction tolerance")
    sp.set_defaults(func=cmd_validate)

    sp = with_spec("gns", "report the GNS quotient, contraction and fixed-point projector")
    with_gns(sp)
    sp.set_defaults(func=cmd_gns)

    sp = with_spec("ergodic", "decide ergodicity (projector, time-mean and mixing tests)")
    with_gns(sp)
    sp.add_argument("--method", choices=METHODS)
    sp.add_argument("--tol", type=float, default=AVERAGING_TOL, help="averaging-test tolerance")
    sp.add_argument("--budget", type=int, default=AVERAGING_BUDGET, help="largest averaging length")
    sp.set_defaults(func=cmd_ergodic)

    sp = with_spec("recur", "recurrence set with a certified window")
    with_gns(sp)
    sp.add_argument("--A", required=True, help="element (JSON file/inline); point array for measure systems")
    sp.add_argument("--B", help="second element for the pair form (needs ergodicity)")
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--horizon", type=int, default=None, help="K (default: 10 x window)")
    sp.add_argument("--force", action="store_true", help="run the pair form on a non-ergodic system")
    sp.add_argument("--out", help="write the report as .json or .csv")
    sp.set_defaults(func=cmd_recur)

    sp = sub.add_parser("appendix", help="truncated-shift fixed-space table and density curve as CSV")
    sp.add_argument("--m-range", default="1..64")
    sp.add_argument("--density-max", type=int, default=100)
    sp.add_argument("--out-dir")
    sp.set_defaults(func=cmd_appendix)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisError as exc:
        return _emit_error(exc, EXIT_HYPOTHESIS)
    except ConsistencyError as exc:
        return _emit_error(exc, EXIT_CONSISTENCY)
    except (InvalidSystemError, PreconditionError, ConvergenceError, KeyError, ValueError, OSError) as exc:
        return _emit_error(exc, EXIT_INVALID)


if __name__ == "__main__":
    sys.exit(main())
