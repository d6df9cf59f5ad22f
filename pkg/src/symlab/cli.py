"""Command-line front end: ``symlab <subcommand> [flags]``.

Every subcommand prints one JSON report (sorted keys) on stdout, or CSV for
tabular payloads with ``--emit csv``.  Exit codes: 0 ok, 1 a check failed or
the computed verdict is negative, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import SymlabError
from .symcore.numeric import default_seed

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument types

def rational(text: str):
    """Exact rational from '2', '1/2' or '0.25'; float for anything Fraction rejects."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def grid(text: str):
    from .groups import parse_grid

    try:
        return parse_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def vector3(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected l1,l2,l3, got {text!r}")
    try:
        return tuple(Fraction(p.strip()) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad vector {text!r}") from None


def _jsonable(obj):
    """Fractions as strings, non-finite floats as strings, numpy scalars as Python."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _params(args, keys) -> dict:
    out = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    if "lam" in out:
        out["lambda"] = out.pop("lam")
    return out


VALUE_FLAGS = {"--lambda", "--eps", "--grid", "--vector", "--c0", "--c1", "--k", "--tol"}


def _attach_negative_values(argv: list) -> list:
    """Rewrite '--grid -2:2:41' as '--grid=-2:2:41' so argparse does not read a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def _require_lambda(args):
    if args.lam is None:
        raise UsageError(f"{args.command} needs --lambda (no default is assumed)")
    if float(args.lam) <= 0:
        raise UsageError("--lambda must be positive")
    return args.lam


# ---------------------------------------------------------------------------
# subcommands: each returns (result dict, ok flag, csv rows or None)

def cmd_symmetries(args):
    from .lie import BASIS_NAMES, CI, check_symmetry, named_field

    names = [args.candidate] if args.candidate else list(BASIS_NAMES) + ["Gq"]
    reports = []
    for n in names:
        try:
            G = named_field(n)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        reports.append(check_symmetry(G, CI, n).to_json())
    ok = all(r["is_symmetry"] for r in reports)
    return {"reports": reports}, ok, None


def cmd_table(args):
    from .lie import commutator_table

    tab = commutator_table()
    C = tab.structure_constants()
    consts = {f"C^{k + 1}_{i + 1}{j + 1}": f"{C[k, i, j]:g}"
              for k in range(3) for i in range(3) for j in range(3) if C[k, i, j] != 0}
    ok = tab.jacobi_holds()
    return {**tab.to_json(), "structure_constants": consts, "jacobi": ok}, ok, None


def cmd_adjoint(args):
    from .lie import BASIS_NAMES, adjoint_matrix, adjoint_table

    table = {f"Ad(exp(eps {BASIS_NAMES[i]})) {BASIS_NAMES[j]}": str(e)
             for (i, j), e in sorted(adjoint_table().items())}
    result = {"table": table}
    if args.generator is not None:
        if args.generator not in BASIS_NAMES:
            raise UsageError(f"--generator must be one of {', '.join(BASIS_NAMES)}")
        if args.eps is None:
            raise UsageError("--generator needs --eps")
        M = adjoint_matrix(BASIS_NAMES.index(args.generator), float(args.eps))
        result["matrix"] = {"generator": args.generator, "eps": float(args.eps),
                            "rows": M.tolist()}
    return result, True, None


def cmd_optimal(args):
    from .lie import optimal_representative, replay_numeric

    tol = args.tol if args.tol is not None else 1e-10
    if args.vector is not None:
        vectors = [args.vector]
    else:
        rng = np.random.default_rng(default_seed())
        count = args.count if args.count is not None else 1000
        vectors = []
        while len(vectors) < count:
            v = tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
                      for _ in range(3))
            if any(v):
                vectors.append(v)
    rows, worst, counts = [], 0.0, {}
    for v in vectors:
        if not any(v):
            raise UsageError("the zero element has no representative")
        res = optimal_representative(v)
        err = float(np.max(np.abs(replay_numeric(res) - np.array(res.representative, float))))
        worst = max(worst, err)
        counts[res.label] = counts.get(res.label, 0) + 1
        rows.append({**res.to_json(), "replay_error": err})
    ok = worst <= tol
    result = {"worst_replay_error": worst, "tolerance": tol,
              "representative_counts": dict(sorted(counts.items()))}
    if args.vector is not None:
        result["reduction"] = rows[0]
    else:
        result["samples"] = len(rows)
    csv_rows = [("l1", "l2", "l3", "representative", "replay_error")] + [
        (*r["input"], r["representative"], r["replay_error"]) for r in rows]
    return result, ok, csv_rows


def cmd_transform(args):
    from .groups import get_action, grid_residual, grid_table, soliton, transform_solution
    from .symcore import to_infix

    lam = _require_lambda(args)
    if args.solution != "soliton":
        raise UsageError("only --solution soliton is catalogued")
    try:
        action = get_action(args.action, args.k if args.k is not None else 1)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    eps = float(args.eps if args.eps is not None else 0.0)
    base = soliton(lam)
    F = transform_solution(action, eps, base)
    g = args.grid or (-2.0, 2.0, 41)
    rep = grid_residual(F, g)
    tol = args.tol if args.tol is not None else 1e-10
    ok = rep["finite"] and rep["max_residual"] < tol
    result = {**rep, "expression": to_infix(F.expr), "tolerance": tol,
              "verdict": "solution" if ok else "not a solution"}
    csv_rows = [("x", "t", "u", "residual")] + grid_table(F, g)
    return result, ok, csv_rows


def cmd_reduce(args):
    from .reductions import REDUCTION_GROUPS, invariant, invariant_check, reduce

    if args.group not in REDUCTION_GROUPS:
        raise UsageError(f"--group must be one of {', '.join(REDUCTION_GROUPS)}")
    k = args.k if args.k is not None else Fraction(1)
    if not isinstance(k, Fraction):
        raise UsageError("--k must be rational for the symbolic reduction")
    r = reduce(args.group, k)
    inv = invariant(args.group, k)
    result = {**r.to_json(), "invariant": inv.to_json(),
              "invariant_annihilated": invariant_check(inv, k)}
    if args.group == "Xi4":
        result["k"] = k
    return result, r.feasible, None


def cmd_series(args):
    from .reductions import (
        lowest_residual_order, ode_integrate, reduce, series_eval, series_first_order,
        series_second_order, series_traveling,
    )

    lam = _require_lambda(args)
    N = args.N if args.N is not None else 20
    c0 = args.c0 if args.c0 is not None else Fraction(1, 2)
    c1 = args.c1 if args.c1 is not None else Fraction(0)
    k = args.k if args.k is not None else Fraction(1)
    if args.ode == "first":
        s = series_first_order(lam, c0, N)
        ode, init = reduce("Xi1"), (float(c0),)
    elif args.ode == "second":
        s = series_second_order(lam, c0, c1, N)
        ode, init = reduce("Xi2"), (float(c0), float(c1))
    else:
        s = series_traveling(lam, k, c0, c1, N)
        ode, init = reduce("Xi4", k), (float(c0), float(c1))
    lo, hi, n = args.grid or (-0.2, 0.2, 9)
    etas = np.linspace(lo, hi, n)
    step = args.step
    trajs = {}
    if hi > 0:
        trajs[1] = ode_integrate(ode, init, (0.0, hi), step, float(lam))
    if lo < 0:
        trajs[-1] = ode_integrate(ode, init, (0.0, lo), step, float(lam))
    table = []
    for e in etas:
        e = float(e)
        ref = float(init[0]) if e == 0 else float(trajs[1 if e > 0 else -1](e))
        val = float(series_eval(s, e))
        table.append({"eta": e, "series": val, "rk4": ref, "abs_err": abs(val - ref)})
    worst = max(r["abs_err"] for r in table)
    tol = args.tol if args.tol is not None else 1e-8
    result = {**s.to_json(), "lowest_residual_order": lowest_residual_order(s),
              "comparison": table, "max_abs_err": worst, "tolerance": tol, "rk4_step": step}
    csv_rows = [("n", "c_n")] + [(i, str(c)) for i, c in enumerate(s.coeffs)]
    csv_rows += [()] + [("eta", "series", "rk4", "abs_err")] + [
        (r["eta"], r["series"], r["rk4"], r["abs_err"]) for r in table]
    return result, worst <= tol, csv_rows


def cmd_conslaw(args):
    from .conslaw import (
        ConservedVector, conserved_vector, divergence_onshell, refinement_study,
        self_adjointness,
    )
    from .lie import named_field
    from .symcore import U, Const, Sym

    if args.probe:
        p = self_adjointness(args.probe)
        return p.to_json(), p.holds, None
    if not args.generator:
        raise UsageError("conslaw needs --generator or --probe")
    if args.generator == "junk":
        cv = ConservedVector(Sym(U), Const(0), Const(0), "junk")
    else:
        try:
            G = named_field(args.generator)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        cv = conserved_vector(G)
    result = cv.to_json()
    check = args.check or "divergence"
    if check == "divergence":
        rep = divergence_onshell(cv)
        result.update(rep.to_json())
        return result, rep.conserved, None
    lam = _require_lambda(args)
    study = refinement_study(cv, lam=float(lam))
    tol = args.tol if args.tol is not None else 1e-4
    ok = study["max_divergence"][1] < tol and all(r >= 3 for r in study["ratios"])
    result.update({"numeric": study, "tolerance": tol,
                   "verdict": "converges" if ok else "does not converge"})
    return result, ok, None


def cmd_errata(args):
    from .errata import errata_report

    return errata_report(), True, None


def cmd_selftest(args):
    from .selftest import run_selftest

    rep = run_selftest()
    return rep, rep["failed"] == 0, None


COMMANDS = {
    "symmetries": cmd_symmetries, "table": cmd_table, "adjoint": cmd_adjoint,
    "optimal": cmd_optimal, "transform": cmd_transform, "reduce": cmd_reduce,
    "series": cmd_series, "conslaw": cmd_conslaw, "errata": cmd_errata,
    "selftest": cmd_selftest,
}
CSV_COMMANDS = {"optimal", "transform", "series"}


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", type=rational, help="reaction coefficient")
    common.add_argument("--eps", type=float, help="group parameter")
    common.add_argument("--grid", type=grid, help="a:b:n sample grid")
    common.add_argument("--N", type=int, help="series truncation order")
    common.add_argument("--emit", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=float, help="pass threshold for numeric checks")

    p = argparse.ArgumentParser(prog="symlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"symlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("symmetries", parents=[common], help="invariance check of generators")
    s.add_argument("--candidate", help="G1, G2, G3 or Gq (default: all)")
    sub.add_parser("table", parents=[common], help="commutator table")
    s = sub.add_parser("adjoint", parents=[common], help="adjoint representation")
    s.add_argument("--generator", help="G1, G2 or G3 for a numeric matrix at --eps")
    s = sub.add_parser("optimal", parents=[common], help="optimal-system representatives")
    s.add_argument("--vector", type=vector3, help="l1,l2,l3 (rationals)")
    s.add_argument("--count", type=int, help="random vectors when no --vector (default 1000)")
    s = sub.add_parser("transform", parents=[common], help="transform the soliton by a group")
    s.add_argument("--action", required=True, help="Xi1..Xi7")
    s.add_argument("--solution", default="soliton", help="seed solution (soliton)")
    s.add_argument("--k", type=rational, help="parameter of Xi4 (default 1)")
    s = sub.add_parser("reduce", parents=[common], help="similarity reduction to an ODE")
    s.add_argument("--group", required=True, help="Xi1..Xi7")
    s.add_argument("--k", type=rational, help="parameter of Xi4 (default 1)")
    s = sub.add_parser("series", parents=[common], help="power series of a reduced ODE")
    s.add_argument("--ode", required=True, choices=("first", "second", "traveling"))
    s.add_argument("--c0", type=rational, help="f(0) (default 1/2)")
    s.add_argument("--c1", type=rational, help="f'(0) for second-order ODEs (default 0)")
    s.add_argument("--k", type=rational, help="wave speed parameter of the traveling ODE (default 1)")
    s.add_argument("--step", type=float, default=1e-3, help="RK4 step for the comparison")
    s = sub.add_parser("conslaw", parents=[common], help="conserved vectors and probes")
    s.add_argument("--generator", help="G1, G2, G3, Gq or junk (the negative control)")
    s.add_argument("--check", choices=("divergence", "numeric"))
    s.add_argument("--probe", choices=("strict", "quasi", "nonlinear"))
    sub.add_parser("errata", parents=[common], help="printed claims vs computed values")
    sub.add_parser("selftest", parents=[common], help="invariant suite")
    return p


def _write_csv(rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow(r)
    out.write(buf.getvalue())


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    keys = ("lam", "eps", "grid", "N", "tol", "candidate", "generator", "vector", "count",
            "action", "solution", "k", "group", "ode", "c0", "c1", "step", "check", "probe")
    report = {"command": args.command, "argv": argv, "params": _params(args, keys),
              "version": __version__}
    if args.command == "optimal" and args.vector is None:
        report["params"]["seed"] = default_seed()
    try:
        if args.emit == "csv" and args.command not in CSV_COMMANDS:
            raise UsageError(f"--emit csv is available for {', '.join(sorted(CSV_COMMANDS))}")
        result, ok, rows = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"symlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SymlabError, ValueError, ArithmeticError) as exc:
        report.update({"status": "error",
                       "error": {"type": type(exc).__name__, "message": str(exc)}})
        out.write(json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n")
        return EXIT_FAILED
    if args.emit == "csv":
        _write_csv(rows, out)
    else:
        report.update({"result": result, "status": "ok" if ok else "check-failed"})
        out.write(json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_FAILED


def main(argv=None) -> int:
    sys.exit(run(argv))


__all__ = ["build_parser", "main", "run"]
