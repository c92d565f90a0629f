"""Command-line reports over the exact series, oracles, asymptotics,
probability formulas, and the Monte Carlo engine.

Every subcommand prints one report (JSON by default) with the command
echo, its parameters, and the results. Rationals stay
exact as "p/q" strings unless --approx is passed; floats carry 15
significant digits. Exit codes: 0 ok, 2 usage, 3 resource limit,
4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations, islice

from .asymptotics import (
    c_asymptotic,
    ln_fraction,
    tn_exact_log,
    tn_fixed,
    tn_saddle,
)
from .census import (
    ForbiddenSet,
    catalogue,
    closed_form,
    compute_wk,
    inequality_check,
    recurrence_residual,
    wright_constants,
)
from .errors import ConsistencyError, ResourceLimitError
from .oracle import (
    GraphInstance,
    brute_census,
    connected_count,
    copy_count,
    cycle_edges,
    iter_multigraphs,
)
from .probability import (
    ComponentProfile,
    Deduction,
    profile_probability,
    profile_rational_part,
    theta_exponent,
)
from .simulator import ProcessConfig, run_trials

__all__ = ["main"]


# -- report rendering -------------------------------------------------------


def _encode(value, approx: bool):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        if approx:
            return _encode(float(value), approx)
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 \
            else str(value.numerator)
    if isinstance(value, float):
        return float(f"{value:.15g}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): _encode(v, approx) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v, approx) for v in value]
    return str(value)


def _flatten(prefix, value):
    if isinstance(value, dict):
        for k, v in value.items():
            yield from _flatten(f"{prefix}.{k}" if prefix else str(k), v)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            yield from _flatten(f"{prefix}.{i}", v)
    else:
        yield prefix, value


def _emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(["key", "value"])
        for key, value in _flatten("", report):
            writer.writerow([key, value])
        return buffer.getvalue().rstrip("\n")
    lines = [f"{key} = {value}" for key, value in _flatten("", report)]
    return "\n".join(lines)


def _report(args, results: dict, notes: dict | None = None) -> dict:
    parameters = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("handler", "format", "approx", "command") and v is not None
    }
    report = {
        "command": args.command,
        "parameters": _encode(parameters, False),
        "results": _encode(results, args.approx),
    }
    if notes:
        report["notes"] = _encode(notes, args.approx)
    return report


# -- shared argument parsing ------------------------------------------------


def _polygons(text: str) -> frozenset:
    if not text:
        return frozenset()
    return frozenset(int(p) for p in text.split(","))


def _params(text: str) -> dict:
    out = {}
    for item in text.split(","):
        if not item:
            continue
        key, _, raw = item.partition("=")
        if not _:
            raise ValueError(f"malformed parameter {item!r}, expected key=value")
        try:
            out[key.strip()] = int(raw)
        except ValueError:
            out[key.strip()] = float(raw)
    return out


def _component_excesses(inst) -> list:
    if isinstance(inst, GraphInstance):
        edges = list(inst.edges)
        vertices = range(inst.n)
    else:
        edges = [pair for pair, mult in inst.mult.items() for _ in range(mult)]
        vertices = range(inst.n)
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    nv, ne = {}, {}
    for v in vertices:
        nv[find(v)] = nv.get(find(v), 0) + 1
    for a, b in edges:
        ne[find(a)] = ne.get(find(a), 0) + 1
    return [ne.get(r, 0) - nv[r] for r in nv]


def _brute_predicate(expression: str, model: str):
    atoms = [a.strip() for a in expression.split("&") if a.strip()]
    if not atoms:
        return None

    def check(inst, atom):
        if atom == "connected":
            return inst.is_connected()
        if atom == "c3free":
            atom = "cpfree:3"
        if atom.startswith("cpfree:"):
            p = int(atom.split(":", 1)[1])
            if model == "multigraph":
                return not inst.has_polygon(p)
            return copy_count(inst, p, cycle_edges(p)) == 0
        if atom.startswith("onecopy:"):
            p = int(atom.split(":", 1)[1])
            if model == "multigraph":
                raise ValueError("onecopy is defined for the graph model")
            return copy_count(inst, p, cycle_edges(p)) == 1
        if atom.startswith("maxexcess:"):
            bound = int(atom.split(":", 1)[1])
            return all(e <= bound for e in _component_excesses(inst))
        raise ValueError(f"unknown predicate atom {atom!r}")

    return lambda inst: all(check(inst, atom) for atom in atoms)


def _brute_count(n, m, predicate, model, workers):
    if workers == 1:
        return brute_census(n, m, predicate, model)
    brute_census(n, 0, None, model)  # same size guards as the sequential path

    def instances():
        if model == "graph":
            pairs = list(combinations(range(n), 2))
            for subset in combinations(range(len(pairs)), m):
                yield GraphInstance(n, [pairs[i] for i in subset])
        else:
            yield from iter_multigraphs(n, m)

    def weigh(inst):
        value = True if predicate is None else predicate(inst)
        if value is True:
            return inst.kappa() if model == "multigraph" else 1
        if value is False:
            return 0
        return value

    def part(offset):
        return sum(weigh(inst) for inst in islice(instances(), offset, None, workers))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(part, range(workers)))


# -- subcommand handlers ----------------------------------------------------


def _cmd_constants(args):
    table = wright_constants(args.kmax, args.polygons_count)
    results = {
        "b": list(table.b[1:]),
        "c": list(table.c[1:]),
        "cprime": list(table.cprime[1:]),
        "cprime_xi": list(table.cprime_xi[1:]),
    }
    return _report(args, results, {"routes": "recurrence and shortcut agree"})


def _cmd_egf(args):
    forbidden = ForbiddenSet(_polygons(args.polygons)) if args.polygons else None
    expr = closed_form(args.name, forbidden)
    series = expr.eval_series(args.order)
    results = {
        "coefficients": [series[i] for i in range(args.order + 1)],
        "counts": [series.count(i) for i in range(args.order + 1)],
    }
    if args.decompose:
        results["log_coefficient"] = expr.log_coeff
        results["x_powers"] = {str(-t): c for t, c in sorted(expr.terms.items())}
    return _report(args, results, {"catalogue": catalogue()[args.name][1]})


def _cmd_wk(args):
    ws = compute_wk(args.k, args.model)
    expr = ws[args.k - 1]
    results = {
        "counts": [expr.count(n) for n in range(args.order + 1)],
        "x_powers": {str(-t): c for t, c in sorted(expr.terms.items())},
    }
    notes = {"pinned_against": "exponential-formula oracle"}
    return _report(args, results, notes)


def _cmd_oracle(args):
    value = connected_count(args.n, args.n + args.k, args.model)
    return _report(
        args,
        {"count": value},
        {"oracle": "exponential formula over all labelled graphs"},
    )


def _cmd_brute(args):
    predicate = _brute_predicate(args.pred, args.model)
    value = _brute_count(args.n, args.m, predicate, args.model, args.workers)
    return _report(args, {"count": value}, {"oracle": "exhaustive enumeration"})


def _cmd_residual(args):
    series = recurrence_residual(
        args.k, forbidden=args.forbidden, model=args.model, order=args.order
    )
    first = next((n for n in range(args.order + 1) if series[n] != 0), None)
    results = {"zero": series.is_zero(), "order": args.order,
               "first_nonzero": first}
    return _report(args, results)


def _cmd_ineq(args):
    report = inequality_check(
        args.which, k=args.k, order=args.order, r=args.polygons_count
    )
    results = {
        "ok": report.ok,
        "order": report.order,
        "first_violation": report.first_violation,
        "min_epsilon": report.min_epsilon,
    }
    return _report(args, results)


def _cmd_asympt(args):
    params = _params(args.params)
    if args.what == "tn-saddle":
        n, an, beta = int(params["n"]), int(params["an"]), params.get("beta", 0)
        value = tn_saddle(n, an / n, beta)
        results = {"ln_value": value}
        if n <= 2000:
            exact = tn_exact_log(n, an + beta)
            results["ln_exact"] = exact
            results["relative_error"] = abs(__import__("math").exp(value - exact) - 1)
    elif args.what == "tn-fixed":
        n, y = int(params["n"]), params["y"]
        value = tn_fixed(n, y)
        results = {"ln_value": value}
        if n <= 2000:
            exact = tn_exact_log(n, y)
            results["ln_exact"] = exact
    elif args.what == "c":
        n, k = int(params["n"]), int(params["k"])
        results = {"ln_value": c_asymptotic(n, k)}
        if args.check:
            exact = ln_fraction(compute_wk(k, "graph")[k - 1].count(n))
            results["ln_exact"] = exact
    else:
        raise ValueError("what must be tn-saddle, tn-fixed or c")
    return _report(args, results)


def _cmd_prob(args):
    profile = ComponentProfile(
        tuple(int(x) for x in args.profile.split(",")) if args.profile else ()
    )
    theta = _polygons(args.theta)
    deductions = []
    for item in args.deduct or ():
        k, _, c = item.partition(":")
        deductions.append(Deduction(int(k), Fraction(c)))
    results = {
        "probability": profile_probability(profile, theta, deductions),
        "rational_part": profile_rational_part(profile, deductions),
        "theta_exponent": theta_exponent(theta),
    }
    return _report(args, results, {"leading_order": "error term O(n^{-1/3}) not modelled"})


def _cmd_simulate(args):
    config = ProcessConfig(
        n=args.n,
        m=args.m,
        mu=args.mu,
        model=args.model,
        forbidden=ForbiddenSet(_polygons(args.polygons)),
        trials=args.trials,
        seed=args.seed,
        max_excess_tracked=args.max_excess,
        engine=args.engine,
        workers=args.workers,
    )
    estimate = run_trials(config, args.event)
    results = {
        "p_hat": estimate.p_hat,
        "stderr": estimate.stderr,
        "trials": estimate.trials,
        "discarded": estimate.discarded,
    }
    notes = {"seed": args.seed, "engine": args.engine, "m": config.resolved_m}
    return _report(args, results, notes)


# -- parser -----------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xifree",
        description="Exact and asymptotic reports on sparse graph families",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--approx", action="store_true",
                        help="print rationals as floating point")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", parents=[common])
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--polygons", dest="polygons_count", type=int, default=0,
                   help="number of forbidden cycle lengths r")
    p.set_defaults(handler=_cmd_constants)

    p = sub.add_parser("egf", parents=[common])
    p.add_argument("--name", required=True, choices=sorted(catalogue()))
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--polygons", default="")
    p.add_argument("--decompose", action="store_true")
    p.set_defaults(handler=_cmd_egf)

    p = sub.add_parser("wk", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--model", choices=("graph", "multigraph"), default="graph")
    p.add_argument("--order", type=int, default=12)
    p.set_defaults(handler=_cmd_wk)

    p = sub.add_parser("oracle", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--model", choices=("graph", "multigraph"), default="graph")
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("brute", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--pred", default="")
    p.add_argument("--model", choices=("graph", "multigraph"), default="graph")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(handler=_cmd_brute)

    p = sub.add_parser("residual", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--forbidden", choices=("c3", "none"), default="none")
    p.add_argument("--model", choices=("graph", "multigraph"), default="graph")
    p.add_argument("--order", type=int, default=25)
    p.set_defaults(handler=_cmd_residual)

    p = sub.add_parser("ineq", parents=[common])
    p.add_argument("--which", required=True,
                   choices=("wright", "sbound", "jbound", "constants"))
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--order", type=int, default=40)
    p.add_argument("--polygons", dest="polygons_count", type=int, default=1)
    p.set_defaults(handler=_cmd_ineq)

    p = sub.add_parser("asympt", parents=[common])
    p.add_argument("--what", required=True, choices=("tn-saddle", "tn-fixed", "c"))
    p.add_argument("--params", required=True,
                   help="comma-separated key=value, e.g. n=400,an=12,beta=0")
    p.add_argument("--check", action="store_true",
                   help="also compute the exact reference where affordable")
    p.set_defaults(handler=_cmd_asympt)

    p = sub.add_parser("prob", parents=[common])
    p.add_argument("--profile", default="")
    p.add_argument("--theta", default="")
    p.add_argument("--deduct", action="append",
                   help="k:cH, may repeat; e.g. 2:1/24")
    p.set_defaults(handler=_cmd_prob)

    p = sub.add_parser("simulate", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--model", choices=("uniform", "permutation"), default="uniform")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--event", required=True)
    p.add_argument("--polygons", default="")
    p.add_argument("--max-excess", dest="max_excess", type=int, default=6)
    p.add_argument("--engine", choices=("numba", "python"), default="numba")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(handler=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        report = args.handler(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 4
    except (ValueError, KeyError, TypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    print(_emit(report, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
