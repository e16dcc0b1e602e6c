"""Command-line front end.

Subcommands: ``eval``, ``sweep``, ``optimize``, ``certify``, ``axioms`` and
``derive``.  Reports are deterministic JSON (or CSV for sweeps) carrying
the tool version, seed, tolerance and a digest of the inputs, so that a
rerun with the same inputs produces the same bytes.

Exit codes: 0 success (a violation found is a success), 2 bad input,
3 numerical failure, 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .chains import (
    chain_from_json_dict,
    chain_to_json_dict,
    format_chain,
    generate_eq10_chain,
    pm_chain,
    synthesize_chain,
    tripartite_chain,
    verify_chain,
)
from .classical import classical_max_violation
from .distance import (
    DistanceKind,
    JointDistribution,
    ProductTerm,
    check_axioms,
    distance,
    emax_shannon,
    shannon_entropy,
)
from .exceptions import ChainStructureError, NumericalError, PreconditionError
from .inequalities import (
    PM_LABELS,
    PM_TRIPLES,
    build_multipartite_entropic,
    evaluate,
    get_inequality,
    ghz_scenario,
    standard_multipartite_angles,
)
from .optimize import OptimizerSettings, optimize
from .serialization import load_scenario, resolve_scenario_path

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_INVARIANT = 4
JOBS_ENV = "INFODISTANCE_JOBS"


class InvariantBreach(RuntimeError):
    pass


def _digest(payload: bytes) -> str:
    return "sha256:" + hashlib.sha256(payload).hexdigest()


def _config_echo(args) -> dict:
    skip = {"func", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _envelope(args, result, input_bytes: bytes) -> dict:
    return {
        "tool": "infodistance",
        "version": __version__,
        "command": args.command,
        "seed": args.seed,
        "tolerance": args.tolerance,
        "input_digest": _digest(input_bytes),
        "config": _config_echo(args),
        "result": result,
    }


def _args_bytes(args) -> bytes:
    return json.dumps(_config_echo(args), sort_keys=True).encode()


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def _dump_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- eval ----------------------------------------------------------------------

def _distance_report(dist: JointDistribution, pairs, tolerance) -> list[dict]:
    out = []
    for spec in pairs:
        parts = [p.strip() for p in spec.split(",")]
        if len(parts) != 2:
            raise ValueError(f"--distance expects two comma-separated labels, got {spec!r}")
        a, b = parts
        out.append({
            "a": a, "b": b,
            "entropic": distance(dist, ProductTerm(a.split()), ProductTerm(b.split()), DistanceKind.ENTROPIC),
            "covariance": distance(dist, ProductTerm(a.split()), ProductTerm(b.split()), DistanceKind.COVARIANCE),
        })
    return out


def cmd_eval(args) -> int:
    path = resolve_scenario_path(args.scenario)
    data = path.read_bytes()
    sf = load_scenario(path)
    name = args.inequality or sf.inequality
    result: dict = {"scenario": sf.scenario.name}
    if name:
        ineq = get_inequality(name, args.n or sf.n)
        report = evaluate(ineq, sf.scenario, args.tolerance)
        result["evaluation"] = report.to_json_dict()
        _say(f"{ineq.name}: lhs={report.lhs:.12g} rhs={report.rhs:.12g} "
             f"violation={report.violation:.12g}" + (" (violated)" if report.violated else ""))
    binding = sf.scenario.binding
    if isinstance(binding, JointDistribution):
        result["entropy"] = shannon_entropy(binding)
        if binding.n >= 2:
            result["emax_shannon"] = emax_shannon(binding)
        if args.distance:
            result["distances"] = _distance_report(binding, args.distance, args.tolerance)
            for d in result["distances"]:
                _say(f"d({d['a']},{d['b']}) = {d['entropic']:.12g}")
    elif args.distance:
        raise ValueError("--distance needs a scenario with a distribution binding")
    if not name and not args.distance:
        raise ValueError("scenario names no inequality; pass --inequality or --distance")
    if args.format == "csv":
        ev = result.get("evaluation")
        if ev is None:
            raise ValueError("csv output needs an inequality evaluation")
        _emit(args, _dump_csv(["scenario", "inequality", "lhs", "rhs", "violation"],
                              [[sf.scenario.name, ev["inequality"], ev["lhs"], ev["rhs"], ev["violation"]]]))
    else:
        _emit(args, _dump_json(_envelope(args, result, data)))
    return EXIT_OK


# -- sweep ---------------------------------------------------------------------

def _sweep_values(args):
    if args.steps < 0:
        raise ValueError("--steps must be non-negative")
    if args.steps == 0:
        return []
    if args.steps == 1:
        return [args.start]
    return list(np.linspace(args.start, args.stop, args.steps))


def cmd_sweep(args) -> int:
    path = resolve_scenario_path(args.scenario)
    data = path.read_bytes()
    sf = load_scenario(path)
    param = args.param
    values = _sweep_values(args)

    if param == "n":
        ns = [int(round(v)) for v in values]

        def point(n):
            ineq = build_multipartite_entropic(n)
            return evaluate(ineq, ghz_scenario(ineq, standard_multipartite_angles(n)), args.tolerance)
        inputs = ns
    elif param == "lambda":
        name = args.inequality or sf.inequality
        if not name:
            raise ValueError("scenario names no inequality; pass --inequality")
        ineq = get_inequality(name, args.n or sf.n)

        def point(lam):
            return evaluate(ineq, sf.with_lambda(lam).scenario, args.tolerance)
        inputs = [float(v) for v in values]
    elif param.startswith("angle:"):
        label = param.split(":", 1)[1]
        name = args.inequality or sf.inequality
        if not name:
            raise ValueError("scenario names no inequality; pass --inequality")
        ineq = get_inequality(name, args.n or sf.n)

        def point(angle):
            return evaluate(ineq, sf.with_angle(label, angle).scenario, args.tolerance)
        inputs = [float(v) for v in values]
    else:
        raise ValueError(f"unknown sweep parameter {param!r}; use lambda, n or angle:<label>")

    jobs = max(1, args.jobs)
    if jobs > 1 and len(inputs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(point, inputs))
    else:
        reports = [point(x) for x in inputs]

    header = [param, "lhs", "rhs", "violation"]
    rows = [[x, r.lhs, r.rhs, r.violation] for x, r in zip(inputs, reports)]
    if args.format == "json":
        result = {"param": param, "rows": [dict(zip(header, row)) for row in rows]}
        _emit(args, _dump_json(_envelope(args, result, data)))
    else:
        _emit(args, _dump_csv(header, rows))
    _say(f"sweep over {param}: {len(rows)} rows")
    return EXIT_OK


# -- optimize ------------------------------------------------------------------

def cmd_optimize(args) -> int:
    ineq = get_inequality(args.inequality, args.n)
    settings = OptimizerSettings(
        grid_points_per_angle=args.grid,
        max_refinement_iters=args.max_iters,
        step_shrink=args.step_shrink,
        convergence_tol=args.convergence_tol,
        tie_parties=not args.untied,
        seed=args.seed,
    )
    res = optimize(ineq, None, settings)
    if res.objective < res.grid_objective:
        raise InvariantBreach("refinement decreased the objective")
    _say(f"{ineq.name}: best violation {res.objective:.12g} after {res.iterations} sweeps")
    _emit(args, _dump_json(_envelope(args, res.to_json_dict(), _args_bytes(args))))
    return EXIT_OK


# -- certify -------------------------------------------------------------------

def cmd_certify(args) -> int:
    ineq = get_inequality(args.inequality, args.n)
    rep = classical_max_violation(ineq, None, args.vertex_only, args.mixtures, args.seed)
    if ineq.kind is DistanceKind.ENTROPIC and rep.max_violation > 1e-12:
        raise InvariantBreach(f"classical violation {rep.max_violation!r} of an entropic inequality")
    if ineq.kind is DistanceKind.COVARIANCE and rep.max_violation > 1e-12:
        raise InvariantBreach(f"classical value exceeds bound by {rep.max_violation!r}")
    msg = f"{ineq.name}: max classical violation {rep.max_violation:.6g} over {rep.vertices} vertices"
    if rep.max_value is not None:
        msg += f" (max value {rep.max_value:g}, bound {ineq.classical_bound:g})"
    _say(msg)
    _emit(args, _dump_json(_envelope(args, rep.to_json_dict(), _args_bytes(args))))
    return EXIT_OK


# -- axioms --------------------------------------------------------------------

def cmd_axioms(args) -> int:
    kinds = [DistanceKind.ENTROPIC, DistanceKind.COVARIANCE] if args.kind == "both" else [DistanceKind(args.kind)]
    if args.scenario:
        path = resolve_scenario_path(args.scenario)
        data = path.read_bytes()
        binding = load_scenario(path).scenario.binding
        if not isinstance(binding, JointDistribution):
            raise ValueError("axiom check needs a scenario with a distribution binding")
        dists = [binding]
    else:
        if args.variables < 3:
            raise ValueError("--variables must be at least 3")
        data = _args_bytes(args)
        rng = np.random.default_rng(args.seed)
        labels = [f"X{i}" for i in range(1, args.variables + 1)]
        dists = []
        for _ in range(args.samples):
            w = rng.dirichlet(np.ones(2**args.variables))
            dists.append(JointDistribution(labels, w / w.sum()))
    result = {"distributions": len(dists), "trials_per_distribution": args.trials, "kinds": {}}
    for kind in kinds:
        worst = math.inf
        nonneg = True
        for i, d in enumerate(dists):
            rep = check_axioms(d, kind, args.trials, args.seed + i)
            worst = min(worst, rep.worst_slack)
            nonneg &= rep.nonnegative
        passed = nonneg and worst >= -1e-12
        result["kinds"][kind.value] = {"worst_slack": worst if dists else None,
                                       "nonnegative": nonneg, "passed": passed}
        _say(f"{kind.value}: worst slack {worst:.3e} over {len(dists)} distributions")
        if not passed:
            raise InvariantBreach(f"{kind.value} distance failed the axioms (worst slack {worst!r})")
    _emit(args, _dump_json(_envelope(args, result, data)))
    return EXIT_OK


# -- derive --------------------------------------------------------------------

def _terms(specs):
    return [ProductTerm(s.replace(",", " ").split()) for s in specs]


def cmd_derive(args) -> int:
    data = _args_bytes(args)
    if args.chain:
        path = Path(args.chain)
        data = path.read_bytes()
        chain = chain_from_json_dict(json.loads(data))
    elif args.preset == "tripartite":
        chain = tripartite_chain()
    elif args.preset == "pm":
        chain = pm_chain()
    elif args.preset == "multipartite":
        if args.n is None:
            raise ValueError("--preset multipartite needs --n")
        chain = generate_eq10_chain(args.n)
    elif args.preset == "pm-synthesize":
        chain = synthesize_chain(ProductTerm(PM_TRIPLES[5]), [ProductTerm(t) for t in PM_TRIPLES], PM_LABELS)
    else:
        if not args.target or not args.allowed:
            raise ValueError("give --chain, --preset, or --target with --allowed")
        target = _terms([args.target])[0]
        chain = synthesize_chain(target, _terms(args.allowed))
    if chain is None:
        result = {"found": False}
        _say("no derivation: the target is not a product of the allowed terms")
    else:
        verdict = verify_chain(chain)
        if not verdict and not args.chain:
            raise InvariantBreach(f"generated chain rejected: {verdict.reason}")
        text = format_chain(chain)
        result = {"found": True, "accepted": verdict.accepted, "failing_step": verdict.failing_step,
                  "reason": verdict.reason, "chain": chain_to_json_dict(chain), "text": text}
        _say(text)
        _say("accepted" if verdict else f"rejected: {verdict.reason}")
    _emit(args, _dump_json(_envelope(args, result, data)))
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def _default_jobs() -> int:
    try:
        return int(os.environ.get(JOBS_ENV, "1"))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--tolerance", type=float, default=1e-9,
                        help="violation reporting tolerance (default 1e-9)")
    common.add_argument("--format", choices=["json", "csv"],
                        help="report format (default csv for sweep, json otherwise)")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=_default_jobs(),
                        help=f"worker threads for sweeps (default ${JOBS_ENV} or 1)")

    parser = argparse.ArgumentParser(prog="infodistance", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"infodistance {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate an inequality on a scenario file")
    p.add_argument("scenario", help="scenario JSON path or bundled scenario name")
    p.add_argument("--inequality", help="tripartite, multipartite, pm, mermin or cabello")
    p.add_argument("--n", type=int, help="party count for the multipartite inequality")
    p.add_argument("--distance", action="append", metavar="A,B",
                   help="also report d(A,B) on a distribution scenario (repeatable)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", parents=[common], help="evaluate over a parameter range (CSV)")
    p.add_argument("scenario", help="template scenario")
    p.add_argument("--param", required=True, help="lambda, n, or angle:<label>")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True, help="number of points (0 gives a header only)")
    p.add_argument("--inequality")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", parents=[common], help="maximize violation over XY angles on GHZ")
    p.add_argument("--inequality", default="tripartite")
    p.add_argument("--n", type=int)
    p.add_argument("--grid", type=int, default=64, help="grid points per angle")
    p.add_argument("--untied", action="store_true", help="independent angles per party")
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--step-shrink", type=float, default=0.5)
    p.add_argument("--convergence-tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("certify", parents=[common], help="classical maximum by enumeration")
    p.add_argument("inequality")
    p.add_argument("--n", type=int)
    p.add_argument("--vertex-only", action="store_true")
    p.add_argument("--mixtures", type=int, default=10_000)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("axioms", parents=[common], help="check distance axioms on random distributions")
    p.add_argument("--scenario", help="check one distribution scenario instead of random ones")
    p.add_argument("--variables", type=int, default=4)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--trials", type=int, default=100, help="term triples per distribution")
    p.add_argument("--kind", choices=["entropic", "covariance", "both"], default="both")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("derive", parents=[common], help="verify or synthesize a derivation chain")
    p.add_argument("--chain", help="chain JSON file to verify")
    p.add_argument("--preset", choices=["tripartite", "pm", "pm-synthesize", "multipartite"])
    p.add_argument("--n", type=int)
    p.add_argument("--target", help="target term, labels separated by spaces or commas")
    p.add_argument("--allowed", action="append", help="allowed term (repeatable)")
    p.set_defaults(func=cmd_derive)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "json"
    try:
        return args.func(args)
    except InvariantBreach as exc:
        _say(f"error: invariant breach: {exc}")
        return EXIT_INVARIANT
    except (NumericalError, FloatingPointError) as exc:
        _say(f"error: numerical failure: {exc}")
        return EXIT_NUMERICAL
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError,
            PreconditionError, ChainStructureError) as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
