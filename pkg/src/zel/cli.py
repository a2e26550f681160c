"""Command-line interface.

Subcommands:
  gen       generate an instance and write the edge list plus sidecar
  diagnose  validate a metric file or report instance diagnostics
  solve     run a solver on an instance, or score a solution with --eval
  project   project every vertex into the tight span, one JSON row each
  embed     embed a solution into the continuization and sample radii
  gap       run the sweep described by a key=value config file
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as zio
from .continuization import (
    EmbeddingParams,
    con_distance,
    embed_girth,
    embed_tree,
    girth_claim_violations,
)
from .errors import ZelError
from .graph import girth
from .harness import (
    ExperimentConfig,
    emit_report,
    run_gap_experiment,
    size_function,
)
from .instance import build_instance, instance_diagnostics
from .metricspace import validate_semimetric
from .projection import is_extreme_point, project_vertex
from .solution import (
    CanonicalSolution,
    canonical_cost,
    cost,
    perturbed_solution,
    random_canonical_solution,
    zero_extension_solution,
)
from .solvers import (
    SolveBudget,
    brute_canonical,
    brute_zero_ext,
    local_search_canonical,
    lp_feasible_value,
)


def _cmd_gen(args) -> int:
    inst = build_instance(args.n, args.seed, args.girth_coeff, args.terminal_rule)
    diag = instance_diagnostics(inst).to_dict()
    zio.save_instance(inst, args.out, diagnostics=diag)
    print(json.dumps({"n": inst.n, "k": inst.k, "m": inst.graph.m, **diag}))
    return 0


def _cmd_diagnose(args) -> int:
    if args.metric:
        with open(args.metric) as fh:
            matrix = np.array(json.load(fh), dtype=float)
        witness = validate_semimetric(matrix)
        if witness is None:
            print(json.dumps({"ok": True}))
            return 0
        print(json.dumps({"ok": False, "violation": list(witness)}))
        return 1
    inst = zio.load_instance(args.instance)
    print(json.dumps(instance_diagnostics(inst).to_dict()))
    return 0


def _cmd_solve(args) -> int:
    inst = zio.load_instance(args.instance)
    if args.eval:
        sol = zio.load_solution(args.eval, inst)
        if isinstance(sol, CanonicalSolution):
            value = canonical_cost(sol, inst)
        else:
            sol.validate(inst)
            value = cost(sol, inst)
        print(json.dumps({"cost": value, "lp_value": lp_feasible_value(inst)}))
        return 0
    f_k = args.fk if args.fk else size_function(inst.k, 0.5)
    budget = SolveBudget(
        max_assignments=args.budget, max_iterations=args.iterations,
        restarts=args.restarts, seed=args.seed,
    )
    if args.method == "brute-0ext":
        res = brute_zero_ext(inst, budget)
        solution, value = zero_extension_solution(inst, res.assignment), res.cost
    elif args.method == "brute-canonical":
        out = brute_canonical(inst, f_k, budget)
        solution, value = out.solution, out.cost
    else:
        out = local_search_canonical(inst, f_k, budget)
        solution, value = out.solution, out.cost
    if args.out:
        zio.save_solution(solution, args.out)
    print(json.dumps({"cost": value, "f_k": f_k, "lp_value": lp_feasible_value(inst)}))
    return 0


def _cmd_project(args) -> int:
    inst = zio.load_instance(args.instance)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for v in range(inst.n):
            x = project_vertex(inst, v)
            row = {
                "vertex": v,
                "coords": [float(c) for c in x.coords],
                "member": True,
                "extreme": bool(is_extreme_point(x, inst.terminal_metric)),
            }
            out.write(json.dumps(row) + "\n")
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_embed(args) -> int:
    inst = zio.load_instance(args.instance)
    if args.solution:
        sol = zio.load_solution(args.solution, inst)
        if isinstance(sol, CanonicalSolution):
            sol = sol.to_solution(inst)
    elif args.perturb:
        sol = perturbed_solution(inst, args.seed)
    else:
        sol = random_canonical_solution(inst, args.seed)
    L = sol.partition.cluster_count
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.mode == "tree":
            phi = embed_tree(sol, inst)
            ratios = _pair_ratios(sol, inst, phi)
            out.write(json.dumps({"mode": "tree", "pair_ratios": ratios, "violated_claims": []}) + "\n")
            return 0
        g_val = girth(inst.graph)
        for s in range(args.samples):
            params = EmbeddingParams.sample(inst, args.seed + s, t_star=args.t_star)
            phi = embed_girth(sol, inst, params, verify_claims=False, girth_value=g_val)
            violated = girth_claim_violations(sol, inst, phi, params)
            out.write(
                json.dumps(
                    {
                        "r": params.r,
                        "pair_ratios": _pair_ratios(sol, inst, phi),
                        "violated_claims": violated,
                    }
                )
                + "\n"
            )
    finally:
        if args.out:
            out.close()
    return 0


def _pair_ratios(sol, inst, phi) -> list:
    L = sol.partition.cluster_count
    out = []
    for f1 in range(L):
        for f2 in range(f1 + 1, L):
            delta = float(sol.delta.matrix[f1, f2])
            dist = con_distance(inst, phi[f1], phi[f2])
            out.append(
                {
                    "pair": [f1, f2],
                    "embedded": dist,
                    "delta": delta,
                    "ratio": dist / delta if delta > 0 else None,
                }
            )
    return out


def _cmd_gap(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    records = run_gap_experiment(cfg)
    out_dir = cfg.resolved_out_dir() or "."
    paths = emit_report(records, out_dir)
    failed = sum(1 for r in records if r.failed)
    print(json.dumps({"records": len(records), "failed": failed, **paths}))
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--girth-coeff", type=float, default=0.01)
    p.add_argument(
        "--terminal-rule", choices=["prefix", "random-subset"], default="prefix"
    )
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("diagnose", help="validate a metric or an instance")
    p.add_argument("--metric", help="JSON dense matrix to validate")
    p.add_argument("--instance", help="edge list written by gen")
    p.set_defaults(func=_cmd_diagnose)

    p = sub.add_parser("solve", help="solve or score")
    p.add_argument("--instance", required=True)
    p.add_argument(
        "--method", choices=["brute-0ext", "brute-canonical", "local"], default="local"
    )
    p.add_argument("--fk", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000_000)
    p.add_argument("--iterations", type=int, default=100_000)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--eval", help="score this solution JSON instead of solving")
    p.add_argument("--out", help="write the solution JSON here")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("project", help="project all vertices to the tight span")
    p.add_argument("--instance", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("embed", help="embed a solution into the continuization")
    p.add_argument("--instance", required=True)
    p.add_argument("--mode", choices=["tree", "girth"], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--t-star", type=int, default=0)
    p.add_argument("--solution", help="solution JSON; default synthesizes one")
    p.add_argument("--perturb", action="store_true", help="synthesize a non-canonical metric")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("gap", help="run the sweep from a config file")
    p.add_argument("config")
    p.set_defaults(func=_cmd_gap)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ZelError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
