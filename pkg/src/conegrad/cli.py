"""Command-line front end: ``conegrad {solve,validate,list,check-cone,batch}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .cone import _rank, min_norm_in_hull, new_cone
from .errors import ConeGradError
from .functions import builtin_registry, get_problem, registry_names
from .oracles import fd_jacobian, quasiconvexity_grid_check, sampled_stationarity
from .problem_io import load_problem, write_trace_csv
from .solver import (
    STATUS_LINE_SEARCH,
    STATUS_MAX_ITER,
    STATUS_ORACLE,
    STATUS_STATIONARY,
    SolverConfig,
    solve,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MAX_ITER = 2
EXIT_FAILURE = 3

STATUS_EXIT = {
    STATUS_STATIONARY: EXIT_OK,
    STATUS_MAX_ITER: EXIT_MAX_ITER,
    STATUS_LINE_SEARCH: EXIT_FAILURE,
    STATUS_ORACLE: EXIT_FAILURE,
}

THREADS_ENV = "CONEGRAD_THREADS"


def _resolve_problem(ref):
    """A path to a problem file, or the name of a built-in problem."""
    path = Path(ref)
    if path.exists():
        return load_problem(path)
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in registry_names() and not path.parent.parts:
        return get_problem(stem)
    return load_problem(path)


def _parse_vector(text):
    return [float(c) for c in text.split(",")]


def _config(problem, args=None):
    cfg = SolverConfig.from_dict(problem.params)
    if args is not None:
        cfg = cfg.with_overrides(sigma=args.sigma, beta_hat=args.beta)
    return cfg


def _fmt_vec(v):
    return "[" + ", ".join(format(float(c), ".10g") for c in v) + "]"


def _summary(problem, result):
    return {
        "name": problem.name,
        "status": result.status,
        "x_final": [float(c) for c in result.x_final],
        "f_final": [float(c) for c in result.f_final],
        "stationarity_residual": float(result.stationarity_residual),
        "iterations": result.n_iter,
    }


def cmd_solve(args):
    problem = _resolve_problem(args.file)
    x0 = _parse_vector(args.x0) if args.x0 else problem.x0
    cfg = _config(problem, args)
    result = solve(problem.f, problem.cone, problem.feasible_set, x0, cfg)
    if args.trace:
        write_trace_csv(result, args.trace, problem.f.n, problem.f.m)
    if args.json_summary:
        print(json.dumps(_summary(problem, result)))
    else:
        print(f"problem: {problem.name}")
        print(f"status: {result.status}")
        print(f"x_final: {_fmt_vec(result.x_final)}")
        print(f"F(x_final): {_fmt_vec(result.f_final)}")
        print(f"residual: {result.stationarity_residual:.6g}")
        print(f"iterations: {result.n_iter}")
    if result.message:
        print(result.message, file=sys.stderr)
    return STATUS_EXIT[result.status]


def _validation_box(problem, x0):
    lo, hi = problem.feasible_set.bounding_box()
    lo = np.where(np.isfinite(lo), lo, x0 - 10.0)
    hi = np.where(np.isfinite(hi), hi, x0 + 10.0)
    return lo, hi


def cmd_validate(args):
    problem = _resolve_problem(args.file)
    cfg = _config(problem)
    f, cone, fset = problem.f, problem.cone, problem.feasible_set
    checks = []

    dist, _ = min_norm_in_hull(cone.dual_generators)
    checks.append(("cone", True, f"rank={_rank(cone.dual_generators)} hull_distance={dist:.6g}"))

    result = solve(f, cone, fset, problem.x0, cfg)
    for label, x in (("x0", problem.x0), ("x_final", result.x_final)):
        sym = f.jacobian(x)
        fd = fd_jacobian(f, x)
        err = float(np.max(np.abs(sym - fd) / np.maximum(1.0, np.abs(sym)))) if sym.size else 0.0
        checks.append((f"fd_jacobian@{label}", err <= 1e-6, f"max scaled error {err:.3g}"))

    if f.n <= 2:
        lo, hi = _validation_box(problem, problem.x0)
        for i, (raw, w) in enumerate(zip(problem.raw_generators, cone.dual_generators)):
            ok = quasiconvexity_grid_check(f, w, lo, hi)
            checks.append((f"quasiconvex[generator {i}]", ok, f"d={_fmt_vec(raw)}"))
    else:
        checks.append(("quasiconvex", True, "skipped (n > 2)"))

    if result.status == STATUS_STATIONARY:
        ok = sampled_stationarity(
            cone, f, fset, result.x_final, samples=args.samples, rng_seed=args.seed,
            eps_stat=cfg.eps_stat, beta_hat=cfg.beta_hat,
        )
        checks.append(("sampled_stationarity", ok, f"x_final={_fmt_vec(result.x_final)}"))
    else:
        checks.append(("sampled_stationarity", False, f"solve ended with status {result.status}"))

    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_FAILURE


def cmd_list(args):
    for name, problem in builtin_registry().items():
        print(f"{name}: {problem.description}")
    return EXIT_OK


def cmd_check_cone(args):
    path = Path(args.file)
    if path.exists():
        data = json.loads(path.read_text(encoding="utf-8"))
        gens = data["cone_dual_generators"]
        dim = len(data.get("objectives", gens[0]))
    else:
        problem = _resolve_problem(args.file)
        gens, dim = problem.raw_generators, problem.cone.dim
    cone = new_cone(dim, gens)
    dist, _ = min_norm_in_hull(cone.dual_generators)
    print(f"dim: {cone.dim}")
    print(f"generators: {cone.n_generators}")
    for g in cone.dual_generators:
        print(f"  {_fmt_vec(g)}")
    print(f"rank: {_rank(cone.dual_generators)}")
    print(f"hull distance from origin: {dist:.6g}")
    print("cone OK")
    return EXIT_OK


def _solve_one(path):
    problem = load_problem(path)
    result = solve(problem.f, problem.cone, problem.feasible_set, problem.x0, _config(problem))
    return problem, result


def cmd_batch(args):
    files = sorted(Path(args.dir).glob("*.json"))
    if not files:
        print(f"no problem files in {args.dir}", file=sys.stderr)
        return EXIT_INPUT
    workers = args.parallel or int(os.environ.get(THREADS_ENV, "0") or 0) or min(8, os.cpu_count() or 1)
    rows = []
    code = EXIT_OK
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [(p, pool.submit(_solve_one, p)) for p in files]
        for path, fut in futures:
            try:
                problem, result = fut.result()
            except ConeGradError as exc:
                rows.append((path.stem, "InputError", "", "", str(exc)))
                code = max(code, EXIT_INPUT)
                continue
            rows.append((problem.name, result.status, str(result.n_iter),
                         format(result.stationarity_residual, ".3g"), _fmt_vec(result.x_final)))
            code = max(code, STATUS_EXIT[result.status])
    header = ("name", "status", "iterations", "residual", "x_final")
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    for r in [header] + rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip())
    return code


def build_parser():
    parser = argparse.ArgumentParser(prog="conegrad", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the solver on a problem file or built-in name")
    p.add_argument("file")
    p.add_argument("--trace", help="write the iteration trace as CSV")
    p.add_argument("--sigma", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--x0", help="comma-separated starting point")
    p.add_argument("--json-summary", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="independent checks of a problem and its solution")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10_000)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("list", help="list built-in problems")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("check-cone", help="validate the ordering cone of a problem")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_cone)

    p = sub.add_parser("batch", help="solve every *.json problem in a directory")
    p.add_argument("dir")
    p.add_argument("--parallel", type=int)
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConeGradError, OSError, KeyError, IndexError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
