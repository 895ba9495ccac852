"""JSON problem files and CSV traces."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .cone import new_cone
from .errors import ConeGradError, ProblemFileError
from .functions import Problem, VectorFunction
from .sets import set_from_dict
from .solver import SolverConfig

REQUIRED = ("name", "variables", "objectives", "cone_dual_generators", "feasible_set", "x0")


def problem_from_dict(d):
    missing = [k for k in REQUIRED if k not in d]
    if missing:
        raise ProblemFileError(f"problem file is missing fields: {missing}")
    variables = list(d["variables"])
    objectives = list(d["objectives"])
    gens = [[float(c) for c in g] for g in d["cone_dual_generators"]]
    if any(len(g) != len(objectives) for g in gens):
        raise ProblemFileError("generator dimension must equal the number of objectives")
    x0 = [float(c) for c in d["x0"]]
    if len(x0) != len(variables):
        raise ProblemFileError("x0 length must equal the number of variables")
    params = dict(d.get("params") or {})
    SolverConfig.from_dict(params)
    fset = set_from_dict(d["feasible_set"])
    if fset.n != len(variables):
        raise ProblemFileError("feasible set dimension must equal the number of variables")
    return Problem(
        name=str(d["name"]),
        f=VectorFunction.from_expressions(objectives, variables),
        cone=new_cone(len(objectives), gens),
        feasible_set=fset,
        x0=x0,
        raw_generators=gens,
        params=params,
        description=str(d.get("description", "")),
    )


def problem_to_dict(problem):
    if problem.f.texts is None:
        raise ProblemFileError("only expression-backed objectives can be serialized")
    out = {
        "name": problem.name,
        "variables": list(problem.f.variables),
        "objectives": list(problem.f.texts),
        "cone_dual_generators": [[float(c) for c in g] for g in problem.raw_generators],
        "feasible_set": problem.feasible_set.to_dict(),
        "x0": [float(c) for c in problem.x0],
        "params": dict(problem.params),
    }
    if problem.description:
        out["description"] = problem.description
    return out


def load_problem(path):
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemFileError(f"cannot read problem file {path}: {exc}") from exc
    try:
        return problem_from_dict(data)
    except ConeGradError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ProblemFileError(f"malformed problem file {path}: {exc}") from exc


def save_problem(problem, path):
    Path(path).write_text(json.dumps(problem_to_dict(problem), indent=2) + "\n", encoding="utf-8")


def trace_header(n, m):
    return (
        ["k"] + [f"x_{i}" for i in range(n)] + [f"F_{i}" for i in range(m)]
        + ["h", "q", "achieved_sigma", "j", "t", "step_norm", "fejer_delta", "fejer_cumsum"]
    )


def _fmt(v):
    return format(float(v), ".17g")


def write_trace_csv(result, path, n, m):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(trace_header(n, m))
        for r in result.iterations:
            w.writerow(
                [r.k] + [_fmt(c) for c in r.x] + [_fmt(c) for c in r.fx]
                + [_fmt(r.h), _fmt(r.q), _fmt(r.achieved_sigma), r.j, _fmt(r.t),
                   _fmt(r.step_norm), _fmt(r.fejer_delta), _fmt(r.fejer_cumsum)]
            )


def read_trace_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array([[float(c) for c in row] for row in rows[1:]])
