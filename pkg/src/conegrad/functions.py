"""Vector objectives F: R^n -> R^m with exact Jacobians, plus built-in problems."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .cone import ConeOrder, new_cone
from .errors import ArityError, DimensionMismatch, NonFiniteResult, NotFound
from .sets import Box, FeasibleSet, WholeSpace


class VectorFunction:
    """Objective with a Jacobian.

    Either built from expression trees (derivatives are taken symbolically and
    cached) or from a pair of native callables ``fun(x) -> (m,)`` and
    ``jac(x) -> (m, n)``.
    """

    def __init__(self, n, m, components=None, fun=None, jac=None, variables=None, texts=None):
        self.n = int(n)
        self.m = int(m)
        self.components = list(components) if components is not None else None
        self.variables = list(variables) if variables is not None else [f"x{j}" for j in range(self.n)]
        self.texts = list(texts) if texts is not None else None
        self._fun = fun
        self._jac = jac
        if self.components is not None:
            if len(self.components) != self.m:
                raise DimensionMismatch(f"expected {self.m} components, got {len(self.components)}")
            for c in self.components:
                if ex.max_var_index(c) >= self.n:
                    raise ArityError("expression references a variable beyond the declared arity")
            self.gradient_asts = [
                [ex.differentiate(c, j) for j in range(self.n)] for c in self.components
            ]
        else:
            if fun is None or jac is None:
                raise ValueError("native functions need both fun and jac")
            self.gradient_asts = None

    @classmethod
    def from_expressions(cls, texts, variables):
        comps = [ex.parse_expr(t, variables) for t in texts]
        return cls(len(variables), len(comps), components=comps, variables=variables, texts=texts)

    @classmethod
    def from_callables(cls, n, m, fun, jac):
        return cls(n, m, fun=fun, jac=jac)

    def _check_x(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x.reshape(1)
        if x.shape != (self.n,):
            raise DimensionMismatch(f"x has shape {x.shape}, expected ({self.n},)")
        return x

    def eval(self, x):
        x = self._check_x(x)
        if self.components is not None:
            out = np.array([c.evaluate(x) for c in self.components])
        else:
            out = np.asarray(self._fun(x), dtype=float).reshape(self.m)
        if not np.all(np.isfinite(out)):
            raise NonFiniteResult("objective value is not finite")
        return out

    __call__ = eval

    def jacobian(self, x):
        x = self._check_x(x)
        if self.gradient_asts is not None:
            out = np.array([[g.evaluate(x) for g in row] for row in self.gradient_asts])
        else:
            out = np.asarray(self._jac(x), dtype=float).reshape(self.m, self.n)
        if not np.all(np.isfinite(out)):
            raise NonFiniteResult("Jacobian is not finite")
        return out


@dataclass
class Problem:
    """A complete instance of ``min_K F(x) s.t. x in C``."""

    name: str
    f: VectorFunction
    cone: ConeOrder
    feasible_set: FeasibleSet
    x0: np.ndarray
    description: str = ""
    raw_generators: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x0 = np.atleast_1d(np.asarray(self.x0, dtype=float))


def _example41():
    gens = [[1.0, 0.0], [1.0, 1.0]]
    return Problem(
        name="example41",
        f=VectorFunction.from_expressions(["4*t^2", "t^4 - 4*t^2 + 2"], ["t"]),
        cone=new_cone(2, gens),
        feasible_set=Box([-3.0], [3.0]),
        x0=[3.0],
        raw_generators=gens,
        description=(
            "F(t) = (4t^2, t^4 - 4t^2 + 2) on [-3, 3], K = {y : y1 >= 0, y1 + y2 >= 0}; "
            "K-quasiconvex, not K-convex; unique stationary point t = 0"
        ),
    )


def _pareto_quad2():
    gens = [[1.0, 0.0], [0.0, 1.0]]
    return Problem(
        name="pareto_quad2",
        f=VectorFunction.from_expressions(["x^2", "(x - 2)^2"], ["x"]),
        cone=new_cone(2, gens),
        feasible_set=WholeSpace(1),
        x0=[3.0],
        raw_generators=gens,
        description="F(x) = (x^2, (x-2)^2) under the Pareto order on R; stationary set [0, 2]",
    )


def _scalar_quad():
    gens = [[1.0]]
    return Problem(
        name="scalar_quad",
        f=VectorFunction.from_expressions(["x^2"], ["x"]),
        cone=new_cone(1, gens),
        feasible_set=WholeSpace(1),
        x0=[1.0],
        raw_generators=gens,
        description="F(x) = x^2 (m = 1); the method reduces to projected gradient; stationary set {0}",
    )


_REGISTRY = {
    "example41": _example41,
    "pareto_quad2": _pareto_quad2,
    "scalar_quad": _scalar_quad,
}


def builtin_registry():
    """All built-in problems, freshly constructed, keyed by name."""
    return {name: make() for name, make in _REGISTRY.items()}


def get_problem(name):
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise NotFound(f"no built-in problem named {name!r}") from None


def registry_names():
    return list(_REGISTRY)
