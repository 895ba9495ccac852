"""Inexact projected gradient method for constrained vector optimization."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .direction import Descent, OracleBudgetExceeded, Stationary, solve_direction
from .errors import BacktrackExhausted, DimensionMismatch, InfeasibleStart, InvalidConfig, NotInT
from .linesearch import armijo
from .sets import FEAS_TOL

log = logging.getLogger(__name__)

START_REPAIR_TOL = 1e-6

STATUS_STATIONARY = "Stationary"
STATUS_MAX_ITER = "MaxIterations"
STATUS_LINE_SEARCH = "LineSearchFailure"
STATUS_ORACLE = "OracleBudgetExceeded"


@dataclass(frozen=True)
class SolverConfig:
    beta_hat: float = 1.0
    delta: float = 0.5
    tau: float = 2.0
    sigma: float = 0.1
    eps_stat: float = 1e-8
    max_iter: int = 1000
    max_backtracks: int = 60
    fw_max_iters: int = 200
    fw_gap_tol: float = 1e-10
    order_tol: float = 1e-10

    def __post_init__(self):
        checks = [
            (self.beta_hat > 0, "beta_hat must be positive"),
            (0 < self.delta < 1, "delta must lie in (0, 1)"),
            (self.tau > 1, "tau must exceed 1"),
            (0 <= self.sigma < 1, "sigma must lie in [0, 1)"),
            (self.eps_stat >= 0, "eps_stat must be nonnegative"),
            (self.max_iter >= 0, "max_iter must be nonnegative"),
            (self.max_backtracks >= 0, "max_backtracks must be nonnegative"),
            (self.fw_max_iters >= 1, "fw_max_iters must be at least 1"),
            (self.fw_gap_tol >= 0, "fw_gap_tol must be nonnegative"),
            (self.order_tol >= 0, "order_tol must be nonnegative"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InvalidConfig(msg)

    @classmethod
    def from_dict(cls, d):
        names = {f.name: f.type for f in fields(cls)}
        unknown = set(d) - set(names)
        if unknown:
            raise InvalidConfig(f"unknown solver parameters: {sorted(unknown)}")
        ints = {"max_iter", "max_backtracks", "fw_max_iters"}
        return cls(**{k: int(v) if k in ints else float(v) for k, v in d.items()})

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


@dataclass
class IterationRecord:
    k: int
    x: np.ndarray
    fx: np.ndarray
    h: float
    q: float
    achieved_sigma: float
    j: int
    t: float
    step_norm: float
    fejer_delta: float
    fejer_cumsum: float
    omega: np.ndarray = field(repr=False, default=None)
    v: np.ndarray = field(repr=False, default=None)
    x_next: np.ndarray = field(repr=False, default=None)


@dataclass
class SolveResult:
    status: str
    x_final: np.ndarray
    f_final: np.ndarray
    stationarity_residual: float
    iterations: list
    message: str = ""

    @property
    def n_iter(self):
        return len(self.iterations)


def _check_start(f, cone, feasible_set, x0):
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if f.m != cone.dim:
        raise DimensionMismatch(f"objective has m={f.m} but the cone lives in R^{cone.dim}")
    if x0.shape != (f.n,) or feasible_set.n != f.n:
        raise DimensionMismatch("x0, objective and feasible set dimensions disagree")
    if feasible_set.contains(x0, FEAS_TOL):
        return x0
    px = feasible_set.project(x0)
    gap = float(np.linalg.norm(px - x0))
    if gap <= START_REPAIR_TOL:
        log.warning("x0 violates the constraints by %.3g; projecting onto C", gap)
        return px
    raise InfeasibleStart(f"infeasible start: x0 is at distance {gap:.6g} from C")


def solve(f, cone, feasible_set, x0, cfg=None):
    """Run the method from ``x0`` and return a :class:`SolveResult` with the full trace.

    Each iteration asks the direction oracle for a certified direction
    ``v^k`` (or a stationarity verdict), backtracks with the cone-valued
    Armijo rule and steps ``x^{k+1} = x^k + t_k v^k``.
    """
    cfg = cfg or SolverConfig()
    x = _check_start(f, cone, feasible_set, x0)
    fx = f.eval(x)
    records = []
    cumsum = 0.0
    residual = np.nan

    def finish(status, message=""):
        return SolveResult(status, x, fx, residual, records, message)

    for k in range(cfg.max_iter + 1):
        outcome = solve_direction(
            cone, f, feasible_set, x,
            beta_hat=cfg.beta_hat, sigma=cfg.sigma, eps_stat=cfg.eps_stat,
            fw_max_iters=cfg.fw_max_iters, fw_gap_tol=cfg.fw_gap_tol,
        )
        if isinstance(outcome, Stationary):
            residual = abs(outcome.residual)
            return finish(STATUS_STATIONARY)
        if isinstance(outcome, OracleBudgetExceeded):
            cert = outcome.certificate
            residual = abs(cert.primal) if cert is not None else np.nan
            return finish(STATUS_ORACLE, "direction oracle could not certify a direction")
        assert isinstance(outcome, Descent)
        cert = outcome.certificate
        residual = abs(cert.primal)
        if k == cfg.max_iter:
            return finish(STATUS_MAX_ITER)
        try:
            step = armijo(
                cone, f, x, cert.v, cert.jv, delta=cfg.delta, tau=cfg.tau,
                max_backtracks=cfg.max_backtracks, order_tol=cfg.order_tol, fx=fx,
            )
        except BacktrackExhausted as exc:
            return finish(STATUS_LINE_SEARCH, str(exc))
        fejer = 2.0 * step.t * cfg.beta_hat * abs(float(cert.omega @ cert.jv))
        cumsum += fejer
        records.append(IterationRecord(
            k=k, x=x, fx=fx, h=cert.primal, q=cert.dual, achieved_sigma=cert.achieved_sigma,
            j=step.j, t=step.t, step_norm=float(np.linalg.norm(step.x_next - x)),
            fejer_delta=fejer, fejer_cumsum=cumsum,
            omega=cert.omega, v=cert.v, x_next=step.x_next,
        ))
        x, fx = step.x_next, step.f_next
    raise AssertionError("unreachable")


def stationarity_residual(f, cone, feasible_set, x, cfg=None, fw_max_iters=20000):
    """``|h_best|`` from an exact-mode direction solve: a surrogate for ``|theta(x)|``."""
    cfg = cfg or SolverConfig()
    out = solve_direction(
        cone, f, feasible_set, x, beta_hat=cfg.beta_hat, sigma=0.0,
        eps_stat=0.0, fw_max_iters=fw_max_iters, fw_gap_tol=cfg.fw_gap_tol,
    )
    if isinstance(out, Stationary):
        return abs(out.residual)
    cert = out.certificate
    return abs(cert.primal)


@dataclass
class FejerReport:
    max_violation: float
    total_delta: float
    n_pairs: int
    passed: bool


def fejer_check(trace, x_hat, f, cone, x_final=None, tol=1e-9, order_tol=1e-12):
    """Check ``|x^{k+1} - x_hat|^2 <= |x^k - x_hat|^2 + delta_k`` along a trace.

    ``x_hat`` must be K-dominated by every recorded iterate, otherwise
    :class:`NotInT` is raised with the first offending index.  Pairs are
    formed from consecutive records; ``x_final`` (if given) closes the last one.
    """
    x_hat = np.atleast_1d(np.asarray(x_hat, dtype=float))
    f_hat = f.eval(x_hat)
    for rec in trace:
        if not cone.k_leq(f_hat, rec.fx, order_tol):
            raise NotInT(rec.k)
    points = [rec.x for rec in trace]
    if x_final is not None:
        points.append(np.atleast_1d(np.asarray(x_final, dtype=float)))
    worst = -np.inf
    pairs = 0
    for rec, (a, b) in zip(trace, zip(points, points[1:])):
        lhs = float(np.sum((b - x_hat) ** 2) - np.sum((a - x_hat) ** 2))
        worst = max(worst, lhs - rec.fejer_delta)
        pairs += 1
    total = float(sum(rec.fejer_delta for rec in trace))
    worst = max(worst, 0.0) if pairs else 0.0
    return FejerReport(max_violation=worst, total_delta=total, n_pairs=pairs, passed=worst <= tol)
