"""Certified approximate projected-gradient directions.

At a feasible x the direction subproblem is

    min_{v in C - x}  h_x(v) = beta * phi(J v) + |v|^2 / 2 .

It is solved through its concave dual over the unit simplex of generator
weights: for weights ``lam`` with ``omega = sum_i lam_i w_i`` the inner
minimizer is the projection ``v(lam) = P_{C-x}(-beta J^T omega)`` and the
dual value is ``q(lam) = beta <J^T omega, v> + |v|^2 / 2 <= theta(x)``.  Each
dual point therefore yields a direction of the scalarization-compatible form
together with a lower bound on the optimal value ``theta(x)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleDirection, ScaleTooLarge
from .sets import FEAS_TOL, Ball, Box, Simplex, WholeSpace


@dataclass(frozen=True)
class DirectionCertificate:
    """A direction ``v`` together with the primal-dual data that certifies it.

    ``dual`` is the best dual bound found by the oracle (a lower bound on
    theta(x)); ``dual_at_weights`` is the dual value at the certifying
    weights themselves.  ``primal <= (1 - achieved_sigma) * dual``.
    """

    weights: np.ndarray
    omega: np.ndarray
    v: np.ndarray
    jv: np.ndarray
    primal: float
    dual: float
    dual_at_weights: float
    achieved_sigma: float


@dataclass(frozen=True)
class Descent:
    certificate: DirectionCertificate
    fw_iterations: int


@dataclass(frozen=True)
class Stationary:
    residual: float
    dual: float
    fw_iterations: int


@dataclass(frozen=True)
class OracleBudgetExceeded:
    certificate: DirectionCertificate | None
    fw_iterations: int


def _achieved_sigma(primal, dual):
    if dual < 0:
        return max(0.0, 1.0 - primal / dual)
    return 0.0


def h_value(cone, f, feasible_set, x, v, beta_hat):
    """``beta_hat * phi(J_F(x) v) + |v|^2 / 2`` for a feasible direction ``v``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if not feasible_set.contains(x, FEAS_TOL) or not feasible_set.contains(x + v, FEAS_TOL):
        raise InfeasibleDirection("v is not in C - x")
    jv = f.jacobian(x) @ v
    return beta_hat * cone.phi(jv) + 0.5 * float(v @ v)


def _dual_at(cone, jac, feasible_set, x, lam, beta_hat):
    omega = lam @ cone.dual_generators
    g = beta_hat * (jac.T @ omega)
    v = feasible_set.project_shifted(x, -g)
    q = float(g @ v) + 0.5 * float(v @ v)
    return q, v, omega


def dual_value(cone, f, feasible_set, x, lam, beta_hat):
    """Dual function value and inner minimizer at simplex weights ``lam``.

    Returns ``(q, v)`` where ``v = P_{C-x}(-beta_hat J^T omega)``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lam = np.asarray(lam, dtype=float)
    q, v, _ = _dual_at(cone, f.jacobian(x), feasible_set, x, lam, beta_hat)
    return q, v


def solve_direction(
    cone,
    f,
    feasible_set,
    x,
    beta_hat=1.0,
    sigma=0.1,
    eps_stat=1e-8,
    fw_max_iters=200,
    fw_gap_tol=1e-10,
    trace=None,
):
    """Maximize the dual by Frank-Wolfe until a direction is certified.

    Each iteration evaluates the dual at the current weights, updates the
    best primal value (over all directions ``v(lam)`` seen) and the best
    dual bound, then runs the termination tests in order:

    1. ``max(|h_best|, |q_best|) <= eps_stat`` -> :class:`Stationary`
    2. ``sigma > 0`` and ``h_best <= (1 - sigma) q_best`` -> :class:`Descent`
    3. ``sigma == 0`` and ``h_best - q_best <= fw_gap_tol * max(1, |q_best|)``
       -> :class:`Descent`

    and otherwise takes the step ``lam += 2/(k+2) (e_i - lam)`` towards the
    vertex maximizing the supergradient ``beta <w_i, J v(lam)>`` (smallest
    index on ties).  After ``fw_max_iters`` evaluations the result is
    :class:`OracleBudgetExceeded` carrying the best certificate.

    If ``trace`` is a list, ``(q, q_best, h, h_best)`` is appended per iteration.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    jac = f.jacobian(x)
    gens = cone.dual_generators
    p = gens.shape[0]
    lam = np.full(p, 1.0 / p)

    h_best = np.inf
    q_best = -np.inf
    best = None  # (lam, omega, v, jv, h, q)
    for it in range(fw_max_iters):
        q, v, omega = _dual_at(cone, jac, feasible_set, x, lam, beta_hat)
        jv = jac @ v
        sg = beta_hat * (gens @ jv)
        h = float(np.max(sg)) + 0.5 * float(v @ v)
        if h < h_best:
            h_best = h
            best = (lam.copy(), omega, v, jv, h, q)
        q_best = max(q_best, q)
        if trace is not None:
            trace.append((q, q_best, h, h_best))

        if max(abs(h_best), abs(q_best)) <= eps_stat:
            return Stationary(residual=h_best, dual=q_best, fw_iterations=it + 1)
        if sigma > 0:
            if h_best <= (1.0 - sigma) * q_best:
                return Descent(_certificate(best, q_best), it + 1)
        elif h_best - q_best <= fw_gap_tol * max(1.0, abs(q_best)):
            if h_best < 0:
                return Descent(_certificate(best, q_best), it + 1)
            return Stationary(residual=h_best, dual=q_best, fw_iterations=it + 1)

        i = int(np.argmax(sg))
        gamma = 2.0 / (it + 2.0)
        lam = (1.0 - gamma) * lam
        lam[i] += gamma
    cert = _certificate(best, q_best) if best is not None else None
    return OracleBudgetExceeded(certificate=cert, fw_iterations=fw_max_iters)


def _certificate(best, q_best):
    lam, omega, v, jv, h, q = best
    return DirectionCertificate(
        weights=lam,
        omega=omega,
        v=v,
        jv=jv,
        primal=h,
        dual=q_best,
        dual_at_weights=q,
        achieved_sigma=_achieved_sigma(h, q_best),
    )


# ------------------------------------------------------------ grid reference

def _simplex_grid(p, steps):
    for combo in itertools.product(range(steps + 1), repeat=p - 1):
        if sum(combo) <= steps:
            yield np.array(list(combo) + [steps - sum(combo)], dtype=float) / steps


def _param_space(feasible_set, x, radius):
    """Parameter box plus a vectorized map from parameters (rows) to points of C."""
    n = x.size
    if isinstance(feasible_set, Simplex):
        s = feasible_set.scale
        if n == 1:
            return np.zeros(0), np.zeros(0), lambda u: np.full((u.shape[0], 1), s)
        lo = np.array([max(0.0, x[0] - radius)])
        hi = np.array([min(s, x[0] + radius)])
        return lo, hi, lambda u: np.column_stack([u[:, 0], s - u[:, 0]])
    lo, hi = feasible_set.bounding_box()
    if isinstance(feasible_set, WholeSpace):
        lo, hi = x - radius, x + radius
    else:
        lo = np.maximum(lo, x - radius)
        hi = np.minimum(hi, x + radius)
    return lo, hi, lambda u: u


def _feasible_rows(feasible_set, pts, tol=1e-12):
    if isinstance(feasible_set, Ball):
        return np.linalg.norm(pts - feasible_set.center, axis=1) <= feasible_set.radius + tol
    if isinstance(feasible_set, Box):
        return np.all((pts >= feasible_set.lower - tol) & (pts <= feasible_set.upper + tol), axis=1)
    if isinstance(feasible_set, Simplex):
        return np.all(pts >= -tol, axis=1) & (np.abs(pts.sum(axis=1) - feasible_set.scale) <= tol * 10)
    return np.ones(pts.shape[0], dtype=bool)


def theta_bruteforce(cone, f, feasible_set, x, beta_hat=1.0, lambda_grid_steps=200, v_grid=201, zoom_rounds=40):
    """Grid estimate of theta(x) = min_{v in C-x} h_x(v), bracketed by a dual grid.

    The primal grid covers ``C - x`` intersected with the ball radius
    ``2 beta |J|`` outside of which ``h_x > 0``; the best grid point is then
    refined by repeatedly regridding a shrinking window around it.  The
    maximum of the dual over a simplex grid must not exceed the primal
    minimum (weak duality); this is asserted.

    Only for desk-scale problems: ``n <= 2`` and at most 3 generators.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = x.size
    p = cone.n_generators
    if n > 2 or p > 3:
        raise ScaleTooLarge(f"theta_bruteforce supports n <= 2 and p <= 3 (got n={n}, p={p})")
    jac = f.jacobian(x)
    gens = cone.dual_generators

    q_max = -np.inf
    for lam in _simplex_grid(p, lambda_grid_steps):
        q, _, _ = _dual_at(cone, jac, feasible_set, x, lam, beta_hat)
        q_max = max(q_max, q)

    radius = 2.0 * beta_hat * float(np.linalg.norm(jac, 2)) * 1.01 + 1e-12
    lo, hi, to_points = _param_space(feasible_set, x, radius)
    best = 0.0  # v = 0 is always feasible
    if lo.size and np.all(hi >= lo):
        a, b = lo, hi
        for _ in range(zoom_rounds + 1):
            axes = [np.linspace(a[d], b[d], v_grid) for d in range(lo.size)]
            params = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
            pts = to_points(params)
            keep = _feasible_rows(feasible_set, pts)
            if not np.any(keep):
                break
            params, pts = params[keep], pts[keep]
            vs = pts - x
            vals = beta_hat * np.max(vs @ (gens @ jac).T, axis=1) + 0.5 * np.sum(vs * vs, axis=1)
            k = int(np.argmin(vals))
            best = min(best, float(vals[k]))
            width = (b - a) / 4.0
            a = np.maximum(lo, params[k] - width)
            b = np.minimum(hi, params[k] + width)
    assert q_max <= best + 1e-9, f"weak duality violated: {q_max} > {best}"
    return best
