"""Brute-force validators, independent of the solver's own machinery."""

from __future__ import annotations

import numpy as np

from .errors import ScaleTooLarge, UnsupportedSampling
from .sets import Ball, Box, Simplex, WholeSpace


def sample_points(feasible_set, x, samples, rng):
    """Random points of C (rows).

    Box: uniform on finite sides, ``x_i +/- 10 |N(0,1)|`` on infinite ones.
    Ball: uniform via Gaussian direction and ``r U^{1/n}`` radius.
    Simplex: ``scale * Dirichlet(1)``.  Whole space: ``x + 10 N(0, I)``.
    """
    n = feasible_set.n
    if isinstance(feasible_set, Box):
        lo, hi = feasible_set.lower, feasible_set.upper
        pts = np.empty((samples, n))
        for i in range(n):
            if np.isfinite(lo[i]) and np.isfinite(hi[i]):
                pts[:, i] = rng.uniform(lo[i], hi[i], samples)
            else:
                raw = x[i] + 10.0 * rng.standard_normal(samples)
                pts[:, i] = np.clip(raw, lo[i], hi[i])
        return pts
    if isinstance(feasible_set, Ball):
        d = rng.standard_normal((samples, n))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        r = feasible_set.radius * rng.uniform(size=samples) ** (1.0 / n)
        return feasible_set.center + d * r[:, None]
    if isinstance(feasible_set, Simplex):
        return feasible_set.scale * rng.dirichlet(np.ones(n), size=samples)
    if isinstance(feasible_set, WholeSpace):
        return x + 10.0 * rng.standard_normal((samples, n))
    raise UnsupportedSampling(f"cannot sample from {type(feasible_set).__name__}")


def sampled_stationarity(
    cone, f, feasible_set, x, samples=10_000, rng_seed=0, strict_tol=1e-12, eps_stat=None, beta_hat=1.0
):
    """One-sided check that no sampled ``v = c - x`` has ``J_F(x) v in -int(K)``.

    A sample is a counterexample when ``phi(J v) < -strict_tol``.  With
    ``eps_stat`` given, the check targets eps-stationarity instead
    (``theta(x) >= -eps_stat``), which only guarantees
    ``beta phi(J v) >= -max(sqrt(2 eps) |v|, 2 eps)`` along feasible ``v``;
    that slack is added to the threshold per sample.

    Returns ``False`` if a counterexample is found; ``True`` means only
    that none was found.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rng = np.random.default_rng(rng_seed)
    pts = sample_points(feasible_set, x, samples, rng)
    jac = f.jacobian(x)
    vs = pts - x
    phis = np.max(vs @ (cone.dual_generators @ jac).T, axis=1)
    thresh = np.full(samples, strict_tol)
    if eps_stat is not None:
        slack = np.maximum(np.sqrt(2.0 * eps_stat) * np.linalg.norm(vs, axis=1), 2.0 * eps_stat)
        thresh += slack / beta_hat
    return not bool(np.any(phis < -thresh))


def _is_quasiconvex_1d(vals, tol):
    """No interior value strictly above both a value to its left and one to its right."""
    left = np.minimum.accumulate(vals)
    right = np.minimum.accumulate(vals[::-1])[::-1]
    inner = vals[1:-1]
    bound = np.maximum(left[:-2], right[2:])
    return bool(np.all(inner <= bound + tol))


def quasiconvexity_grid_check(f, d, lower, upper, points=1000, n_segments=200, seed=0, rel_tol=1e-12):
    """Falsification test for quasiconvexity of ``x -> <d, F(x)>`` on a box.

    For n = 1 the sequence of values on a uniform grid must have interval
    sublevel sets.  For n = 2 the same test is applied to every grid row,
    column and diagonal and to ``n_segments`` random segments.  A ``True``
    result is evidence, not a proof.
    """
    d = np.asarray(d, dtype=float)
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    n = lower.size
    if n > 2 or f.n != n:
        raise ScaleTooLarge("quasiconvexity grid check supports n <= 2")
    if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
        raise ValueError("grid bounds must be finite")

    def g(x):
        return float(d @ f.eval(x))

    if n == 1:
        ts = np.linspace(lower[0], upper[0], points)
        vals = np.array([g([t]) for t in ts])
        return _is_quasiconvex_1d(vals, rel_tol * max(1.0, np.max(np.abs(vals))))

    side = max(3, int(round(np.sqrt(points))))
    xs = np.linspace(lower[0], upper[0], side)
    ys = np.linspace(lower[1], upper[1], side)
    grid = np.array([[g([a, b]) for b in ys] for a in xs])
    tol = rel_tol * max(1.0, np.max(np.abs(grid)))
    lines = list(grid) + list(grid.T)
    for off in range(-(side - 3), side - 2):
        lines.append(np.diagonal(grid, off))
        lines.append(np.diagonal(grid[::-1], off))
    if not all(_is_quasiconvex_1d(line, tol) for line in lines if line.size >= 3):
        return False
    rng = np.random.default_rng(seed)
    for _ in range(n_segments):
        a = rng.uniform(lower, upper)
        b = rng.uniform(lower, upper)
        vals = np.array([g(a + s * (b - a)) for s in np.linspace(0.0, 1.0, 64)])
        if not _is_quasiconvex_1d(vals, tol):
            return False
    return True


def fd_jacobian(f, x, h=1e-6):
    """Central-difference Jacobian, one column per coordinate."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    cols = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = h
        cols.append((f.eval(x + e) - f.eval(x - e)) / (2.0 * h))
    return np.column_stack(cols) if cols else np.zeros((f.m, 0))
