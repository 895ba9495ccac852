"""Ordering cones given by finitely many generators of the dual cone.

The cone is ``K = {y : <w_i, y> >= 0 for all i}``.  Every order test reduces
to the support function ``phi(y) = max_i <w_i, y>``:

* ``y in -K``       iff ``phi(y) <= 0``
* ``y in -int(K)``  iff ``phi(y) < 0``
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    DualNotPointed,
    EmptyGeneratorList,
    EmptyList,
    NotFullDimensionalDual,
    ZeroGenerator,
)

RANK_PIVOT_TOL = 1e-10
POINTED_TOL = 1e-8


def _as_vector(y, dim, name="y"):
    y = np.asarray(y, dtype=float)
    if y.ndim == 0:
        y = y.reshape(1)
    if y.shape != (dim,):
        raise DimensionMismatch(f"{name} has shape {y.shape}, expected ({dim},)")
    return y


def _rank(mat, pivot_tol=RANK_PIVOT_TOL):
    """Row rank by Gaussian elimination with partial pivoting."""
    a = np.array(mat, dtype=float, copy=True)
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = rank + int(np.argmax(np.abs(a[rank:, c])))
        if abs(a[piv, c]) <= pivot_tol:
            continue
        a[[rank, piv]] = a[[piv, rank]]
        a[rank + 1:] -= np.outer(a[rank + 1:, c] / a[rank, c], a[rank])
        rank += 1
    return rank


def min_norm_in_hull(points, max_iters=1000, gap_tol=1e-14):
    """Minimum-norm point of the convex hull of ``points``.

    Uses Wolfe's active-set algorithm, which terminates finitely in exact
    arithmetic.  The stopping test is the Frank-Wolfe gap
    ``|x|^2 - min_i <x, p_i> <= gap_tol * max(1, max_i |p_i|^2)``.

    Returns
    -------
    distance : float
        Euclidean norm of the minimum-norm point.
    weights : ndarray
        Convex combination weights (on the unit simplex) producing it.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0 or len(points) == 0:
        raise EmptyList("min_norm_in_hull needs at least one point")
    p = pts.shape[0]
    scale = max(1.0, float(np.max(np.sum(pts * pts, axis=1))))
    tol = gap_tol * scale

    norms = np.sum(pts * pts, axis=1)
    start = int(np.argmin(norms))
    active = [start]
    lam = np.array([1.0])
    x = pts[start].copy()

    for _ in range(max_iters):
        j = int(np.argmin(pts @ x))
        if x @ x - pts[j] @ x <= tol or j in active:
            break
        active.append(j)
        lam = np.append(lam, 0.0)
        while True:
            # affine minimizer over the active points
            sub = pts[active]
            k = len(active)
            kkt = np.zeros((k + 1, k + 1))
            kkt[:k, :k] = sub @ sub.T
            kkt[:k, k] = 1.0
            kkt[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            mu = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
            if np.all(mu > 1e-14):
                lam = mu
                break
            neg = (mu <= 1e-14) & (lam - mu > 0)
            ratios = lam[neg] / (lam[neg] - mu[neg])
            step = float(np.min(ratios)) if ratios.size else 0.0
            lam = lam + step * (mu - lam)
            keep = lam > 1e-14
            keep[np.argmax(lam)] = True
            active = [a for a, kp in zip(active, keep) if kp]
            lam = lam[keep]
            lam = lam / lam.sum()
        x = lam @ pts[active]

    weights = np.zeros(p)
    weights[active] = lam
    return float(np.linalg.norm(x)), weights


@dataclass(frozen=True)
class ConeOrder:
    """Ordering cone K described by unit-normalized dual generators.

    Construct with :func:`new_cone`; the dataclass itself does no validation.
    """

    dim: int
    dual_generators: np.ndarray

    @property
    def n_generators(self):
        return self.dual_generators.shape[0]

    def phi(self, y):
        return phi(self, y)

    def phi_argmax(self, y):
        return phi_argmax(self, y)

    def k_leq(self, u, v, tol=0.0):
        return k_leq(self, u, v, tol)

    def in_minus_int_k(self, y, tol=1e-12):
        return in_minus_int_k(self, y, tol)


def new_cone(dim, raw_generators):
    """Build a validated :class:`ConeOrder` from raw dual generators."""
    if raw_generators is None or len(raw_generators) == 0:
        raise EmptyGeneratorList("at least one dual generator is required")
    gens = np.array([_as_vector(g, dim, "generator") for g in raw_generators])
    norms = np.linalg.norm(gens, axis=1)
    if np.any(norms == 0.0):
        raise ZeroGenerator(f"generator {int(np.argmin(norms))} is the zero vector")
    gens = gens / norms[:, None]
    dist, _ = min_norm_in_hull(gens)
    if dist <= POINTED_TOL:
        raise DualNotPointed("0 lies in the convex hull of the dual generators; int(K) is empty")
    if _rank(gens) < dim:
        raise NotFullDimensionalDual("dual generators do not span R^m; K is not pointed")
    gens.setflags(write=False)
    return ConeOrder(dim=int(dim), dual_generators=gens)


def pareto_cone(dim):
    """Componentwise order on R^dim."""
    return new_cone(dim, np.eye(dim))


def phi(cone, y):
    y = _as_vector(y, cone.dim)
    return float(np.max(cone.dual_generators @ y))


def phi_argmax(cone, y):
    """Return ``(phi(y), i)`` with ``i`` the smallest maximizing index."""
    y = _as_vector(y, cone.dim)
    vals = cone.dual_generators @ y
    i = int(np.argmax(vals))
    return float(vals[i]), i


def k_leq(cone, u, v, tol=0.0):
    """``u <=_K v`` up to ``tol`` on every generator inner product."""
    u = _as_vector(u, cone.dim, "u")
    v = _as_vector(v, cone.dim, "v")
    return bool(np.min(cone.dual_generators @ (v - u)) >= -tol)


def in_minus_int_k(cone, y, tol=1e-12):
    return phi(cone, y) < -tol
