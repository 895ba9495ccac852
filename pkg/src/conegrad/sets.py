"""Closed convex feasible sets with exact Euclidean projections."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InfeasibleBasePoint, InvalidSet

FEAS_TOL = 1e-9


def _vec(z, n, name="z"):
    z = np.asarray(z, dtype=float)
    if z.ndim == 0:
        z = z.reshape(1)
    if z.shape != (n,):
        raise DimensionMismatch(f"{name} has shape {z.shape}, expected ({n},)")
    return z


def project_simplex(z, scale=1.0):
    """Projection onto ``{x >= 0, sum(x) = scale}`` by sorting and thresholding."""
    u = np.sort(z)[::-1]
    css = np.cumsum(u) - scale
    idx = np.arange(1, z.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(z - theta, 0.0)


class FeasibleSet:
    """Base class for the supported constraint sets.

    Subclasses implement ``_project`` and ``_contains`` on validated vectors.
    """

    kind = ""
    n: int

    def project(self, z):
        return self._project(_vec(z, self.n))

    def project_shifted(self, x, g, tol=FEAS_TOL):
        """Projection of ``g`` onto the translated set ``C - x``."""
        x = _vec(x, self.n, "x")
        g = _vec(g, self.n, "g")
        if not self._contains(x, tol):
            raise InfeasibleBasePoint("base point x is not in the feasible set")
        return self._project(x + g) - x

    def contains(self, x, tol=FEAS_TOL):
        return self._contains(_vec(x, self.n, "x"), tol)

    def bounding_box(self):
        """Finite or infinite axis-aligned bounds of the set."""
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class WholeSpace(FeasibleSet):
    n: int
    kind = "whole_space"

    def _project(self, z):
        return z.copy()

    def project_shifted(self, x, g, tol=FEAS_TOL):
        x = _vec(x, self.n, "x")
        g = _vec(g, self.n, "g")
        if not self._contains(x, tol):
            raise InfeasibleBasePoint("base point x is not finite")
        return g.copy()

    def _contains(self, x, tol):
        return bool(np.all(np.isfinite(x)))

    def bounding_box(self):
        return np.full(self.n, -np.inf), np.full(self.n, np.inf)

    def to_dict(self):
        return {"type": self.kind, "dim": self.n}


@dataclass(frozen=True, eq=False)
class Box(FeasibleSet):
    lower: np.ndarray
    upper: np.ndarray
    n: int = field(init=False)
    kind = "box"

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise InvalidSet("box bounds must be vectors of equal length")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(lo > hi):
            raise InvalidSet("box requires lower <= upper componentwise")
        if np.any(lo == np.inf) or np.any(hi == -np.inf):
            raise InvalidSet("box is empty")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "n", lo.size)

    def _project(self, z):
        return np.clip(z, self.lower, self.upper)

    def _contains(self, x, tol):
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))

    def bounding_box(self):
        return self.lower.copy(), self.upper.copy()

    def to_dict(self):
        def enc(a):
            return [None if not np.isfinite(v) else float(v) for v in a]

        return {"type": self.kind, "lower": enc(self.lower), "upper": enc(self.upper)}


@dataclass(frozen=True, eq=False)
class Ball(FeasibleSet):
    center: np.ndarray
    radius: float
    n: int = field(init=False)
    kind = "ball"

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise InvalidSet("ball radius must be positive")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "n", c.size)

    def _project(self, z):
        d = z - self.center
        nrm = np.linalg.norm(d)
        if nrm <= self.radius:
            return z.copy()
        return self.center + d * (self.radius / nrm)

    def _contains(self, x, tol):
        return bool(np.linalg.norm(x - self.center) <= self.radius + tol)

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def to_dict(self):
        return {"type": self.kind, "center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True, eq=False)
class Simplex(FeasibleSet):
    """``{x >= 0, sum(x) = scale}``."""

    n: int
    scale: float = 1.0
    kind = "simplex"

    def __post_init__(self):
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise InvalidSet("simplex scale must be positive")
        if self.n < 1:
            raise InvalidSet("simplex dimension must be positive")
        object.__setattr__(self, "scale", float(self.scale))

    def _project(self, z):
        return project_simplex(z, self.scale)

    def _contains(self, x, tol):
        return bool(np.all(x >= -tol) and abs(x.sum() - self.scale) <= tol)

    def bounding_box(self):
        return np.zeros(self.n), np.full(self.n, self.scale)

    def to_dict(self):
        return {"type": self.kind, "dim": self.n, "scale": self.scale}


def set_from_dict(d):
    """Inverse of ``FeasibleSet.to_dict``; ``None`` bounds mean infinite."""
    kind = d.get("type")
    if kind == "whole_space":
        return WholeSpace(int(d["dim"]))
    if kind == "box":
        def dec(vals, fill):
            return [fill if v is None else float(v) for v in vals]

        return Box(dec(d["lower"], -np.inf), dec(d["upper"], np.inf))
    if kind == "ball":
        return Ball(d["center"], d["radius"])
    if kind == "simplex":
        return Simplex(int(d["dim"]), d.get("scale", 1.0))
    raise InvalidSet(f"unknown feasible set type {kind!r}")


def project(feasible_set, z):
    return feasible_set.project(z)


def project_shifted(feasible_set, x, g):
    return feasible_set.project_shifted(x, g)


def contains(feasible_set, x, tol=FEAS_TOL):
    return feasible_set.contains(x, tol)
