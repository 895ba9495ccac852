"""Armijo backtracking with respect to a cone order."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BacktrackExhausted


@dataclass(frozen=True)
class ArmijoResult:
    j: int
    t: float
    trial_count: int
    x_next: np.ndarray
    f_next: np.ndarray


def armijo(cone, f, x, v, jv, delta=0.5, tau=2.0, max_backtracks=60, order_tol=1e-10, fx=None):
    """Smallest ``j >= 0`` with ``F(x + t v) <=_K F(x) + delta t J v`` for ``t = tau^-j``.

    ``jv`` is ``J_F(x) v``, computed once by the caller.  Raises
    :class:`BacktrackExhausted` if no ``j <= max_backtracks`` is accepted.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    jv = np.atleast_1d(np.asarray(jv, dtype=float))
    fx = f.eval(x) if fx is None else fx
    for j in range(max_backtracks + 1):
        t = tau ** (-j)
        x_next = x + t * v
        f_next = f.eval(x_next)
        if cone.k_leq(f_next, fx + delta * t * jv, order_tol):
            return ArmijoResult(j=j, t=t, trial_count=j + 1, x_next=x_next, f_next=f_next)
    raise BacktrackExhausted(max_backtracks)
