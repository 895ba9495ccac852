import numpy as np
import pytest

from conegrad import (
    Box,
    Descent,
    OracleBudgetExceeded,
    Stationary,
    dual_value,
    get_problem,
    h_value,
    project_shifted,
    solve_direction,
    theta_bruteforce,
)
from conegrad.errors import InfeasibleDirection, ScaleTooLarge
from conegrad.functions import Problem, VectorFunction
from conegrad.cone import new_cone, pareto_cone

REGISTRY = ["example41", "pareto_quad2", "scalar_quad"]


def _points(problem, rng, count):
    lo, hi = problem.feasible_set.bounding_box()
    lo = np.where(np.isfinite(lo), lo, -4.0)
    hi = np.where(np.isfinite(hi), hi, 4.0)
    return rng.uniform(lo, hi, size=(count, lo.size))


def _h_best(outcome):
    if isinstance(outcome, Stationary):
        return outcome.residual
    return outcome.certificate.primal


def test_h_value_examples(pq2, sq, ex41):
    assert h_value(pq2.cone, pq2.f, pq2.feasible_set, [3.0], [0.0], 1.0) == 0.0
    assert h_value(pq2.cone, pq2.f, pq2.feasible_set, [3.0], [-2.0], 1.0) == pytest.approx(-2.0)
    assert h_value(sq.cone, sq.f, sq.feasible_set, [1.0], [-2.0], 1.0) == pytest.approx(-2.0)
    with pytest.raises(InfeasibleDirection):
        h_value(ex41.cone, ex41.f, ex41.feasible_set, [2.0], [2.0], 1.0)


def test_dual_value_examples(pq2):
    q, v = dual_value(pq2.cone, pq2.f, pq2.feasible_set, [3.0], [0.0, 1.0], 1.0)
    assert (q, v[0]) == pytest.approx((-2.0, -2.0))
    q, v = dual_value(pq2.cone, pq2.f, pq2.feasible_set, [3.0], [1.0, 0.0], 1.0)
    assert (q, v[0]) == pytest.approx((-18.0, -6.0))
    q, v = dual_value(pq2.cone, pq2.f, pq2.feasible_set, [1.0], [0.5, 0.5], 1.0)
    assert q == 0.0 and v[0] == 0.0


def test_exact_direction_pareto_quad2(pq2):
    out = solve_direction(pq2.cone, pq2.f, pq2.feasible_set, [3.0], 1.0, sigma=0.0, fw_gap_tol=1e-12)
    assert isinstance(out, Descent)
    cert = out.certificate
    assert cert.primal == pytest.approx(-2.0, abs=1e-12)
    assert cert.v[0] == pytest.approx(-2.0, abs=1e-12)
    np.testing.assert_allclose(cert.weights, [0.0, 1.0], atol=1e-12)


def test_stationary_pareto_quad2(pq2):
    out = solve_direction(pq2.cone, pq2.f, pq2.feasible_set, [1.0], 1.0, sigma=0.0)
    assert isinstance(out, Stationary)
    assert abs(out.residual) <= 1e-8


def test_scalar_case_is_one_projection(sq):
    out = solve_direction(sq.cone, sq.f, sq.feasible_set, [1.5], 1.0, sigma=0.0)
    assert isinstance(out, Descent)
    assert out.fw_iterations == 1
    assert out.certificate.v[0] == -3.0


def test_theta_bruteforce_examples(pq2):
    assert theta_bruteforce(pq2.cone, pq2.f, pq2.feasible_set, [3.0]) == pytest.approx(-2.0, abs=1e-6)
    assert theta_bruteforce(pq2.cone, pq2.f, pq2.feasible_set, [1.0]) == pytest.approx(0.0, abs=1e-9)
    point = Problem("pt", pq2.f, pq2.cone, Box([0.5], [0.5]), [0.5])
    assert theta_bruteforce(point.cone, point.f, point.feasible_set, [0.5]) == 0.0


def test_theta_bruteforce_scale_limit():
    f = VectorFunction.from_expressions(["a", "b", "c"], ["a", "b", "c"])
    with pytest.raises(ScaleTooLarge):
        theta_bruteforce(pareto_cone(3), f, Box([0] * 3, [1] * 3), [0.5] * 3)


@pytest.mark.parametrize("name", REGISTRY)
def test_weak_duality_and_s_compatibility(name, rng):
    p = get_problem(name)
    k = p.cone.n_generators
    for x in _points(p, rng, 20):
        for lam in rng.dirichlet(np.ones(k), size=10):
            q, v = dual_value(p.cone, p.f, p.feasible_set, x, lam, 1.0)
            assert q <= h_value(p.cone, p.f, p.feasible_set, x, v, 1.0) + 1e-9
        for sigma in (0.0, 0.1, 0.5):
            out = solve_direction(p.cone, p.f, p.feasible_set, x, 1.0, sigma)
            if isinstance(out, Descent):
                c = out.certificate
                assert c.primal <= 1e-12
                assert abs(c.weights.sum() - 1) <= 1e-10 and c.weights.min() >= 0
                np.testing.assert_allclose(c.omega, c.weights @ p.cone.dual_generators, atol=1e-14)
                g = p.f.jacobian(x).T @ c.omega
                np.testing.assert_allclose(c.v, project_shifted(p.feasible_set, x, -g), atol=1e-10)
                np.testing.assert_allclose(c.jv, p.f.jacobian(x) @ c.v, atol=1e-12)
                assert c.dual <= c.primal + 1e-12


@pytest.mark.parametrize("name", REGISTRY)
@pytest.mark.parametrize("sigma", [0.05, 0.3, 0.9])
def test_sigma_soundness_against_grid(name, sigma, rng):
    p = get_problem(name)
    for x in _points(p, rng, 15):
        out = solve_direction(p.cone, p.f, p.feasible_set, x, 1.0, sigma)
        if isinstance(out, Descent):
            c = out.certificate
            theta = theta_bruteforce(p.cone, p.f, p.feasible_set, x)
            assert c.primal <= (1 - sigma) * c.dual + 1e-12
            assert c.primal <= (1 - sigma) * theta + 1e-3


@pytest.mark.parametrize("name", REGISTRY)
def test_exact_mode_matches_grid(name, rng):
    p = get_problem(name)
    for x in _points(p, rng, 15):
        out = solve_direction(p.cone, p.f, p.feasible_set, x, 1.0, 0.0, fw_gap_tol=1e-10, fw_max_iters=20000)
        theta = theta_bruteforce(p.cone, p.f, p.feasible_set, x)
        assert abs(_h_best(out) - theta) <= 1e-4


def test_dual_tracker_monotone(pq2):
    trace = []
    solve_direction(pq2.cone, pq2.f, pq2.feasible_set, [1.99], 1.0, 0.0, fw_max_iters=300, trace=trace)
    best = [t[1] for t in trace]
    assert all(b2 >= b1 - 1e-12 for b1, b2 in zip(best, best[1:]))
    h_best = [t[3] for t in trace]
    assert all(b2 <= b1 + 1e-12 for b1, b2 in zip(h_best, h_best[1:]))


def test_budget_exceeded_carries_best_certificate(pq2):
    out = solve_direction(pq2.cone, pq2.f, pq2.feasible_set, [1.99], 1.0, 0.0, fw_max_iters=50)
    assert isinstance(out, OracleBudgetExceeded)
    assert out.certificate is not None and out.fw_iterations == 50


def test_three_generator_cone_on_ball(rng):
    # a 3-generator cone in R^2 on a disk: exact mode vs grid
    cone = new_cone(2, [[1.0, 0.0], [1.0, 2.0], [2.0, 1.0]])
    f = VectorFunction.from_expressions(["(x - 1)^2 + y^2", "x^2 + (y - 1)^2"], ["x", "y"])
    from conegrad import Ball

    ball = Ball([0.0, 0.0], 2.0)
    for x in rng.uniform(-1.2, 1.2, size=(6, 2)):
        out = solve_direction(cone, f, ball, x, 1.0, 0.0, fw_max_iters=20000)
        theta = theta_bruteforce(cone, f, ball, x, lambda_grid_steps=60, v_grid=61, zoom_rounds=25)
        assert abs(_h_best(out) - theta) <= 1e-4
