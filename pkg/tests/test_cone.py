import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conegrad import in_minus_int_k, k_leq, min_norm_in_hull, new_cone, pareto_cone, phi, phi_argmax
from conegrad.errors import (
    DimensionMismatch,
    DualNotPointed,
    EmptyGeneratorList,
    EmptyList,
    NotFullDimensionalDual,
    ZeroGenerator,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vec2 = arrays(float, 2, elements=finite)


def test_pareto_generators_unchanged():
    cone = new_cone(2, [[1, 0], [0, 1]])
    np.testing.assert_array_equal(cone.dual_generators, np.eye(2))


def test_example41_generators_normalized(ex41_cone):
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(ex41_cone.dual_generators, [[1, 0], [r, r]], rtol=0, atol=1e-15)
    assert np.allclose(np.linalg.norm(ex41_cone.dual_generators, axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize(
    "gens, err",
    [
        ([[1, 0], [-1, 0]], DualNotPointed),
        ([], EmptyGeneratorList),
        ([[1, 0], [0, 0]], ZeroGenerator),
        ([[1, 1], [2, 2]], NotFullDimensionalDual),
        ([[1, 0], [0, 1], [-1, -1]], DualNotPointed),
    ],
)
def test_invalid_cones(gens, err):
    with pytest.raises(err):
        new_cone(2, gens)


def test_boundary_zero_in_hull_detected():
    # 0 lies on the edge between (1,0) and (-1,0); the third generator keeps full rank
    with pytest.raises(DualNotPointed):
        new_cone(2, [[1, 0], [-1, 0], [0, 1]])


def test_dimension_mismatch(pareto2):
    with pytest.raises(DimensionMismatch):
        phi(pareto2, [1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatch):
        new_cone(2, [[1, 0, 0]])


@pytest.mark.parametrize("y, expected", [((-1, -2), -1.0), ((0, 0), 0.0)])
def test_phi_pareto(pareto2, y, expected):
    assert phi(pareto2, y) == expected


def test_phi_example41(ex41_cone):
    y = np.array([1.0, -9 / 16])
    expected = max(y[0], (y[0] + y[1]) / math.sqrt(2))
    assert expected == 1.0
    assert phi(ex41_cone, y) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("y, expected", [((3, 3), (3.0, 0)), ((3, -5), (3.0, 0)), ((-5, 3), (3.0, 1))])
def test_phi_argmax(pareto2, y, expected):
    assert phi_argmax(pareto2, y) == expected


def test_k_leq_examples(pareto2, ex41_cone):
    assert k_leq(pareto2, [1, 1], [2, 3], 0.0)
    assert k_leq(ex41_cone, [0, 0], [1, -9 / 16], 0.0)
    assert not k_leq(pareto2, [0, 0], [1, -9 / 16], 0.0)
    u = np.array([0.3, -2.0])
    assert k_leq(ex41_cone, u, u, 0.0)


@pytest.mark.parametrize("y, expected", [((-1, -1), True), ((0, -1), False), ((1, -5), False)])
def test_in_minus_int_k(pareto2, y, expected):
    assert in_minus_int_k(pareto2, y, 1e-12) is expected


def test_min_norm_in_hull_examples():
    d, w = min_norm_in_hull([[1, 0], [0, 1]])
    assert d == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    np.testing.assert_allclose(w, [0.5, 0.5], atol=1e-12)
    assert min_norm_in_hull([[1, 0], [-1, 0]])[0] == pytest.approx(0.0, abs=1e-12)
    assert min_norm_in_hull([[1, 0]])[0] == pytest.approx(1.0)
    with pytest.raises(EmptyList):
        min_norm_in_hull([])


def test_min_norm_in_hull_against_grid(rng):
    # oracle: dense grid over the 2-simplex of weights
    for _ in range(20):
        pts = rng.normal(size=(3, 2)) + rng.normal(size=2)
        d, w = min_norm_in_hull(pts)
        assert w.min() >= -1e-12 and abs(w.sum() - 1) < 1e-12
        assert np.linalg.norm(w @ pts) == pytest.approx(d, abs=1e-12)
        s = np.linspace(0, 1, 401)
        a, b = np.meshgrid(s, s)
        mask = a + b <= 1
        lam = np.stack([a[mask], b[mask], 1 - a[mask] - b[mask]], axis=1)
        grid_min = np.min(np.linalg.norm(lam @ pts, axis=1))
        assert d <= grid_min + 1e-12
        assert d >= grid_min - 0.05


CONES = {
    "pareto2": pareto_cone(2),
    "pareto3": pareto_cone(3),
    "ex41": new_cone(2, [[1.0, 0.0], [1.0, 1.0]]),
}


@settings(max_examples=200, deadline=None)
@given(y=vec2, z=vec2, s=st.floats(0, 1e3))
def test_phi_properties_2d(y, z, s):
    for name in ("pareto2", "ex41"):
        cone = CONES[name]
        assert phi(cone, s * y) == pytest.approx(s * phi(cone, y), rel=1e-10, abs=1e-10)
        assert phi(cone, y + z) <= phi(cone, y) + phi(cone, z) + 1e-10 * (1 + np.abs(y).sum() + np.abs(z).sum())
        assert abs(phi(cone, y) - phi(cone, z)) <= np.linalg.norm(y - z) * (1 + 1e-12) + 1e-10


@settings(max_examples=200, deadline=None)
@given(u=vec2, v=vec2)
def test_order_consistency(u, v):
    cone = CONES["ex41"]
    if k_leq(cone, u, v, 0.0):
        assert phi(cone, u - v) <= 0.0
    if in_minus_int_k(cone, u - v, 0.0):
        assert phi(cone, u - v) < 0.0
    # -K = {phi <= 0}
    assert k_leq(cone, np.zeros(2), u, 0.0) == (phi(cone, -u) <= 0.0)


@settings(max_examples=100, deadline=None)
@given(u=vec2, v=vec2, scales=st.lists(st.floats(1e-3, 1e3), min_size=2, max_size=2))
def test_predicates_scale_invariant(u, v, scales):
    raw = np.array([[1.0, 0.0], [1.0, 1.0]])
    a = new_cone(2, raw)
    b = new_cone(2, raw * np.array(scales)[:, None])
    assert k_leq(a, u, v, 0.0) == k_leq(b, u, v, 0.0)
    assert in_minus_int_k(a, u - v, 0.0) == in_minus_int_k(b, u - v, 0.0)
