import numpy as np
import pytest

from conegrad import get_problem, new_cone, pareto_cone


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def ex41():
    return get_problem("example41")


@pytest.fixture
def pq2():
    return get_problem("pareto_quad2")


@pytest.fixture
def sq():
    return get_problem("scalar_quad")


@pytest.fixture
def pareto2():
    return pareto_cone(2)


@pytest.fixture
def ex41_cone():
    return new_cone(2, [[1.0, 0.0], [1.0, 1.0]])
