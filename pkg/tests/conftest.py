import numpy as np
import pytest

from graphspectra.experiments import desk_graph, setup
from graphspectra.graph import build_graph, full_spectrum, laplacian
from graphspectra.signals import path_graph, random_geometric_graph


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def p3():
    return path_graph(3)


@pytest.fixture(scope="session")
def k2():
    return build_graph([(0, 1)], 2)


@pytest.fixture(scope="session")
def p3_spectrum(p3):
    return full_spectrum(laplacian(p3, "combinatorial"))


@pytest.fixture(scope="session")
def rgg200():
    g = random_geometric_graph(200, seed=3)
    L = laplacian(g, "normalized")
    S = full_spectrum(L)
    return g, L.with_lambda_max(S.lambda_max), S


@pytest.fixture(scope="session")
def desk():
    return setup(desk_graph(0), "normalized")


@pytest.fixture(scope="session")
def desk_comb():
    return setup(desk_graph(0), "combinatorial")
