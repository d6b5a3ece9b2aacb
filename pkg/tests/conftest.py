import numpy as np
import pytest
from hypothesis import settings

from picolsd import generators
from picolsd.qubits import is_ppt

settings.register_profile("picolsd", max_examples=25, deadline=None)
settings.load_profile("picolsd")

WERNER_PS = (0.4, 0.5, 2.0 / 3.0, 0.8, 0.95)


def werner_separability(p):
    return 1.5 * (1.0 - p)


def entangled_full_rank(count, start=0):
    """The first `count` NPT full-rank random states, from seed `start` on."""
    states = []
    seed = start
    while len(states) < count:
        rho = generators.random_density(4, seed)
        if not is_ppt(rho):
            states.append(rho)
        seed += 1
    return states


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def assert_allclose(actual, expected, atol):
    np.testing.assert_allclose(actual, expected, rtol=0, atol=atol)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def werner_08_decomposition():
    from picolsd.lsd import decompose

    return decompose(generators.werner_state(0.8))


@pytest.fixture
def state_dir(tmp_path):
    d = tmp_path / "states"
    d.mkdir()
    return d


@pytest.fixture(scope="session")
def corpus():
    """Acceptance corpus of entangled states and their decompositions, keyed by
    kind. Product-gamma states go through the SDP."""
    from picolsd.lsd import decompose

    states = {
        "full-rank": entangled_full_rank(50),
        "rank3-entangled": [
            generators.random_rank3_entangled_gamma(seed) for seed in range(50)
        ],
        "rank3-product": [
            generators.random_rank3_product_gamma(seed) for seed in range(50)
        ],
    }
    return {
        kind: [(rho, decompose(rho, analytic=False)) for rho in rhos]
        for kind, rhos in states.items()
    }
